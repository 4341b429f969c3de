//! Division of a polynomial by an ordered list of divisors: full division,
//! truncated division (stop at the first iterate whose leading exponent is
//! outside every divisor cone), degree-bounded series division, and
//! S-functions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::orders::{Exponent, MonomialOrder, OrderKey};
use crate::polyring::{Coeff, Poly};

/// Step budget for truncated division under orders that are not well
/// orders, where the iteration need not reach an exponent outside the cones.
pub const TRUNCATED_STEP_LIMIT: usize = 5_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error("order is not a well order and the inputs are not homogeneous")]
    NonTerminatingOrder,
    #[error("divisor {0} is zero")]
    ZeroDivisor(usize),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no exponent outside the divisor cones after {0} steps")]
    StepLimit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivisionResult<C> {
    pub quotients: Vec<Poly<C>>,
    pub remainder: Poly<C>,
    /// Quotients were tracked throughout, so `f = sum q_j g_j + R` holds.
    pub cofactor_ok: bool,
}

impl<C: Coeff> DivisionResult<C> {
    /// `sum q_j g_j + R`.
    pub fn recombine(&self, divisors: &[Poly<C>]) -> Poly<C> {
        let mut acc = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(divisors) {
            acc = acc.add(&q.mul(g));
        }
        acc
    }
}

/// The regions `Delta_1, ..., Delta_r` and the complement, given by the
/// ordered divisor leading exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    leads: Vec<Exponent>,
}

impl Partition {
    pub fn new(leads: Vec<Exponent>) -> Self {
        Partition { leads }
    }

    pub fn leads(&self) -> &[Exponent] {
        &self.leads
    }

    /// Index `j` with `alpha` in `Delta_j`, or `None` for the complement.
    pub fn region(&self, alpha: &Exponent) -> Option<usize> {
        self.leads.iter().position(|e| alpha.is_multiple_of(e))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Full,
    Truncated,
    Series(u64),
}

struct Divisor<C> {
    lead: Exponent,
    lc: C,
    /// Non-leading terms with their order keys.
    tail: Vec<(OrderKey, Exponent, C)>,
}

fn prepare<C: Coeff>(g: &Poly<C>, order: &MonomialOrder) -> Divisor<C> {
    let (lead, lc) = g.leading(order).expect("nonzero divisor");
    let tail = g
        .terms()
        .filter(|(e, _)| **e != lead)
        .map(|(e, c)| (order.key(e), e.clone(), c.clone()))
        .collect();
    Divisor { lead, lc, tail }
}

fn check_inputs<C: Coeff>(
    f: &Poly<C>,
    divisors: &[Poly<C>],
    order: &MonomialOrder,
) -> Result<(), DivisionError> {
    let n = order.nvars();
    for p in std::iter::once(f).chain(divisors) {
        if p.nvars() != n {
            return Err(DivisionError::DimensionMismatch {
                expected: n,
                found: p.nvars(),
            });
        }
    }
    if let Some(j) = divisors.iter().position(Poly::is_zero) {
        return Err(DivisionError::ZeroDivisor(j));
    }
    Ok(())
}

fn add_into<C: Coeff>(work: &mut BTreeMap<OrderKey, C>, k: OrderKey, c: C) {
    match work.entry(k) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().plus(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn run<C: Coeff>(
    f: &Poly<C>,
    divisors: &[Poly<C>],
    order: &MonomialOrder,
    mode: Mode,
    step_limit: Option<usize>,
) -> Result<DivisionResult<C>, DivisionError> {
    let n = order.nvars();
    let prepared: Vec<Divisor<C>> = divisors.iter().map(|g| prepare(g, order)).collect();
    let partition = Partition::new(prepared.iter().map(|d| d.lead.clone()).collect());
    let bound = match mode {
        Mode::Series(d) => Some(d),
        _ => None,
    };
    let mut work: BTreeMap<OrderKey, C> = f
        .terms()
        .filter(|(e, _)| bound.is_none_or(|d| e.degree() <= d))
        .map(|(e, c)| (order.key(e), c.clone()))
        .collect();
    let mut quotients: Vec<Poly<C>> = vec![Poly::zero(n); divisors.len()];
    let mut remainder = Poly::zero(n);
    let mut steps = 0usize;
    while let Some((key, c)) = work.pop_last() {
        let alpha = key.exponent(n);
        let Some(j) = partition.region(&alpha) else {
            if mode == Mode::Truncated {
                work.insert(key, c);
                remainder = Poly::from_terms(n, work.into_iter().map(|(k, c)| (k.exponent(n), c)));
                break;
            }
            remainder.add_term(alpha, c);
            continue;
        };
        steps += 1;
        if let Some(limit) = step_limit {
            if steps > limit {
                return Err(DivisionError::StepLimit(limit));
            }
        }
        let d = &prepared[j];
        let q = c.over(&d.lc);
        let shift = alpha.checked_sub(&d.lead).expect("in cone");
        let shift_key = order.key(&shift);
        for (tk, te, tc) in &d.tail {
            if let Some(b) = bound {
                if te.degree() + shift.degree() > b {
                    continue;
                }
            }
            add_into(&mut work, tk.add(&shift_key), tc.times(&q).negated());
        }
        quotients[j].add_term(shift, q);
    }
    Ok(DivisionResult {
        quotients,
        remainder,
        cofactor_ok: true,
    })
}

fn all_homogeneous<C: Coeff>(f: &Poly<C>, divisors: &[Poly<C>]) -> bool {
    f.is_homogeneous() && divisors.iter().all(|g| g.is_homogeneous())
}

/// Full division. Requires a well order, or homogeneous inputs.
pub fn divide<C: Coeff>(
    f: &Poly<C>,
    divisors: &[Poly<C>],
    order: &MonomialOrder,
) -> Result<DivisionResult<C>, DivisionError> {
    check_inputs(f, divisors, order)?;
    if !order.is_global() && !f.is_zero() && !all_homogeneous(f, divisors) {
        return Err(DivisionError::NonTerminatingOrder);
    }
    run(f, divisors, order, Mode::Full, None)
}

/// Truncated division: reduces leading terms only and returns the first
/// iterate whose leading exponent lies outside every divisor cone (or zero).
/// Under orders that are not well orders the iteration may not reach such
/// an iterate; it is cut off after [`TRUNCATED_STEP_LIMIT`] steps.
pub fn divide_truncated<C: Coeff>(
    f: &Poly<C>,
    divisors: &[Poly<C>],
    order: &MonomialOrder,
) -> Result<DivisionResult<C>, DivisionError> {
    check_inputs(f, divisors, order)?;
    let limit = (!order.is_global()).then_some(TRUNCATED_STEP_LIMIT);
    run(f, divisors, order, Mode::Truncated, limit)
}

/// Division discarding every generated term of total degree above
/// `degree`. Under a local order that refines negative degree this agrees
/// with power-series division modulo `m^(degree+1)`.
pub fn divide_series<C: Coeff>(
    f: &Poly<C>,
    divisors: &[Poly<C>],
    order: &MonomialOrder,
    degree: u64,
) -> Result<DivisionResult<C>, DivisionError> {
    check_inputs(f, divisors, order)?;
    run(f, divisors, order, Mode::Series(degree), None)
}

/// `S(f, g) = lc(g) m f - lc(f) m' g` with `m lt(f) = m' lt(g) = lcm`.
pub fn s_function<C: Coeff>(
    f: &Poly<C>,
    g: &Poly<C>,
    order: &MonomialOrder,
) -> Result<Poly<C>, DivisionError> {
    let (ef, cf) = f.leading(order).map_err(|_| DivisionError::ZeroPolynomial)?;
    let (eg, cg) = g.leading(order).map_err(|_| DivisionError::ZeroPolynomial)?;
    let l = ef.lcm(&eg);
    let m = l.checked_sub(&ef).expect("lcm");
    let m2 = l.checked_sub(&eg).expect("lcm");
    Ok(f.mul_term(&m, &cg).sub(&g.mul_term(&m2, &cf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::text::{parse_poly, Names};
    use crate::polyring::{ParamPoly, QPoly, Rat};
    use proptest::prelude::*;

    fn names() -> Names {
        Names::new(&["a"], &["x1", "x2"])
    }
    fn p(s: &str) -> ParamPoly {
        parse_poly(s, &names()).unwrap()
    }
    fn local() -> MonomialOrder {
        MonomialOrder::new(2, vec![vec![-1, -1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn hand_division() {
        let r = divide(&p("x1^2*x2"), &[p("x1*x2 - 1")], &MonomialOrder::grevlex(2)).unwrap();
        assert_eq!(r.quotients, vec![p("x1")]);
        assert_eq!(r.remainder, p("x1"));
        let g = p("a*x2 - x1*x2 + x1");
        let r = divide(&g, std::slice::from_ref(&g), &MonomialOrder::grevlex(2)).unwrap();
        assert_eq!(r.quotients, vec![p("1")]);
        assert!(r.remainder.is_zero());
        let r = divide(&p("x1"), &[p("x2")], &MonomialOrder::grevlex(2)).unwrap();
        assert!(r.quotients[0].is_zero());
        assert_eq!(r.remainder, p("x1"));
    }

    #[test]
    fn full_division_refuses_local_orders() {
        assert_eq!(
            divide(&p("x1"), &[p("x1 - x1^2")], &local()),
            Err(DivisionError::NonTerminatingOrder)
        );
        // homogeneous inputs are fine
        assert!(divide(&p("x1*x2"), &[p("x1 - x2")], &local()).is_ok());
        assert_eq!(
            divide(&p("x1"), &[p("0")], &MonomialOrder::lex(2)),
            Err(DivisionError::ZeroDivisor(0))
        );
    }

    #[test]
    fn truncated_examples() {
        let g = p("a*x2 - x1*x2 + x1");
        let r = divide_truncated(&g, std::slice::from_ref(&g), &local()).unwrap();
        assert_eq!(r.quotients, vec![p("1")]);
        assert!(r.remainder.is_zero());
        let r = divide_truncated(&p("x1"), std::slice::from_ref(&g), &local()).unwrap();
        assert!(r.quotients[0].is_zero());
        assert_eq!(r.remainder, p("x1"));
        // one step: a*x1*x2 - x1*g = x1^2*x2 - x1^2, whose lead x1^2 is outside x2 + N^2
        let f = p("a*x2*x1");
        let r = divide_truncated(&f, std::slice::from_ref(&g), &local()).unwrap();
        assert_eq!(r.quotients, vec![p("x1")]);
        assert_eq!(r.remainder, p("x1^2*x2 - x1^2"));
        assert_eq!(r.recombine(std::slice::from_ref(&g)), f);
    }

    #[test]
    fn truncated_division_can_fail_to_stop() {
        assert_eq!(
            divide_truncated(&p("x1"), &[p("x1 - x1^2")], &local()),
            Err(DivisionError::StepLimit(TRUNCATED_STEP_LIMIT))
        );
    }

    #[test]
    fn series_division_inverts_unit() {
        // x1 = (x1 - x1^2)(1 + x1 + x1^2 + ...) in the local ring
        let r = divide_series(&p("x1"), &[p("x1 - x1^2")], &local(), 4).unwrap();
        assert_eq!(r.quotients, vec![p("1 + x1 + x1^2 + x1^3")]);
        assert!(r.remainder.is_zero());
    }

    #[test]
    fn s_function_examples() {
        let s = s_function(&p("x1^2 - x2"), &p("x1*x2 - 1"), &MonomialOrder::grevlex(2)).unwrap();
        assert_eq!(s, p("x1 - x2^2"));
        let g = p("x1*x2 - 1");
        assert!(s_function(&g, &g, &MonomialOrder::grevlex(2)).unwrap().is_zero());
        let s = s_function(&p("a*x1 + x2"), &p("x1"), &MonomialOrder::lex(2)).unwrap();
        assert_eq!(s, p("x2"));
        assert_eq!(
            s_function(&p("0"), &g, &MonomialOrder::lex(2)),
            Err(DivisionError::ZeroPolynomial)
        );
    }

    #[test]
    fn partition_regions() {
        let part = Partition::new(vec![Exponent::new(vec![1, 0]), Exponent::new(vec![0, 1])]);
        assert_eq!(part.region(&Exponent::new(vec![1, 1])), Some(0));
        assert_eq!(part.region(&Exponent::new(vec![0, 2])), Some(1));
        assert_eq!(part.region(&Exponent::new(vec![0, 0])), None);
    }

    fn arb_qpoly(n: usize, max_terms: usize) -> impl Strategy<Value = QPoly> {
        prop::collection::vec((prop::collection::vec(0u32..3, n), -4i64..=4), 0..=max_terms).prop_map(
            move |ts| {
                Poly::from_terms(
                    n,
                    ts.into_iter()
                        .map(|(e, c)| (Exponent::new(e), Rat::from_integer(c.into()))),
                )
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn truncated_identity_under_local_orders(
            (f, gs) in (1usize..=3).prop_flat_map(|n| (
                arb_qpoly(n, 5),
                prop::collection::vec(arb_qpoly(n, 3), 1..=3),
            ))
        ) {
            let gs: Vec<QPoly> = gs.into_iter().filter(|g| !g.is_zero()).collect();
            prop_assume!(!gs.is_empty());
            let order = MonomialOrder::neg_grevlex(f.nvars());
            match divide_truncated(&f, &gs, &order) {
                Ok(r) => {
                    prop_assert_eq!(r.recombine(&gs), f.clone());
                    let part = Partition::new(gs.iter().map(|g| g.leading_exponent(&order).unwrap()).collect());
                    if let Some(e) = r.remainder.leading_exponent(&order) {
                        prop_assert_eq!(part.region(&e), None);
                    }
                }
                Err(e) => prop_assert_eq!(e, DivisionError::StepLimit(TRUNCATED_STEP_LIMIT)),
            }
        }

        #[test]
        fn series_identity_modulo_degree(
            (f, gs, d) in (1usize..=3).prop_flat_map(|n| (
                arb_qpoly(n, 5),
                prop::collection::vec(arb_qpoly(n, 3), 1..=3),
                1u64..=5,
            ))
        ) {
            let gs: Vec<QPoly> = gs.into_iter().filter(|g| !g.is_zero()).collect();
            prop_assume!(!gs.is_empty());
            let order = MonomialOrder::neg_grevlex(f.nvars());
            let r = divide_series(&f, &gs, &order, d).unwrap();
            let diff = f.sub(&r.recombine(&gs));
            prop_assert!(diff.min_degree().is_none_or(|m| m > d));
        }
    }
}
