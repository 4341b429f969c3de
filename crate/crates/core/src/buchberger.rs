//! Buchberger's algorithm with cofactor tracking, for well orders and for
//! homogeneous inputs under any order; minimal and reduced bases.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::division::{divide, divide_truncated, s_function, DivisionError};
use crate::orders::{Exponent, MonomialOrder, OrderKey};
use crate::polyring::{Coeff, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("order is not a well order and the inputs are not homogeneous")]
    NonTerminatingOrder,
    #[error("all input polynomials are zero")]
    AllZero,
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Division(#[from] DivisionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisOptions {
    /// Reduce S-functions by truncated rather than full division.
    pub use_truncated: bool,
    /// Keep every generator's expression in the inputs.
    pub track_cofactors: bool,
}

impl Default for BasisOptions {
    fn default() -> Self {
        BasisOptions {
            use_truncated: false,
            track_cofactors: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BasisResult<C> {
    pub generators: Vec<Poly<C>>,
    /// `generators[i] = sum_j cofactors[i][j] * inputs[j]`; empty when not
    /// tracked.
    pub cofactors: Vec<Vec<Poly<C>>>,
    pub order: MonomialOrder,
    /// Every generator is homogeneous in the total degree.
    pub homogeneous: bool,
}

impl<C: Coeff> BasisResult<C> {
    pub fn has_cofactors(&self) -> bool {
        self.cofactors.len() == self.generators.len()
    }

    pub fn leading_exponents(&self) -> Vec<Exponent> {
        self.generators
            .iter()
            .map(|g| g.leading_exponent(&self.order).expect("nonzero generator"))
            .collect()
    }

    /// Re-expands `sum_j cofactors[i][j] * inputs[j]`.
    pub fn expand_cofactors(&self, i: usize, inputs: &[Poly<C>]) -> Poly<C> {
        let n = self.order.nvars();
        self.cofactors[i]
            .iter()
            .zip(inputs)
            .fold(Poly::zero(n), |acc, (u, f)| acc.add(&u.mul(f)))
    }
}

struct Element<C> {
    poly: Poly<C>,
    lead: Exponent,
    lc: C,
    cof: Vec<Poly<C>>,
}

fn combine<C: Coeff>(
    a: &[Poly<C>],
    ca: (&Exponent, &C),
    b: &[Poly<C>],
    cb: (&Exponent, &C),
) -> Vec<Poly<C>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.mul_term(ca.0, ca.1).sub(&y.mul_term(cb.0, cb.1)))
        .collect()
}

/// Groebner basis of the ideal generated by `inputs`, tracking cofactors.
pub fn buchberger<C: Coeff>(
    inputs: &[Poly<C>],
    order: &MonomialOrder,
    use_truncated: bool,
) -> Result<BasisResult<C>, BasisError> {
    buchberger_with(
        inputs,
        order,
        BasisOptions {
            use_truncated,
            track_cofactors: true,
        },
    )
}

pub fn buchberger_with<C: Coeff>(
    inputs: &[Poly<C>],
    order: &MonomialOrder,
    options: BasisOptions,
) -> Result<BasisResult<C>, BasisError> {
    let n = order.nvars();
    for f in inputs {
        if f.nvars() != n {
            return Err(BasisError::DimensionMismatch {
                expected: n,
                found: f.nvars(),
            });
        }
    }
    if inputs.iter().all(Poly::is_zero) {
        return Err(BasisError::AllZero);
    }
    let homogeneous_inputs = inputs.iter().all(Poly::is_homogeneous);
    if !order.is_global() && !homogeneous_inputs {
        return Err(BasisError::NonTerminatingOrder);
    }
    let track = options.track_cofactors;
    let r = inputs.len();
    let unit_cof = |i: usize, s: &C| -> Vec<Poly<C>> {
        (0..r)
            .map(|j| {
                if j == i {
                    Poly::constant(n, s.clone())
                } else {
                    Poly::zero(n)
                }
            })
            .collect()
    };

    let mut elems: Vec<Element<C>> = Vec::new();
    let mut queue: BTreeSet<(OrderKey, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |elems: &mut Vec<Element<C>>,
                   queue: &mut BTreeSet<(OrderKey, usize, usize)>,
                   pending: &mut HashSet<(usize, usize)>,
                   poly: Poly<C>,
                   cof: Vec<Poly<C>>| {
        let (poly, s) = poly.normalize_with(order);
        let cof = if track && !s.is_one() {
            cof.iter().map(|u| u.scale(&s)).collect()
        } else {
            cof
        };
        let (lead, lc) = poly.leading(order).expect("nonzero");
        let k = elems.len();
        for (i, e) in elems.iter().enumerate() {
            let l = e.lead.lcm(&lead);
            queue.insert((order.key(&l), i, k));
            pending.insert((i, k));
        }
        elems.push(Element { poly, lead, lc, cof });
    };

    for (i, f) in inputs.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let cof = if track { unit_cof(i, &C::one()) } else { Vec::new() };
        add(&mut elems, &mut queue, &mut pending, f.clone(), cof);
    }

    while let Some((_, i, j)) = queue.pop_first() {
        pending.remove(&(i, j));
        let (li, lj) = (&elems[i].lead, &elems[j].lead);
        if li.coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..elems.len()).any(|k| {
            k != i
                && k != j
                && l.is_multiple_of(&elems[k].lead)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_function(&elems[i].poly, &elems[j].poly, order)?;
        if s.is_zero() {
            continue;
        }
        let divisors: Vec<Poly<C>> = elems.iter().map(|e| e.poly.clone()).collect();
        let res = if options.use_truncated {
            divide_truncated(&s, &divisors, order)?
        } else {
            divide(&s, &divisors, order)?
        };
        if res.remainder.is_zero() {
            continue;
        }
        let cof = if track {
            let mi = l.checked_sub(li).expect("lcm");
            let mj = l.checked_sub(lj).expect("lcm");
            let mut c = combine(
                &elems[i].cof,
                (&mi, &elems[j].lc),
                &elems[j].cof,
                (&mj, &elems[i].lc),
            );
            for (q, e) in res.quotients.iter().zip(&elems) {
                if q.is_zero() {
                    continue;
                }
                for (cj, ej) in c.iter_mut().zip(&e.cof) {
                    *cj = cj.sub(&q.mul(ej));
                }
            }
            c
        } else {
            Vec::new()
        };
        add(&mut elems, &mut queue, &mut pending, res.remainder, cof);
    }

    let homogeneous = elems.iter().all(|e| e.poly.is_homogeneous());
    let (generators, cofactors): (Vec<_>, Vec<_>) =
        elems.into_iter().map(|e| (e.poly, e.cof)).unzip();
    Ok(BasisResult {
        generators,
        cofactors: if track { cofactors } else { Vec::new() },
        order: order.clone(),
        homogeneous,
    })
}

/// Drops every generator whose leading exponent lies in the cone of another
/// (the earlier one survives among equal leading exponents).
pub fn minimalize<C: Coeff>(basis: &BasisResult<C>) -> BasisResult<C> {
    let leads = basis.leading_exponents();
    let keep: Vec<usize> = (0..leads.len())
        .filter(|&i| {
            !(0..leads.len()).any(|j| {
                j != i && leads[i].is_multiple_of(&leads[j]) && (leads[i] != leads[j] || j < i)
            })
        })
        .collect();
    BasisResult {
        generators: keep.iter().map(|&i| basis.generators[i].clone()).collect(),
        cofactors: if basis.has_cofactors() {
            keep.iter().map(|&i| basis.cofactors[i].clone()).collect()
        } else {
            Vec::new()
        },
        order: basis.order.clone(),
        homogeneous: basis.homogeneous,
    }
}

/// The reduced basis: minimal, monic, and no non-leading term in the
/// staircase. Generators are sorted by decreasing leading exponent.
pub fn reduce_basis<C: Coeff>(
    basis: &BasisResult<C>,
    order: &MonomialOrder,
) -> Result<BasisResult<C>, BasisError> {
    let min = minimalize(basis);
    let track = min.has_cofactors();
    let mut gens = Vec::with_capacity(min.generators.len());
    let mut cofs = Vec::new();
    for (i, g) in min.generators.iter().enumerate() {
        let (lead, lc) = g.leading(order).expect("nonzero");
        let inv = lc.inverse();
        let monic = g.scale(&inv);
        let tail = monic.sub(&Poly::monomial(lead.clone(), C::one()));
        let res = divide(&tail, &min.generators, order)?;
        let out = Poly::monomial(lead, C::one()).add(&res.remainder);
        if track {
            let mut c: Vec<Poly<C>> = min.cofactors[i].iter().map(|u| u.scale(&inv)).collect();
            for (q, gc) in res.quotients.iter().zip(&min.cofactors) {
                if q.is_zero() {
                    continue;
                }
                for (cj, uj) in c.iter_mut().zip(gc) {
                    *cj = cj.sub(&q.mul(uj));
                }
            }
            cofs.push(c);
        }
        gens.push(out);
    }
    let mut idx: Vec<usize> = (0..gens.len()).collect();
    let leads: Vec<Exponent> = gens
        .iter()
        .map(|g| g.leading_exponent(order).expect("nonzero"))
        .collect();
    idx.sort_by(|&a, &b| order.cmp_unchecked(&leads[b], &leads[a]));
    let homogeneous = gens.iter().all(Poly::is_homogeneous);
    Ok(BasisResult {
        generators: idx.iter().map(|&i| gens[i].clone()).collect(),
        cofactors: if track {
            idx.iter().map(|&i| cofs[i].clone()).collect()
        } else {
            Vec::new()
        },
        order: order.clone(),
        homogeneous,
    })
}

/// Every S-function of two generators divides to remainder zero.
pub fn satisfies_s_criterion<C: Coeff>(
    gens: &[Poly<C>],
    order: &MonomialOrder,
) -> Result<bool, DivisionError> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let s = s_function(&gens[i], &gens[j], order)?;
            if !divide(&s, gens, order)?.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
