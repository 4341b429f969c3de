//! Sparse polynomials in the main variables with coefficients in `Q` or in
//! fractions of parameter polynomials.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::orders::{Exponent, MonomialOrder};

pub mod gcd;
mod scalar;
pub mod text;

pub use scalar::{AScalar, ParamScalar, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("zero polynomial has no leading data")]
    ZeroPolynomial,
    #[error("denominator vanishes at the point for the term with exponent {0:?}")]
    DenominatorVanishes(Vec<u32>),
    #[error("denominator lies in the prime ideal")]
    DenominatorInQ,
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
}

/// Coefficient ring operations shared by `Q` and parameter fractions.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    /// Panics on division by zero.
    fn over(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    /// Nonzero factor that brings a coefficient list into a tidy normal
    /// shape (integer-primitive over `Q`, denominator-free for fractions).
    /// The first entry is the leading coefficient.
    fn content_scale(coeffs: &[&Self]) -> Self;
}

/// A polynomial `sum c_a x^a` in `nvars` main variables.
#[derive(Clone, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

pub type QPoly = Poly<Rat>;
pub type ParamPoly = Poly<ParamScalar>;

impl<C: Coeff> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { nvars, terms }
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, i), C::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, C)>>(nvars: usize, it: I) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exponent, C)> {
        self.terms.into_iter()
    }

    /// The Newton diagram.
    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &Exponent) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
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

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::DimensionMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.negated());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1.times(c2));
            }
        }
        Ok(out)
    }

    /// Panics on dimension mismatch; see [`Self::checked_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("polynomial dimensions")
    }

    /// Panics on dimension mismatch; see [`Self::checked_sub`].
    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("polynomial dimensions")
    }

    /// Panics on dimension mismatch; see [`Self::checked_mul`].
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("polynomial dimensions")
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.negated())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        self.map_coeffs(|x| x.times(c))
    }

    /// `c * x^e * self`.
    pub fn mul_term(&self, e: &Exponent, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(x, y)| (x.add(e), y.times(c)))
                .filter(|(_, y)| !y.is_zero())
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Leading exponent and coefficient, by reference.
    pub fn lead(&self, order: &MonomialOrder) -> Option<(&Exponent, &C)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp_unchecked(a, b))
    }

    pub fn leading(&self, order: &MonomialOrder) -> Result<(Exponent, C), PolyError> {
        self.lead(order)
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_exponent(&self, order: &MonomialOrder) -> Option<Exponent> {
        self.lead(order).map(|(e, _)| e.clone())
    }

    /// Terms in decreasing order.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(&Exponent, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| order.cmp_unchecked(b, a));
        v
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Exponent::degree).max()
    }

    pub fn min_degree(&self) -> Option<u64> {
        self.terms.keys().map(Exponent::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Exponent::degree);
        match it.next() {
            Some(d) => it.all(|x| x == d),
            None => true,
        }
    }

    /// Homogeneous with respect to integer weights.
    pub fn is_weighted_homogeneous(&self, weights: &[i64]) -> bool {
        let w = |e: &Exponent| -> i64 {
            weights
                .iter()
                .zip(e.iter())
                .map(|(a, &b)| a * i64::from(b))
                .sum()
        };
        let mut it = self.terms.keys().map(w);
        match it.next() {
            Some(d) => it.all(|x| x == d),
            None => true,
        }
    }

    /// Drops every term of total degree above `d`.
    pub fn truncate(&self, d: u64) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Adds a trailing variable `z` making every term of degree `deg(self)`.
    pub fn homogenize(&self) -> Result<Self, PolyError> {
        let d = self.total_degree().ok_or(PolyError::ZeroPolynomial)?;
        Ok(Poly {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.concat(&[(d - e.degree()) as u32]), c.clone()))
                .collect(),
        })
    }

    /// Sets the trailing variable to one.
    pub fn dehomogenize(&self) -> Self {
        assert!(self.nvars > 0, "nothing to dehomogenize");
        let mut out = Poly::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            out.add_term(Exponent::from(&e[..self.nvars - 1]), c.clone());
        }
        out
    }

    /// Rescales so coefficients are in the normal shape chosen by the
    /// coefficient type; returns the factor used.
    pub fn normalize_with(&self, order: &MonomialOrder) -> (Self, C) {
        let Some((lead, _)) = self.lead(order) else {
            return (self.clone(), C::one());
        };
        let mut coeffs: Vec<&C> = vec![&self.terms[lead]];
        coeffs.extend(self.terms.iter().filter(|(e, _)| *e != lead).map(|(_, c)| c));
        let s = C::content_scale(&coeffs);
        if s.is_one() {
            (self.clone(), s)
        } else {
            (self.scale(&s), s)
        }
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.lead(order) {
            Some((_, c)) => self.scale(&c.inverse()),
            None => self.clone(),
        }
    }

    /// Embeds into a larger ring by appending `extra` zero exponents.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let tail = vec![0; extra];
        Poly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.concat(&tail), c.clone()))
                .collect(),
        }
    }
}

impl<C: fmt::Debug> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| format!("({c:?})*x{e:?}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A point of parameter space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPoint {
    pub coords: Vec<Rat>,
}

impl ParamPoint {
    pub fn new(coords: Vec<Rat>) -> Self {
        ParamPoint { coords }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        ParamPoint {
            coords: v.iter().map(|&x| Rat::from_integer(x.into())).collect(),
        }
    }
}

impl QPoly {
    pub fn to_param(&self) -> ParamPoly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), ParamScalar::from_rat(c.clone())))
                .collect(),
        }
    }

    /// Value at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut total = Rat::from_integer(0.into());
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }
}

impl ParamPoly {
    /// Evaluates every coefficient at the parameter point.
    pub fn specialize(&self, point: &ParamPoint) -> Result<QPoly, PolyError> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let v = c
                .eval(&point.coords)
                .ok_or_else(|| PolyError::DenominatorVanishes(e.as_slice().to_vec()))?;
            out.add_term(e.clone(), v);
        }
        Ok(out)
    }

    /// Multiplies by a common denominator so every coefficient is a
    /// parameter polynomial; returns the multiplier.
    pub fn clear_denominators(&self) -> (ParamPoly, AScalar) {
        let mut den = AScalar::one();
        for c in self.terms.values() {
            if !c.den().is_one() && den.exact_div(c.den()).is_none() {
                den = den.times(c.den());
            }
        }
        if den.is_one() {
            return (self.clone(), den);
        }
        let s = ParamScalar::from_poly(den.clone());
        (self.scale(&s), den)
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.values().all(ParamScalar::is_polynomial)
    }

    /// True when no main variable occurs.
    pub fn is_x_free(&self) -> bool {
        self.terms.keys().all(Exponent::is_zero)
    }

    /// Moves parameters into trailing main variables: the result lives in
    /// `Q[x, a]` with `nvars + nparams` variables. Coefficients must be
    /// polynomial.
    pub fn to_flat(&self, nparams: usize) -> QPoly {
        let mut out = Poly::zero(self.nvars + nparams);
        for (e, c) in &self.terms {
            assert!(c.is_polynomial(), "flattening needs polynomial coefficients");
            for (ae, ac) in c.num().terms() {
                let mut tail = ae.clone();
                tail.resize(nparams, 0);
                out.add_term(e.concat(&tail), ac.clone());
            }
        }
        out
    }

    /// Inverse of [`Self::to_flat`].
    pub fn from_flat(p: &QPoly, nparams: usize) -> ParamPoly {
        let n = p.nvars - nparams;
        let mut acc: BTreeMap<Exponent, Vec<(Vec<u32>, Rat)>> = BTreeMap::new();
        for (e, c) in &p.terms {
            acc.entry(Exponent::from(&e[..n]))
                .or_default()
                .push((e[n..].to_vec(), c.clone()));
        }
        Poly {
            nvars: n,
            terms: acc
                .into_iter()
                .map(|(e, v)| (e, ParamScalar::from_poly(AScalar::from_terms(v))))
                .filter(|(_, c)| !Coeff::is_zero(c))
                .collect(),
        }
    }
}

/// Embeds a parameter polynomial as an `x`-free polynomial in `Q[x, a]`.
pub fn flat_scalar(s: &AScalar, nvars: usize, nparams: usize) -> QPoly {
    let mut out = Poly::zero(nvars + nparams);
    for (e, c) in s.terms() {
        let mut tail = e.clone();
        tail.resize(nparams, 0);
        out.add_term(Exponent::zero(nvars).concat(&tail), c.clone());
    }
    out
}

/// Reads an `x`-free polynomial of `Q[x, a]` as a parameter polynomial.
pub fn unflat_scalar(p: &QPoly, nparams: usize) -> AScalar {
    let n = p.nvars() - nparams;
    AScalar::from_terms(p.terms().map(|(e, c)| {
        debug_assert!(e[..n].iter().all(|&x| x == 0));
        (e[n..].to_vec(), c.clone())
    }))
}

/// Decides `s ∈ Q` given a lex Groebner basis of `Q`.
pub fn coeff_in_q(s: &ParamScalar, q_basis: &[AScalar]) -> Result<bool, PolyError> {
    if s.den().normal_form(q_basis).is_zero() {
        return Err(PolyError::DenominatorInQ);
    }
    Ok(s.num().normal_form(q_basis).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> ParamPoly {
        Poly::var(n, i)
    }
    fn a() -> ParamPoly {
        Poly::constant(2, ParamScalar::from_poly(AScalar::var(0)))
    }
    fn intro() -> ParamPoly {
        a().mul(&x(2, 1))
            .sub(&x(2, 0).mul(&x(2, 1)))
            .add(&x(2, 0))
    }
    fn local() -> MonomialOrder {
        MonomialOrder::new(2, vec![vec![-1, -1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn ring_examples() {
        let f = intro();
        assert_eq!(f.add(&Poly::zero(2)), f);
        let s = x(2, 0).add(&x(2, 1));
        let d = x(2, 0).sub(&x(2, 1));
        let sq = x(2, 0).mul(&x(2, 0)).sub(&x(2, 1).mul(&x(2, 1)));
        assert_eq!(s.mul(&d), sq);
        let rest = f.sub(&a().mul(&x(2, 1)));
        assert_eq!(rest, x(2, 0).sub(&x(2, 0).mul(&x(2, 1))));
        assert!(matches!(
            f.checked_add(&x(3, 0)),
            Err(PolyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn leading_data() {
        let (e, c) = intro().leading(&local()).unwrap();
        assert_eq!(e, Exponent::new(vec![0, 1]));
        assert_eq!(c, ParamScalar::from_poly(AScalar::var(0)));
        let at0 = intro().specialize(&ParamPoint::from_ints(&[0])).unwrap();
        assert_eq!(at0.leading(&local()).unwrap().0, Exponent::new(vec![1, 0]));
        assert_eq!(
            Poly::<Rat>::zero(2).leading(&local()),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn homogenize_examples() {
        let h = intro().homogenize().unwrap();
        let z = x(3, 2);
        let a3 = Poly::constant(3, ParamScalar::from_poly(AScalar::var(0)));
        let expected = a3
            .mul(&x(3, 1))
            .mul(&z)
            .sub(&x(3, 0).mul(&x(3, 1)))
            .add(&x(3, 0).mul(&z));
        assert_eq!(h, expected);
        assert_eq!(h.dehomogenize(), intro());
        let one: ParamPoly = Poly::one(2);
        assert_eq!(x(2, 0).add(&one).homogenize().unwrap(), x(3, 0).add(&x(3, 2)));
        assert_eq!(z.mul(&z).dehomogenize(), Poly::one(2));
        assert_eq!(
            x(3, 0).mul(&z).add(&x(3, 0)).dehomogenize(),
            x(2, 0).scale(&ParamScalar::from_int(2))
        );
        assert!(Poly::<Rat>::zero(2).homogenize().is_err());
    }

    #[test]
    fn specialization() {
        let two = intro().specialize(&ParamPoint::from_ints(&[2])).unwrap();
        let expected = Poly::from_terms(
            2,
            [
                (Exponent::new(vec![0, 1]), Rat::from_integer(2.into())),
                (Exponent::new(vec![1, 1]), Rat::from_integer((-1).into())),
                (Exponent::new(vec![1, 0]), Rat::from_integer(1.into())),
            ],
        );
        assert_eq!(two, expected);
        let pole = x(2, 0).scale(&ParamScalar::new(AScalar::one(), AScalar::var(0)));
        assert!(matches!(
            pole.specialize(&ParamPoint::from_ints(&[0])),
            Err(PolyError::DenominatorVanishes(_))
        ));
    }

    #[test]
    fn membership_in_q() {
        let av = AScalar::var(0);
        let bv = AScalar::var(1);
        let one = AScalar::one();
        assert!(coeff_in_q(&av.clone().into(), std::slice::from_ref(&av)).unwrap());
        assert!(!coeff_in_q(&av.plus(&one).into(), std::slice::from_ref(&av)).unwrap());
        let s: ParamScalar = av.times(&bv).minus(&bv).into();
        assert!(coeff_in_q(&s, &[av.minus(&one)]).unwrap());
        let bad = ParamScalar::new(one.clone(), av.clone());
        assert_eq!(coeff_in_q(&bad, &[av]), Err(PolyError::DenominatorInQ));
    }

    #[test]
    fn flattening_round_trip() {
        let f = intro();
        let flat = f.to_flat(1);
        assert_eq!(flat.nvars(), 3);
        assert_eq!(ParamPoly::from_flat(&flat, 1), f);
    }

    fn arb_scalar(m: usize) -> impl Strategy<Value = AScalar> {
        prop::collection::vec((prop::collection::vec(0u32..3, m), -3i64..=3), 0..3).prop_map(
            |ts| {
                AScalar::from_terms(
                    ts.into_iter()
                        .map(|(e, c)| (e, Rat::from_integer(c.into()))),
                )
            },
        )
    }

    fn arb_poly(n: usize, m: usize) -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec((prop::collection::vec(0u32..3, n), arb_scalar(m)), 0..=8).prop_map(
            move |ts| {
                Poly::from_terms(
                    n,
                    ts.into_iter()
                        .map(|(e, c)| (Exponent::new(e), ParamScalar::from_poly(c))),
                )
            },
        )
    }

    fn arb_triple() -> impl Strategy<Value = (ParamPoly, ParamPoly, ParamPoly)> {
        (1usize..=4, 0usize..=3)
            .prop_flat_map(|(n, m)| (arb_poly(n, m), arb_poly(n, m), arb_poly(n, m)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms((f, g, h) in arb_triple()) {
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
            prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
            prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert!(f.sub(&f).is_zero());
        }

        #[test]
        fn leading_exponents_add((f, g, _) in arb_triple()) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let order = MonomialOrder::neg_grevlex(f.nvars());
            let (ef, _) = f.leading(&order).unwrap();
            let (eg, _) = g.leading(&order).unwrap();
            let (efg, _) = f.mul(&g).leading(&order).unwrap();
            prop_assert_eq!(efg, ef.add(&eg));
        }

        #[test]
        fn specialization_is_multiplicative(
            (f, g, _) in arb_triple(),
            pt in prop::collection::vec(-3i64..=3, 3),
        ) {
            let p = ParamPoint::from_ints(&pt);
            let lhs = f.mul(&g).specialize(&p).unwrap();
            let rhs = f.specialize(&p).unwrap().mul(&g.specialize(&p).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn homogenize_is_homogeneous_and_invertible((f, _, _) in arb_triple()) {
            prop_assume!(!f.is_zero());
            let h = f.homogenize().unwrap();
            prop_assert!(h.is_homogeneous());
            prop_assert_eq!(h.dehomogenize(), f);
        }

        #[test]
        fn fraction_field_axioms(
            (p, q, r) in (arb_scalar(2), arb_scalar(2), arb_scalar(2)),
        ) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let x = ParamScalar::new(r.clone(), p.clone());
            let y = ParamScalar::new(p.clone(), q.clone());
            let xy = x.times(&y);
            prop_assert_eq!(xy.clone(), ParamScalar::new(r.clone(), q.clone()));
            prop_assert_eq!(x.plus(&y).minus(&y), x.clone());
            prop_assert!(xy.over(&y).minus(&x).is_zero());
        }
    }
}
