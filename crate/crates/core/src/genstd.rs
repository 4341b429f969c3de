//! Generic standard bases over a prime ideal `Q` of the parameter ring:
//! leading data and division modulo `Q`, the constructions for well orders
//! (block order on `(x, a)`) and for arbitrary orders (homogenization),
//! truncated generic reduced bases, and verification by specialization.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::buchberger::{buchberger, reduce_basis, BasisError};
use crate::division::{divide, divide_series, DivisionError};
use crate::polyring::gcd::display_key;
use crate::orders::{CompositeOrder, CompositeVariant, Exponent, MonomialOrder, OrderKind};
use crate::polyring::{
    flat_scalar, unflat_scalar, AScalar, Coeff, ParamPoint, ParamPoly, ParamScalar, Poly,
    PolyError, QPoly, Rat,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("the parameter ideal contains 1")]
    QContainsOne,
    #[error("every coefficient lies in the parameter ideal")]
    AllCoefficientsInQ,
    #[error("a denominator lies in the parameter ideal")]
    DenominatorInQ,
    #[error("order is not global")]
    NotGlobal,
    #[error("truncation degree {given} is below the staircase degree {needed}")]
    TruncationTooSmall { needed: u64, given: u64 },
    #[error("sample {0} does not lie on the variety of the parameter ideal")]
    SampleOffVariety(usize),
    #[error("sample {0} lies on the excluded hypersurface")]
    SampleOnExcludedLocus(usize),
    #[error("sample {index} has {found} coordinates, expected {expected}")]
    SampleLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot sample points of this parameter variety (needs a triangular linear lex basis)")]
    SamplerUnsupported,
    #[error("no admissible sample found after {0} attempts")]
    SamplerExhausted(usize),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A prime ideal of `Q[a]`, given by generators and its reduced lex basis.
/// Primality is the caller's claim and is not checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    nparams: usize,
    q_gens: Vec<AScalar>,
    q_basis: Vec<AScalar>,
    pub assumed_prime: bool,
}

impl PrimeContext {
    pub fn new(nparams: usize, q_gens: Vec<AScalar>) -> Result<Self, GenError> {
        let q_basis = lex_basis(nparams, &q_gens)?;
        if q_basis.iter().any(AScalar::is_constant) {
            return Err(GenError::QContainsOne);
        }
        Ok(PrimeContext {
            nparams,
            q_gens,
            q_basis,
            assumed_prime: true,
        })
    }

    /// The zero ideal.
    pub fn zero(nparams: usize) -> Self {
        PrimeContext {
            nparams,
            q_gens: Vec::new(),
            q_basis: Vec::new(),
            assumed_prime: true,
        }
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn gens(&self) -> &[AScalar] {
        &self.q_gens
    }

    pub fn basis(&self) -> &[AScalar] {
        &self.q_basis
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.q_basis.is_empty()
    }

    pub fn reduce(&self, s: &AScalar) -> AScalar {
        s.normal_form(&self.q_basis)
    }

    pub fn contains(&self, s: &AScalar) -> bool {
        self.reduce(s).is_zero()
    }

    /// Whether a coefficient lies in `Q`; its denominator must not.
    pub fn scalar_in_q(&self, s: &ParamScalar) -> Result<bool, GenError> {
        crate::polyring::coeff_in_q(s, &self.q_basis).map_err(|_| GenError::DenominatorInQ)
    }

    pub fn contains_point(&self, c: &ParamPoint) -> bool {
        self.q_gens.iter().all(|q| Zero::is_zero(&q.eval(&c.coords)))
    }

    /// Replaces every polynomial coefficient by its normal form modulo `Q`.
    pub fn reduce_poly(&self, f: &ParamPoly) -> ParamPoly {
        if self.is_zero_ideal() {
            return f.clone();
        }
        f.map_coeffs(|c| {
            ParamScalar::new(self.reduce(c.num()), c.den().clone())
        })
    }
}

/// Reduced lex basis of an ideal of `Q[a]`.
fn lex_basis(nparams: usize, gens: &[AScalar]) -> Result<Vec<AScalar>, GenError> {
    let polys: Vec<QPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| flat_scalar(g, 0, nparams))
        .collect();
    if polys.is_empty() {
        return Ok(Vec::new());
    }
    let order = MonomialOrder::lex(nparams);
    let b = crate::buchberger::buchberger_with(
        &polys,
        &order,
        crate::buchberger::BasisOptions {
            use_truncated: false,
            track_cofactors: false,
        },
    )?;
    let r = reduce_basis(&b, &order)?;
    Ok(r.generators.iter().map(|g| unflat_scalar(g, nparams)).collect())
}

/// A product of parameter polynomials, kept factored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactoredScalar {
    factors: Vec<(AScalar, u32)>,
}

impl FactoredScalar {
    pub fn one() -> Self {
        FactoredScalar::default()
    }

    /// Multiplies in `p`; constants are dropped and monomial content is
    /// split into single parameters.
    pub fn push(&mut self, p: &AScalar) {
        if p.is_zero() || p.is_constant() {
            return;
        }
        let content = p.monomial_content();
        for (i, &k) in content.iter().enumerate() {
            if k > 0 {
                self.push_factor(AScalar::var(i), k);
            }
        }
        let rest = p.div_monomial(&content);
        if !rest.is_constant() {
            self.push_factor(rest.primitive(), 1);
        }
    }

    fn push_factor(&mut self, p: AScalar, k: u32) {
        match self.factors.iter_mut().find(|(q, _)| *q == p) {
            Some((_, m)) => *m += k,
            None => {
                self.factors.push((p, k));
                self.factors
                    .sort_by(|(a, _), (b, _)| display_key(a).cmp(&display_key(b)));
            }
        }
    }

    pub fn factors(&self) -> &[(AScalar, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self) -> AScalar {
        self.factors
            .iter()
            .fold(AScalar::one(), |acc, (p, k)| acc.times(&p.pow(*k)))
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.factors.iter().fold(Rat::from_integer(1.into()), |acc, (p, k)| {
            acc * num_traits::pow(p.eval(point), *k as usize)
        })
    }

    pub fn vanishes_at(&self, point: &[Rat]) -> bool {
        self.factors.iter().any(|(p, _)| Zero::is_zero(&p.eval(point)))
    }

    /// Distinct factors, in insertion order.
    pub fn distinct(&self) -> Vec<AScalar> {
        self.factors.iter().map(|(p, _)| p.clone()).collect()
    }
}

/// A monomial ideal of `N^n` by its minimal generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Staircase {
    nvars: usize,
    generators: Vec<Exponent>,
}

impl Staircase {
    /// Keeps the minimal elements of `exps`; sorted, duplicate-free.
    pub fn from_exponents(nvars: usize, exps: &[Exponent]) -> Self {
        let mut gens: Vec<Exponent> = exps
            .iter()
            .filter(|e| !exps.iter().any(|f| f != *e && e.is_multiple_of(f)))
            .cloned()
            .collect();
        gens.sort();
        gens.dedup();
        Staircase {
            nvars,
            generators: gens,
        }
    }

    pub fn empty(nvars: usize) -> Self {
        Staircase {
            nvars,
            generators: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn contains(&self, alpha: &Exponent) -> bool {
        self.generators.iter().any(|g| alpha.is_multiple_of(g))
    }

    pub fn max_degree(&self) -> u64 {
        self.generators.iter().map(Exponent::degree).max().unwrap_or(0)
    }
}

impl fmt::Debug for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.generators).finish()
    }
}

/// A generic standard basis `(gens, h)` over `V(Q)`.
#[derive(Debug, Clone)]
pub struct GenericBasis {
    pub gens: Vec<ParamPoly>,
    /// `gens[i] = sum_j cofactors[i][j] * inputs[j]` (for truncated reduced
    /// bases under local orders, modulo terms above the truncation degree).
    pub cofactors: Vec<Vec<ParamPoly>>,
    pub h: FactoredScalar,
    pub ctx: PrimeContext,
    pub staircase: Staircase,
    pub order: MonomialOrder,
    pub inputs: Vec<ParamPoly>,
    /// Set for truncated reduced bases under orders that are not global.
    pub truncation: Option<u64>,
}

impl GenericBasis {
    pub fn nvars(&self) -> usize {
        self.order.nvars()
    }

    /// Leading exponents modulo `Q`, one per generator.
    pub fn leading_exponents(&self) -> Result<Vec<Exponent>, GenError> {
        self.gens
            .iter()
            .map(|g| leading_mod_q(g, &self.order, &self.ctx).map(|(e, _)| e))
            .collect()
    }
}

/// Largest exponent whose coefficient is not in `Q`, with its coefficient.
pub fn leading_mod_q(
    f: &ParamPoly,
    order: &MonomialOrder,
    ctx: &PrimeContext,
) -> Result<(Exponent, ParamScalar), GenError> {
    let mut best: Option<(&Exponent, &ParamScalar)> = None;
    for (e, c) in f.terms() {
        if ctx.scalar_in_q(c)? {
            continue;
        }
        if best.is_none_or(|(b, _)| order.cmp_unchecked(e, b).is_gt()) {
            best = Some((e, c));
        }
    }
    best.map(|(e, c)| (e.clone(), c.clone()))
        .ok_or(GenError::AllCoefficientsInQ)
}

/// Splits `g` into the terms with coefficient outside `Q` and the rest.
fn split_mod_q(g: &ParamPoly, ctx: &PrimeContext) -> Result<(ParamPoly, ParamPoly), GenError> {
    let n = g.nvars();
    let mut outside = Poly::zero(n);
    let mut inside = Poly::zero(n);
    for (e, c) in g.terms() {
        if ctx.scalar_in_q(c)? {
            inside.add_term(e.clone(), c.clone());
        } else {
            outside.add_term(e.clone(), c.clone());
        }
    }
    Ok((outside, inside))
}

/// Result of a division modulo `Q`: `f = sum q_j g_j + R + T` with every
/// coefficient of `T` in `Q`.
#[derive(Debug, Clone)]
pub struct ModQDivision {
    pub quotients: Vec<ParamPoly>,
    pub remainder: ParamPoly,
    pub t: ParamPoly,
}

/// Divides by the parts of the divisors outside `Q`. For orders that are
/// not global a truncation degree selects series division (exact modulo
/// terms of higher degree); without one the inputs must be homogeneous.
pub fn divide_mod_q(
    f: &ParamPoly,
    divisors: &[ParamPoly],
    order: &MonomialOrder,
    ctx: &PrimeContext,
    trunc_degree: Option<u64>,
) -> Result<ModQDivision, GenError> {
    let mut outside = Vec::with_capacity(divisors.len());
    let mut inside = Vec::with_capacity(divisors.len());
    for g in divisors {
        let (o, i) = split_mod_q(g, ctx)?;
        if o.is_zero() {
            return Err(GenError::AllCoefficientsInQ);
        }
        outside.push(o);
        inside.push(i);
    }
    // Terms of f that vanish modulo Q are not divided; they go straight to T.
    let (f_out, mut t) = split_mod_q(f, ctx)?;
    let res = match (order.is_global(), trunc_degree) {
        (false, Some(d)) => divide_series(&f_out, &outside, order, d)?,
        _ => divide(&f_out, &outside, order)?,
    };
    for (q, i) in res.quotients.iter().zip(&inside) {
        t = t.sub(&q.mul(i));
    }
    if let (false, Some(d)) = (order.is_global(), trunc_degree) {
        t = t.truncate(d);
    }
    Ok(ModQDivision {
        quotients: res.quotients,
        remainder: res.remainder,
        t,
    })
}

/// Clears parameter denominators; the multipliers are only units off the
/// locus where the input was undefined.
fn polynomial_inputs(inputs: &[ParamPoly]) -> Vec<ParamPoly> {
    inputs.iter().map(|f| f.clear_denominators().0).collect()
}

fn check_dims(inputs: &[ParamPoly], order: &MonomialOrder) -> Result<(), GenError> {
    for f in inputs {
        if f.nvars() != order.nvars() {
            return Err(PolyError::DimensionMismatch {
                left: f.nvars(),
                right: order.nvars(),
            }
            .into());
        }
    }
    Ok(())
}

struct Survivor {
    gen: ParamPoly,
    cofactors: Vec<ParamPoly>,
}

/// Runs Buchberger on `polys` (flattened into `Q[x, [z], a]`) together with
/// the generators of `Q` and returns the reduced-basis elements outside `Q`,
/// rewritten through cofactors in terms of the first `polys.len()` inputs.
fn composite_survivors(
    polys: &[ParamPoly],
    order: &MonomialOrder,
    variant: CompositeVariant,
    ctx: &PrimeContext,
) -> Result<Vec<(QPoly, Vec<QPoly>)>, GenError> {
    let m = ctx.nparams();
    let composite = CompositeOrder::new(order.clone(), m, variant);
    let width = composite.main_width();
    let comb = composite.combined();
    let mut flat: Vec<QPoly> = polys.iter().map(|f| f.to_flat(m)).collect();
    flat.extend(ctx.basis().iter().map(|q| flat_scalar(q, width, m)));
    if flat.iter().all(Poly::is_zero) {
        return Ok(Vec::new());
    }
    let b = buchberger(&flat, &comb, false)?;
    let r = reduce_basis(&b, &comb)?;
    let mut out = Vec::new();
    for (g, cof) in r.generators.iter().zip(&r.cofactors) {
        let as_param = ParamPoly::from_flat(g, m);
        let in_q = as_param
            .terms()
            .all(|(_, c)| ctx.contains(c.num()));
        if in_q {
            continue;
        }
        out.push((g.clone(), cof[..polys.len()].to_vec()));
    }
    Ok(out)
}

fn assemble(
    survivors: Vec<Survivor>,
    mut h: FactoredScalar,
    ctx: &PrimeContext,
    order: &MonomialOrder,
    inputs: Vec<ParamPoly>,
) -> Result<GenericBasis, GenError> {
    let mut items = Vec::with_capacity(survivors.len());
    for s in survivors {
        let (e, lc) = leading_mod_q(&s.gen, order, ctx)?;
        h.push(lc.num());
        items.push((e, s));
    }
    items.sort_by(|(a, _), (b, _)| order.cmp_unchecked(b, a));
    let exps: Vec<Exponent> = items.iter().map(|(e, _)| e.clone()).collect();
    let n = order.nvars();
    Ok(GenericBasis {
        staircase: Staircase::from_exponents(n, &exps),
        gens: items.iter().map(|(_, s)| s.gen.clone()).collect(),
        cofactors: items.into_iter().map(|(_, s)| s.cofactors).collect(),
        h,
        ctx: ctx.clone(),
        order: order.clone(),
        inputs,
        truncation: None,
    })
}

/// Generic standard basis for a global order, from a Groebner basis of
/// `<F> + <Q>` under the block order with parameters as the lowest block.
pub fn generic_basis_well_order(
    inputs: &[ParamPoly],
    order: &MonomialOrder,
    ctx: &PrimeContext,
) -> Result<GenericBasis, GenError> {
    if !order.is_global() {
        return Err(GenError::NotGlobal);
    }
    check_dims(inputs, order)?;
    let polys = polynomial_inputs(inputs);
    let m = ctx.nparams();
    let survivors = composite_survivors(&polys, order, CompositeVariant::Block, ctx)?
        .into_iter()
        .map(|(_, cof)| {
            let cofactors: Vec<ParamPoly> = cof.iter().map(|u| ParamPoly::from_flat(u, m)).collect();
            let gen = cofactors
                .iter()
                .zip(&polys)
                .fold(Poly::zero(order.nvars()), |acc, (u, f)| acc.add(&u.mul(f)));
            Survivor { gen, cofactors }
        })
        .collect();
    assemble(survivors, FactoredScalar::one(), ctx, order, polys)
}

/// Generic standard basis for any order, through a homogeneous basis of the
/// homogenized inputs under the degree-first extension of the order.
pub fn generic_basis_local(
    inputs: &[ParamPoly],
    order: &MonomialOrder,
    ctx: &PrimeContext,
) -> Result<GenericBasis, GenError> {
    check_dims(inputs, order)?;
    let polys = polynomial_inputs(inputs);
    let m = ctx.nparams();
    let n = order.nvars();
    // Reduce coefficients modulo Q first so that degrees survive on V(Q).
    let reduced: Vec<ParamPoly> = polys.iter().map(|f| ctx.reduce_poly(f)).collect();
    let mut h = FactoredScalar::one();
    let mut homog = Vec::with_capacity(reduced.len());
    for f in &reduced {
        if f.is_zero() {
            homog.push(Poly::zero(n + 1));
            continue;
        }
        let d = f.total_degree().expect("nonzero");
        for (e, c) in f.terms() {
            if e.degree() == d {
                h.push(c.num());
            }
        }
        homog.push(f.homogenize()?);
    }
    let survivors = composite_survivors(&homog, order, CompositeVariant::Homogenized, ctx)?
        .into_iter()
        .map(|(_, cof)| {
            let cofactors: Vec<ParamPoly> = cof
                .iter()
                .map(|u| ParamPoly::from_flat(u, m).dehomogenize())
                .collect();
            let gen = cofactors
                .iter()
                .zip(&polys)
                .fold(Poly::zero(n), |acc, (u, f)| acc.add(&u.mul(f)));
            Survivor { gen, cofactors }
        })
        .collect();
    assemble(survivors, h, ctx, order, polys)
}

/// Dispatches on the order: global orders use the block construction,
/// all others the homogenized one.
pub fn generic_basis(
    inputs: &[ParamPoly],
    order: &MonomialOrder,
    ctx: &PrimeContext,
) -> Result<GenericBasis, GenError> {
    match order.classify() {
        OrderKind::Global => generic_basis_well_order(inputs, order, ctx),
        OrderKind::Local | OrderKind::Mixed => generic_basis_local(inputs, order, ctx),
    }
}

/// The generic reduced basis: minimal, monic modulo `Q`, tails reduced
/// modulo `Q`. Under orders that are not global the (generally infinite)
/// result is truncated at total degree `trunc_degree`.
pub fn generic_reduced_basis(basis: &GenericBasis, trunc_degree: u64) -> Result<GenericBasis, GenError> {
    let order = &basis.order;
    let ctx = &basis.ctx;
    let global = order.is_global();
    let needed = basis.staircase.max_degree();
    if !global && trunc_degree < needed {
        return Err(GenError::TruncationTooSmall {
            needed,
            given: trunc_degree,
        });
    }
    let leads = basis.leading_exponents()?;
    let keep: Vec<usize> = (0..leads.len())
        .filter(|&i| {
            !(0..leads.len()).any(|j| {
                j != i && leads[i].is_multiple_of(&leads[j]) && (leads[i] != leads[j] || j < i)
            })
        })
        .collect();
    let mut monic = Vec::with_capacity(keep.len());
    let mut monic_cof = Vec::with_capacity(keep.len());
    for &i in &keep {
        let (_, lc) = leading_mod_q(&basis.gens[i], order, ctx)?;
        let inv = lc.inverse();
        monic.push(basis.gens[i].scale(&inv));
        monic_cof.push(
            basis.cofactors[i]
                .iter()
                .map(|u| u.scale(&inv))
                .collect::<Vec<_>>(),
        );
    }
    let trunc = (!global).then_some(trunc_degree);
    let mut gens = Vec::with_capacity(keep.len());
    let mut cofs = Vec::with_capacity(keep.len());
    for (k, g) in monic.iter().enumerate() {
        let lead = leads[keep[k]].clone();
        let lm = Poly::monomial(lead, ParamScalar::one());
        let tail = g.sub(&lm);
        let div = divide_mod_q(&tail, &monic, order, ctx, trunc)?;
        let mut out = lm.add(&div.remainder).add(&div.t);
        if let Some(d) = trunc {
            out = out.truncate(d);
        }
        let mut cof = monic_cof[k].clone();
        for (q, qc) in div.quotients.iter().zip(&monic_cof) {
            if q.is_zero() {
                continue;
            }
            for (c, u) in cof.iter_mut().zip(qc) {
                *c = c.sub(&q.mul(u));
            }
        }
        gens.push(out);
        cofs.push(cof);
    }
    Ok(GenericBasis {
        gens,
        cofactors: cofs,
        h: basis.h.clone(),
        ctx: ctx.clone(),
        staircase: basis.staircase.clone(),
        order: order.clone(),
        inputs: basis.inputs.clone(),
        truncation: trunc,
    })
}

/// Standard basis staircase of rational polynomials, computed from scratch.
pub fn staircase_of(polys: &[QPoly], order: &MonomialOrder) -> Result<Staircase, GenError> {
    let inputs: Vec<ParamPoly> = polys.iter().map(QPoly::to_param).collect();
    Ok(generic_basis(&inputs, order, &PrimeContext::zero(0))?.staircase)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub point: ParamPoint,
    pub staircase: Staircase,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub expected: Staircase,
    pub samples: Vec<SampleReport>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.samples.iter().all(|s| s.pass)
    }
}

fn check_sample(basis: &GenericBasis, index: usize, c: &ParamPoint) -> Result<(), GenError> {
    let m = basis.ctx.nparams();
    if c.coords.len() != m {
        return Err(GenError::SampleLength {
            index,
            expected: m,
            found: c.coords.len(),
        });
    }
    if !basis.ctx.contains_point(c) {
        return Err(GenError::SampleOffVariety(index));
    }
    if basis.h.vanishes_at(&c.coords) {
        return Err(GenError::SampleOnExcludedLocus(index));
    }
    Ok(())
}

/// Specializes the inputs at each sample, recomputes a standard basis from
/// scratch and compares staircases with the generic one.
pub fn verify_specialization(basis: &GenericBasis, samples: &[ParamPoint]) -> Result<VerifyReport, GenError> {
    for (i, c) in samples.iter().enumerate() {
        check_sample(basis, i, c)?;
    }
    let mut out = Vec::with_capacity(samples.len());
    for c in samples {
        let polys = basis
            .inputs
            .iter()
            .map(|f| f.specialize(c))
            .collect::<Result<Vec<_>, _>>()?;
        let st = staircase_of(&polys, &basis.order)?;
        out.push(SampleReport {
            point: c.clone(),
            pass: st == basis.staircase,
            staircase: st,
        });
    }
    Ok(VerifyReport {
        expected: basis.staircase.clone(),
        samples: out,
    })
}

/// Random rational points of `V(Q)` off `V(h)`. Requires every element of
/// the reduced lex basis of `Q` to be `a_i - (terms in later parameters)`;
/// free coordinates are drawn from `[-range, range]`.
pub fn sample_admissible<R: Rng + ?Sized>(
    ctx: &PrimeContext,
    h: &FactoredScalar,
    count: usize,
    range: i64,
    rng: &mut R,
) -> Result<Vec<ParamPoint>, GenError> {
    let m = ctx.nparams();
    let mut solved: Vec<Option<AScalar>> = vec![None; m];
    for q in ctx.basis() {
        let (lead, lc) = q.leading().expect("nonzero");
        let vars: Vec<usize> = (0..lead.len()).filter(|&i| lead[i] > 0).collect();
        if vars.len() != 1 || lead[vars[0]] != 1 {
            return Err(GenError::SamplerUnsupported);
        }
        let v = vars[0];
        let rest = q.minus(&AScalar::monomial(lead.clone(), lc.clone()));
        solved[v] = Some(rest.scale(&(-lc.recip())));
    }
    let attempts = 200 * count.max(1);
    let mut out = Vec::with_capacity(count);
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let mut coords = vec![<Rat as Zero>::zero(); m];
        for v in (0..m).rev() {
            coords[v] = match &solved[v] {
                Some(expr) => expr.eval(&coords),
                None => Rat::from_integer(rng.random_range(-range..=range).into()),
            };
        }
        let pt = ParamPoint::new(coords);
        if !ctx.contains_point(&pt) || h.vanishes_at(&pt.coords) {
            continue;
        }
        out.push(pt);
    }
    if out.len() < count {
        return Err(GenError::SamplerExhausted(attempts));
    }
    Ok(out)
}

/// Checks the defining conditions of a generic standard basis; returns the
/// list of violations. `series_degree` bounds the S-function check for
/// orders that are not global.
pub fn check_invariants(basis: &GenericBasis, series_degree: u64) -> Result<Vec<String>, GenError> {
    let mut bad = Vec::new();
    let ctx = &basis.ctx;
    let order = &basis.order;
    let h = basis.h.product();
    if ctx.contains(&h) {
        bad.push("h lies in Q".to_string());
    }
    for (i, g) in basis.gens.iter().enumerate() {
        let (_, lc) = leading_mod_q(g, order, ctx)?;
        if lc.is_polynomial() && h.exact_div(lc.num()).is_none() {
            bad.push(format!("leading coefficient of generator {i} does not divide h"));
        }
        let expanded = basis.cofactors[i]
            .iter()
            .zip(&basis.inputs)
            .fold(Poly::zero(order.nvars()), |acc, (u, f)| acc.add(&u.mul(f)));
        let diff = match basis.truncation {
            Some(d) => expanded.sub(g).truncate(d),
            None => expanded.sub(g),
        };
        if !diff.is_zero() {
            bad.push(format!("cofactors of generator {i} do not reproduce it"));
        }
    }
    let kind = order.classify();
    if kind == OrderKind::Mixed {
        return Ok(bad);
    }
    let trunc = (kind != OrderKind::Global).then_some(series_degree);
    for i in 0..basis.gens.len() {
        for j in i + 1..basis.gens.len() {
            let s = s_function_mod_q(&basis.gens[i], &basis.gens[j], order, ctx)?;
            if s.is_zero() {
                continue;
            }
            let div = divide_mod_q(&s, &basis.gens, order, ctx, trunc)?;
            for (e, c) in div.remainder.terms() {
                if trunc.is_none_or(|d| e.degree() <= d) && !ctx.scalar_in_q(c)? {
                    bad.push(format!("S-function of generators {i}, {j} does not reduce to zero"));
                    break;
                }
            }
        }
    }
    Ok(bad)
}

/// `S = lc(g2) m g1 - lc(g1) m' g2` with leading data taken modulo `Q`.
pub fn s_function_mod_q(
    g1: &ParamPoly,
    g2: &ParamPoly,
    order: &MonomialOrder,
    ctx: &PrimeContext,
) -> Result<ParamPoly, GenError> {
    let (e1, c1) = leading_mod_q(g1, order, ctx)?;
    let (e2, c2) = leading_mod_q(g2, order, ctx)?;
    let l = e1.lcm(&e2);
    let m1 = l.checked_sub(&e1).expect("lcm");
    let m2 = l.checked_sub(&e2).expect("lcm");
    Ok(g1.mul_term(&m1, &c2).sub(&g2.mul_term(&m2, &c1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::text::{parse_poly, parse_scalar_at, render_poly, Names};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn names() -> Names {
        Names::new(&["a"], &["x1", "x2"])
    }
    fn p(s: &str) -> ParamPoly {
        parse_poly(s, &names()).unwrap()
    }
    fn sc(s: &str) -> AScalar {
        parse_scalar_at(s, &names(), 1, 1).unwrap()
    }
    fn local() -> MonomialOrder {
        MonomialOrder::new(2, vec![vec![-1, -1], vec![-1, 0]]).unwrap()
    }
    fn st(v: &[[u32; 2]]) -> Staircase {
        let e: Vec<Exponent> = v.iter().map(|x| Exponent::new(x.to_vec())).collect();
        Staircase::from_exponents(2, &e)
    }
    fn ctx_a() -> PrimeContext {
        PrimeContext::new(1, vec![sc("a")]).unwrap()
    }

    #[test]
    fn leading_modulo_q() {
        let f = p("a*x2 - x1*x2 + x1");
        let (e, _) = leading_mod_q(&f, &local(), &ctx_a()).unwrap();
        assert_eq!(e, Exponent::new(vec![1, 0]));
        let (e, c) = leading_mod_q(&f, &local(), &PrimeContext::zero(1)).unwrap();
        assert_eq!(e, Exponent::new(vec![0, 1]));
        assert_eq!(c, ParamScalar::from_poly(sc("a")));
        assert_eq!(
            leading_mod_q(&p("a*x1"), &local(), &ctx_a()),
            Err(GenError::AllCoefficientsInQ)
        );
    }

    #[test]
    fn q_containing_one_is_rejected() {
        assert_eq!(
            PrimeContext::new(1, vec![sc("a"), sc("a + 1")]),
            Err(GenError::QContainsOne)
        );
    }

    #[test]
    fn intro_generic_basis() {
        let f = vec![p("a*x2 - x1*x2 + x1")];
        let b = generic_basis_local(&f, &local(), &PrimeContext::zero(1)).unwrap();
        assert_eq!(b.gens, f);
        assert_eq!(b.h.product(), sc("a"));
        assert_eq!(b.staircase, st(&[[0, 1]]));
        let b = generic_basis_local(&f, &local(), &ctx_a()).unwrap();
        assert_eq!(b.staircase, st(&[[1, 0]]));
        assert!(b.h.is_one());
        let b = generic_basis(&[p("x1")], &local(), &ctx_a()).unwrap();
        assert_eq!(b.gens, vec![p("x1")]);
        assert!(b.h.is_one());
        assert_eq!(b.staircase, st(&[[1, 0]]));
    }

    #[test]
    fn intro_reduced_series() {
        let f = vec![p("a*x2 - x1*x2 + x1")];
        let b = generic_basis(&f, &local(), &PrimeContext::zero(1)).unwrap();
        let r3 = generic_reduced_basis(&b, 3).unwrap();
        assert_eq!(
            render_poly(&r3.gens[0], &names(), &local()),
            "x2 + (1/a)*x1 + (1/a^2)*x1^2 + (1/a^3)*x1^3"
        );
        let r1 = generic_reduced_basis(&b, 1).unwrap();
        assert_eq!(render_poly(&r1.gens[0], &names(), &local()), "x2 + (1/a)*x1");
        assert_eq!(
            generic_reduced_basis(&b, 0).unwrap_err(),
            GenError::TruncationTooSmall { needed: 1, given: 0 }
        );
    }

    #[test]
    fn well_order_examples() {
        let lex = MonomialOrder::lex(2);
        let b = generic_basis_well_order(&[p("a*x1 + x2")], &lex, &PrimeContext::zero(1)).unwrap();
        assert_eq!(b.gens, vec![p("a*x1 + x2")]);
        assert_eq!(b.h.product(), sc("a"));
        assert_eq!(b.staircase, st(&[[1, 0]]));
        let b = generic_basis_well_order(&[p("a*x1 + x2")], &lex, &ctx_a()).unwrap();
        assert_eq!(b.staircase, st(&[[0, 1]]));
        assert!(b.h.is_one());
        let b = generic_basis_well_order(&[p("a*x1"), p("a*x2^2")], &lex, &ctx_a()).unwrap();
        assert!(b.gens.is_empty());
        assert!(b.staircase.generators().is_empty());
        assert_eq!(
            generic_basis_well_order(&[p("x1")], &local(), &ctx_a()).unwrap_err(),
            GenError::NotGlobal
        );
    }

    #[test]
    fn division_modulo_q() {
        let f = p("a*x2 - x1*x2 + x1");
        let zero = PrimeContext::zero(1);
        let d = divide_mod_q(&f, std::slice::from_ref(&f), &local(), &zero, Some(4)).unwrap();
        assert!(d.t.is_zero());
        assert!(d.remainder.is_zero());
        let d = divide_mod_q(&f, std::slice::from_ref(&f), &local(), &ctx_a(), Some(4)).unwrap();
        for (_, c) in d.t.terms() {
            assert!(ctx_a().scalar_in_q(c).unwrap());
        }
        let recombined = d.quotients[0].mul(&f).add(&d.remainder).add(&d.t);
        assert!(f.sub(&recombined).truncate(4).is_zero());
    }

    #[test]
    fn verification() {
        let f = vec![p("a*x2 - x1*x2 + x1")];
        let b = generic_basis(&f, &local(), &PrimeContext::zero(1)).unwrap();
        let pts: Vec<ParamPoint> = [1, 2, -3].iter().map(|&c| ParamPoint::from_ints(&[c])).collect();
        let rep = verify_specialization(&b, &pts).unwrap();
        assert!(rep.all_pass());
        assert_eq!(
            verify_specialization(&b, &[ParamPoint::from_ints(&[0])]).unwrap_err(),
            GenError::SampleOnExcludedLocus(0)
        );
        let lex = MonomialOrder::lex(2);
        let b = generic_basis(&[p("a*x1 + x2")], &lex, &PrimeContext::zero(1)).unwrap();
        let rep = verify_specialization(&b, &[ParamPoint::from_ints(&[5])]).unwrap();
        assert_eq!(rep.samples[0].staircase, st(&[[1, 0]]));
        assert!(rep.all_pass());
        let b = generic_basis(&f, &local(), &ctx_a()).unwrap();
        assert_eq!(
            verify_specialization(&b, &[ParamPoint::from_ints(&[1])]).unwrap_err(),
            GenError::SampleOffVariety(0)
        );
    }

    #[test]
    fn sampler_respects_variety() {
        let n2 = Names::new(&["a", "b"], &["x1"]);
        let q = parse_scalar_at("b - a^2", &n2, 1, 1).unwrap();
        // lex a > b makes `a^2 - b` lead with a^2: unsupported
        let ctx = PrimeContext::new(2, vec![q]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(
            sample_admissible(&ctx, &FactoredScalar::one(), 3, 5, &mut rng),
            Err(GenError::SamplerUnsupported)
        );
        let q = parse_scalar_at("a - b^2 + 1", &n2, 1, 1).unwrap();
        let ctx = PrimeContext::new(2, vec![q]).unwrap();
        let mut h = FactoredScalar::one();
        h.push(&parse_scalar_at("b", &n2, 1, 1).unwrap());
        let pts = sample_admissible(&ctx, &h, 10, 5, &mut rng).unwrap();
        for pt in &pts {
            assert!(ctx.contains_point(pt));
            assert!(!h.vanishes_at(&pt.coords));
        }
    }

    #[test]
    fn invariants_hold_on_examples() {
        let f = vec![p("a*x2 - x1*x2 + x1")];
        for ctx in [PrimeContext::zero(1), ctx_a()] {
            let b = generic_basis(&f, &local(), &ctx).unwrap();
            assert!(check_invariants(&b, 4).unwrap().is_empty());
        }
        let g = vec![p("a*x1^2 + x2"), p("x1*x2 - a")];
        let b = generic_basis(&g, &MonomialOrder::grevlex(2), &PrimeContext::zero(1)).unwrap();
        assert!(check_invariants(&b, 0).unwrap().is_empty());
    }
}
