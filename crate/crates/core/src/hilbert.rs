//! Staircase combinatorics: Hilbert-Samuel function and polynomial,
//! Milnor numbers, and the partition of parameter space by local Hilbert
//! polynomial.

use num_integer::binomial;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::comprehensive::{comprehensive_basis, Cell, ComprehensiveError};
use crate::genstd::Staircase;
use crate::orders::{Exponent, MonomialOrder};
use crate::polyring::{ParamPoly, Rat};

/// Above this many generators the complement is enumerated directly.
const INCLUSION_EXCLUSION_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("values up to {0} do not determine the Hilbert polynomial")]
    NoStabilization(u64),
    #[error("order is not local and degree compatible")]
    NotDegreeCompatible,
    #[error(transparent)]
    Comprehensive(#[from] ComprehensiveError),
}

/// Number of exponents of degree at most `r` outside the staircase.
pub fn hsf(e: &Staircase, r: u64) -> u64 {
    let n = e.nvars();
    let gens = e.generators();
    if gens.len() > INCLUSION_EXCLUSION_LIMIT {
        return count_complement(e, r);
    }
    // Inclusion-exclusion over joins of generator cones.
    let mut covered: i128 = 0;
    let mut stack: Vec<(usize, Exponent, u32)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        stack.push((i, g.clone(), 1));
    }
    while let Some((i, join, size)) = stack.pop() {
        let d = join.degree();
        if d > r {
            // Larger joins only grow in degree.
            continue;
        }
        let count = below(n, r - d) as i128;
        covered += if size % 2 == 1 { count } else { -count };
        for (j, g) in gens.iter().enumerate().skip(i + 1) {
            stack.push((j, join.lcm(g), size + 1));
        }
    }
    (below(n, r) as i128 - covered) as u64
}

/// Monomials of degree at most `r` in `n` variables.
fn below(n: usize, r: u64) -> u64 {
    binomial(r + n as u64, n as u64)
}

fn count_complement(e: &Staircase, r: u64) -> u64 {
    let n = e.nvars();
    let mut count = 0;
    let mut alpha = vec![0u32; n];
    walk_box(e, &mut alpha, 0, r, &mut count);
    count
}

fn walk_box(e: &Staircase, alpha: &mut Vec<u32>, i: usize, budget: u64, count: &mut u64) {
    if i == alpha.len() {
        if !e.contains(&Exponent::new(alpha.clone())) {
            *count += 1;
        }
        return;
    }
    for k in 0..=budget {
        alpha[i] = k as u32;
        walk_box(e, alpha, i + 1, budget - k, count);
    }
    alpha[i] = 0;
}

/// Values of the Hilbert-Samuel function together with the polynomial
/// they eventually agree with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    pub values: Vec<u64>,
    /// Coefficients in `r`, constant term first, no trailing zeros.
    pub polynomial: Vec<Rat>,
    pub stabilization: u64,
}

impl HilbertData {
    pub fn eval(&self, r: u64) -> Rat {
        let x = Rat::from_integer(r.into());
        self.polynomial
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * &x + c)
    }

    pub fn degree(&self) -> Option<usize> {
        self.polynomial.len().checked_sub(1)
    }
}

/// Fits the eventual polynomial of degree at most `n` from the tail of
/// `hsf(E, 0..=r_max)`. The fit must be confirmed by at least one value
/// beyond the `n + 1` interpolation points.
pub fn hilbert_polynomial(e: &Staircase, r_max: u64) -> Result<HilbertData, HilbertError> {
    let n = e.nvars();
    let values: Vec<u64> = (0..=r_max).map(|r| hsf(e, r)).collect();
    if (values.len() as u64) < n as u64 + 2 {
        return Err(HilbertError::NoStabilization(r_max));
    }
    let xs: Vec<u64> = (r_max - n as u64..=r_max).collect();
    let polynomial = interpolate(&xs, &values[xs[0] as usize..]);
    let mut data = HilbertData {
        values,
        polynomial,
        stabilization: 0,
    };
    let mut r0 = xs[0];
    while r0 > 0 && data.eval(r0 - 1) == Rat::from_integer(data.values[r0 as usize - 1].into()) {
        r0 -= 1;
    }
    if r0 == xs[0] {
        return Err(HilbertError::NoStabilization(r_max));
    }
    data.stabilization = r0;
    Ok(data)
}

/// A degree bound beyond which the Hilbert-Samuel function of `e` is
/// polynomial, padded so the fit is confirmed.
pub fn stable_range(e: &Staircase) -> u64 {
    let n = e.nvars();
    let join = e
        .generators()
        .iter()
        .fold(Exponent::zero(n), |acc, g| acc.lcm(g));
    join.degree() + n as u64 + 2
}

/// Lagrange interpolation through `(xs[i], ys[i])`, power basis.
fn interpolate(xs: &[u64], ys: &[u64]) -> Vec<Rat> {
    let k = xs.len();
    let mut out = vec![Rat::zero(); k];
    for i in 0..k {
        let mut basis = vec![Rat::one()];
        let mut denom = Rat::one();
        let xi = Rat::from_integer(xs[i].into());
        for (j, &xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            let xj = Rat::from_integer(xj.into());
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &xj;
            }
            basis = next;
            denom *= &xi - &xj;
        }
        let w = Rat::from_integer(ys[i].into()) / denom;
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * &w;
        }
    }
    while out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// Size of the staircase complement, `None` when it is infinite.
pub fn milnor_number(e: &Staircase) -> Option<u64> {
    let n = e.nvars();
    let mut bounds = vec![0u32; n];
    for i in 0..n {
        bounds[i] = e
            .generators()
            .iter()
            .filter(|g| (0..n).all(|j| j == i || g[j] == 0))
            .map(|g| g[i])
            .min()?;
    }
    let mut count = 0u64;
    let mut alpha = vec![0u32; n];
    loop {
        if !e.contains(&Exponent::new(alpha.clone())) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(count);
            }
            alpha[i] += 1;
            if alpha[i] < bounds[i] {
                break;
            }
            alpha[i] = 0;
            i += 1;
        }
    }
}

/// Cells sharing one local Hilbert polynomial.
#[derive(Debug, Clone)]
pub struct HilbertStratum {
    pub cells: Vec<Cell>,
    pub staircases: Vec<Staircase>,
    pub data: HilbertData,
    pub milnor: Option<u64>,
}

/// Partitions parameter space by the local Hilbert polynomial of the
/// specialized ideal. Requires a local degree-compatible order.
pub fn hilbert_partition(
    inputs: &[ParamPoly],
    order: &MonomialOrder,
    nparams: usize,
    max_depth: usize,
) -> Result<Vec<HilbertStratum>, HilbertError> {
    if !order.is_degree_compatible_local() {
        return Err(HilbertError::NotDegreeCompatible);
    }
    let result = comprehensive_basis(inputs, order, nparams, max_depth)?;
    let mut strata: Vec<HilbertStratum> = Vec::new();
    for cb in result.cells {
        let mut data = hilbert_polynomial(&cb.staircase, stable_range(&cb.staircase))?;
        match strata.iter_mut().find(|s| s.data.polynomial == data.polynomial) {
            Some(s) => {
                s.cells.push(cb.cell);
                if !s.staircases.contains(&cb.staircase) {
                    s.staircases.push(cb.staircase);
                }
            }
            None => {
                data.values.truncate(data.stabilization as usize + 1);
                strata.push(HilbertStratum {
                    milnor: milnor_number(&cb.staircase),
                    cells: vec![cb.cell],
                    staircases: vec![cb.staircase],
                    data,
                });
            }
        }
    }
    Ok(strata)
}
