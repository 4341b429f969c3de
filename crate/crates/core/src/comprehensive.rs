//! Constructible partitions of parameter space with a generic basis valid
//! on each cell, built as a tree that branches on the factors of `h`.

use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::buchberger::{buchberger_with, BasisError, BasisOptions};
use crate::genstd::{generic_basis, sample_admissible, FactoredScalar, GenError, GenericBasis, PrimeContext, Staircase};
use crate::orders::MonomialOrder;
use crate::polyring::gcd::coprime_factors;
use crate::polyring::{flat_scalar, AScalar, ParamPoint, ParamPoly, Poly, QPoly, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComprehensiveError {
    #[error("recursion depth exceeded with {} unresolved cells", frontier.len())]
    DepthExceeded { frontier: Vec<Cell> },
    #[error("point lies in no cell")]
    NoCell,
    #[error("point lies in several cells: {0:?}")]
    MultipleCells(Vec<usize>),
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("empty input")]
    NoInput,
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Points where every `vanish` polynomial is zero and no `nonvanish` one is.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cell {
    pub vanish: Vec<AScalar>,
    pub nonvanish: Vec<AScalar>,
}

impl Cell {
    pub fn contains(&self, c: &[Rat]) -> bool {
        self.vanish.iter().all(|p| p.eval(c).is_zero())
            && self.nonvanish.iter().all(|p| !p.eval(c).is_zero())
    }

    pub fn add_nonvanish(&mut self, p: &AScalar) {
        if !self.nonvanish.contains(p) {
            self.nonvanish.push(p.clone());
        }
    }

    /// Rabinowitsch test: the cell is empty iff `1` lies in
    /// `<vanish, 1 - t * prod(nonvanish)>`.
    pub fn is_empty(&self, nparams: usize) -> Result<bool, BasisError> {
        let prod = self.nonvanish.iter().fold(AScalar::one(), |acc, p| acc.times(p));
        let mut polys: Vec<QPoly> = self.vanish.iter().map(|p| flat_scalar(p, 1, nparams)).collect();
        let t = Poly::var(nparams + 1, 0);
        polys.push(Poly::one(nparams + 1).sub(&t.mul(&flat_scalar(&prod, 1, nparams))));
        let order = MonomialOrder::grevlex(nparams + 1);
        let b = buchberger_with(
            &polys,
            &order,
            BasisOptions {
                use_truncated: false,
                track_cofactors: false,
            },
        )?;
        Ok(b.generators.iter().any(|g| g.total_degree() == Some(0)))
    }

    /// Random rational points of the cell; see [`sample_admissible`].
    pub fn sample<R: Rng + ?Sized>(
        &self,
        nparams: usize,
        count: usize,
        range: i64,
        rng: &mut R,
    ) -> Result<Vec<ParamPoint>, GenError> {
        let ctx = PrimeContext::new(nparams, self.vanish.clone())?;
        let mut avoid = FactoredScalar::one();
        for p in &self.nonvanish {
            avoid.push(p);
        }
        sample_admissible(&ctx, &avoid, count, range, rng)
    }
}

#[derive(Debug, Clone)]
pub struct CellBasis {
    pub cell: Cell,
    pub basis: GenericBasis,
    pub staircase: Staircase,
}

impl CellBasis {
    /// Generators with coefficients reduced modulo the vanishing ideal;
    /// zero elements dropped.
    pub fn reduced_gens(&self) -> Vec<ParamPoly> {
        self.basis
            .gens
            .iter()
            .map(|g| self.basis.ctx.reduce_poly(g))
            .filter(|g| !g.is_zero())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ComprehensiveResult {
    pub nparams: usize,
    pub cells: Vec<CellBasis>,
}

impl ComprehensiveResult {
    /// Index of the unique cell containing `c`.
    pub fn locate(&self, c: &ParamPoint) -> Result<usize, ComprehensiveError> {
        if c.coords.len() != self.nparams {
            return Err(ComprehensiveError::PointLength {
                expected: self.nparams,
                found: c.coords.len(),
            });
        }
        let hits: Vec<usize> = self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, cb)| cb.cell.contains(&c.coords))
            .map(|(i, _)| i)
            .collect();
        match hits.len() {
            0 => Err(ComprehensiveError::NoCell),
            1 => Ok(hits[0]),
            _ => Err(ComprehensiveError::MultipleCells(hits)),
        }
    }
}

pub fn locate(result: &ComprehensiveResult, c: &ParamPoint) -> Result<usize, ComprehensiveError> {
    result.locate(c)
}

struct Walk<'a> {
    inputs: &'a [ParamPoly],
    order: &'a MonomialOrder,
    nparams: usize,
    max_depth: usize,
    cells: Vec<CellBasis>,
    frontier: Vec<Cell>,
}

impl Walk<'_> {
    fn visit(&mut self, node: Cell, depth: usize) -> Result<(), ComprehensiveError> {
        if node.is_empty(self.nparams)? {
            return Ok(());
        }
        if depth > self.max_depth {
            self.frontier.push(node);
            return Ok(());
        }
        let ctx = match PrimeContext::new(self.nparams, node.vanish.clone()) {
            Ok(c) => c,
            Err(GenError::QContainsOne) => return Ok(()),
            Err(e) => return Err(e.into()),
        };
        let basis = generic_basis(self.inputs, self.order, &ctx)?;
        let branch = coprime_factors(&basis.h.distinct());
        let mut here = node.clone();
        for hi in &branch {
            here.add_nonvanish(hi);
        }
        if !here.is_empty(self.nparams)? {
            self.cells.push(CellBasis {
                cell: here,
                staircase: basis.staircase.clone(),
                basis,
            });
        }
        // Child i: h_i = 0 and h_1, ..., h_{i-1} != 0, so children are disjoint.
        for (i, hi) in branch.iter().enumerate() {
            let mut child = node.clone();
            child.vanish.push(hi.clone());
            for hj in &branch[..i] {
                child.add_nonvanish(hj);
            }
            self.visit(child, depth + 1)?;
        }
        Ok(())
    }
}

/// Partitions parameter space into locally closed cells, each carrying a
/// generic basis whose specialization at every point of the cell is a
/// standard basis of the specialized ideal.
pub fn comprehensive_basis(
    inputs: &[ParamPoly],
    order: &MonomialOrder,
    nparams: usize,
    max_depth: usize,
) -> Result<ComprehensiveResult, ComprehensiveError> {
    if inputs.is_empty() {
        return Err(ComprehensiveError::NoInput);
    }
    let mut walk = Walk {
        inputs,
        order,
        nparams,
        max_depth,
        cells: Vec::new(),
        frontier: Vec::new(),
    };
    walk.visit(Cell::default(), 0)?;
    if !walk.frontier.is_empty() {
        return Err(ComprehensiveError::DepthExceeded {
            frontier: walk.frontier,
        });
    }
    Ok(ComprehensiveResult {
        nparams,
        cells: walk.cells,
    })
}
