//! Monomial orders given by integer weight matrices with a lexicographic
//! tiebreak, their global/local/mixed classification, and the composite
//! orders used when parameters are treated as extra variables.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight row {row} has length {found}, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown order preset `{0}`")]
    UnknownPreset(String),
}

/// A lattice point of `N^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The `i`-th unit vector of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), other.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other` divides `self` componentwise.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    /// True when `self` lies in the cone `other + N^n`.
    pub fn is_multiple_of(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn lcm(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn min(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// True when the supports of the two exponents are disjoint.
    pub fn coprime(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Concatenation, used to lay out `(x, z, a)` exponents.
    pub fn concat(&self, tail: &[u32]) -> Exponent {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        Exponent(v)
    }
}

impl Deref for Exponent {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

impl From<&[u32]> for Exponent {
    fn from(v: &[u32]) -> Self {
        Exponent(v.to_vec())
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Global,
    Local,
    Mixed,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Global => "global",
            OrderKind::Local => "local",
            OrderKind::Mixed => "mixed",
        })
    }
}

/// A monomial order on `N^n`: exponents are compared by the integer weight
/// rows in turn, and ties are broken lexicographically (`x1 > x2 > ...`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    nvars: usize,
    rows: Vec<Vec<i64>>,
}

impl MonomialOrder {
    pub fn new(nvars: usize, rows: Vec<Vec<i64>>) -> Result<Self, OrderError> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != nvars {
                return Err(OrderError::RowLength {
                    row: i,
                    expected: nvars,
                    found: row.len(),
                });
            }
        }
        Ok(MonomialOrder { nvars, rows })
    }

    /// Pure lexicographic order.
    pub fn lex(nvars: usize) -> Self {
        MonomialOrder {
            nvars,
            rows: Vec::new(),
        }
    }

    /// Degree reverse lexicographic order.
    pub fn grevlex(nvars: usize) -> Self {
        let mut rows = vec![vec![1; nvars]];
        rows.extend(revlex_rows(nvars));
        MonomialOrder { nvars, rows }
    }

    /// Negative degree reverse lexicographic order: a local order in which
    /// lower total degree always wins.
    pub fn neg_grevlex(nvars: usize) -> Self {
        let mut rows = vec![vec![-1; nvars]];
        rows.extend(revlex_rows(nvars));
        MonomialOrder { nvars, rows }
    }

    pub fn preset(name: &str, nvars: usize) -> Result<Self, OrderError> {
        match name {
            "lex" => Ok(Self::lex(nvars)),
            "grevlex" => Ok(Self::grevlex(nvars)),
            "neg_grevlex" => Ok(Self::neg_grevlex(nvars)),
            other => Err(OrderError::UnknownPreset(other.to_string())),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    fn weight(row: &[i64], e: &[u32]) -> i64 {
        row.iter().zip(e).map(|(w, &x)| w * i64::from(x)).sum()
    }

    /// Compares without checking lengths; callers guarantee `nvars` entries.
    pub fn cmp_unchecked(&self, a: &[u32], b: &[u32]) -> Ordering {
        for row in &self.rows {
            match Self::weight(row, a).cmp(&Self::weight(row, b)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        a.cmp(b)
    }

    pub fn compare(&self, a: &[u32], b: &[u32]) -> Result<Ordering, OrderError> {
        for e in [a, b] {
            if e.len() != self.nvars {
                return Err(OrderError::DimensionMismatch {
                    expected: self.nvars,
                    found: e.len(),
                });
            }
        }
        Ok(self.cmp_unchecked(a, b))
    }

    /// A sort key whose lexicographic order is this monomial order. The key
    /// is additive: `key(a + b) = key(a) + key(b)`.
    pub fn key(&self, e: &[u32]) -> OrderKey {
        let mut k = Vec::with_capacity(self.rows.len() + e.len());
        k.extend(self.rows.iter().map(|r| Self::weight(r, e)));
        k.extend(e.iter().map(|&x| i64::from(x)));
        OrderKey(k)
    }

    /// Sign of `x_i` against `1`, read from the first row that weighs `x_i`.
    fn unit_sign(&self, i: usize) -> Ordering {
        self.rows
            .iter()
            .map(|r| r[i].cmp(&0))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Greater)
    }

    pub fn classify(&self) -> OrderKind {
        let signs: Vec<Ordering> = (0..self.nvars).map(|i| self.unit_sign(i)).collect();
        if signs.iter().all(|s| *s == Ordering::Greater) {
            OrderKind::Global
        } else if signs.iter().all(|s| *s == Ordering::Less) {
            OrderKind::Local
        } else {
            OrderKind::Mixed
        }
    }

    pub fn is_global(&self) -> bool {
        self.classify() == OrderKind::Global
    }

    /// Local and refining negative total degree: `|a| < |b|` implies `x^a > x^b`.
    pub fn is_degree_compatible_local(&self) -> bool {
        match self.rows.first() {
            Some(first) if self.nvars > 0 => {
                let w = first[0];
                w < 0 && first.iter().all(|&x| x == w)
            }
            _ => false,
        }
    }

    /// The order on `(x, z)` comparing total degree first, then the
    /// `x`-parts by `self`.
    pub fn homogenized(&self) -> MonomialOrder {
        let n = self.nvars + 1;
        let mut rows = vec![vec![1; n]];
        for r in &self.rows {
            let mut r = r.clone();
            r.push(0);
            rows.push(r);
        }
        MonomialOrder { nvars: n, rows }
    }

    /// Extends every row with `extra` zero columns on the right.
    fn padded(&self, extra: usize) -> MonomialOrder {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.extend(std::iter::repeat_n(0, extra));
                r
            })
            .collect();
        MonomialOrder {
            nvars: self.nvars + extra,
            rows,
        }
    }
}

fn revlex_rows(nvars: usize) -> Vec<Vec<i64>> {
    (1..nvars)
        .rev()
        .map(|i| {
            let mut r = vec![0; nvars];
            r[i] = -1;
            r
        })
        .collect()
}

/// Lexicographically comparable image of an exponent under an order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey(Vec<i64>);

impl OrderKey {
    pub fn add(&self, other: &OrderKey) -> OrderKey {
        OrderKey(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Recovers the exponent stored in the tail of the key.
    pub fn exponent(&self, nvars: usize) -> Exponent {
        let tail = &self.0[self.0.len() - nvars..];
        Exponent(tail.iter().map(|&x| x as u32).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeVariant {
    /// `x`-parts by the main order, ties by lex on parameters.
    Block,
    /// `(x, z)`-parts by the homogenized main order, ties by lex on parameters.
    Homogenized,
}

/// An order on monomials `a^g x^a [z^k]` that lets parameters be treated as
/// the lowest block of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeOrder {
    main: MonomialOrder,
    nparams: usize,
    variant: CompositeVariant,
}

impl CompositeOrder {
    pub fn new(main: MonomialOrder, nparams: usize, variant: CompositeVariant) -> Self {
        CompositeOrder {
            main,
            nparams,
            variant,
        }
    }

    pub fn main(&self) -> &MonomialOrder {
        &self.main
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn variant(&self) -> CompositeVariant {
        self.variant
    }

    /// Number of main slots: `n`, or `n + 1` with the homogenizing variable.
    pub fn main_width(&self) -> usize {
        match self.variant {
            CompositeVariant::Block => self.main.nvars(),
            CompositeVariant::Homogenized => self.main.nvars() + 1,
        }
    }

    /// The same order as a single matrix order on the layout `(x, [z], a)`.
    pub fn combined(&self) -> MonomialOrder {
        match self.variant {
            CompositeVariant::Block => self.main.padded(self.nparams),
            CompositeVariant::Homogenized => self.main.homogenized().padded(self.nparams),
        }
    }

    /// Compares `a^param x^main` against `a^param2 x^main2`.
    pub fn compare(
        &self,
        (param, main): (&[u32], &[u32]),
        (param2, main2): (&[u32], &[u32]),
    ) -> Result<Ordering, OrderError> {
        let width = self.main_width();
        for (e, expected) in [
            (param, self.nparams),
            (param2, self.nparams),
            (main, width),
            (main2, width),
        ] {
            if e.len() != expected {
                return Err(OrderError::DimensionMismatch {
                    expected,
                    found: e.len(),
                });
            }
        }
        let by_main = match self.variant {
            CompositeVariant::Block => self.main.cmp_unchecked(main, main2),
            CompositeVariant::Homogenized => self.main.homogenized().cmp_unchecked(main, main2),
        };
        Ok(by_main.then_with(|| param.cmp(param2)))
    }
}
