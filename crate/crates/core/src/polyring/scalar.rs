//! Parameter polynomials and their fractions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};


pub type Rat = BigRational;

/// Exponents of parameter monomials are stored without trailing zeros, so
/// the derived `Vec` order coincides with lex order `a1 > a2 > ...` and no
/// parameter count has to travel with each scalar.
fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_add(a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect(),
    )
}

fn exp_sub(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (i, &x) in b.iter().enumerate() {
        out[i] = out[i].checked_sub(x)?;
    }
    Some(trim(out))
}

fn exp_min(a: &[u32], b: &[u32]) -> Vec<u32> {
    trim(a.iter().zip(b).map(|(x, y)| *x.min(y)).collect())
}

/// An element of `Q[a1, ..., am]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AScalar {
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl AScalar {
    pub fn zero() -> Self {
        AScalar::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        AScalar { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rat::from_integer(BigInt::from(c)))
    }

    /// The parameter `a_{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exp: Vec<u32>, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exp), c);
        }
        AScalar { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rat)>>(it: I) -> Self {
        let mut s = AScalar::zero();
        for (e, c) in it {
            s.add_term(trim(e), c);
        }
        s
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<&Rat> {
        match self.terms.len() {
            0 => None,
            1 => self.terms.get(&Vec::new() as &Vec<u32>),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || self.as_constant().is_some()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lex order of their (trimmed) exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    /// Number of parameter slots actually used.
    pub fn width(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| u64::from(x)).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e.get(v).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn plus(&self, other: &AScalar) -> AScalar {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }

    pub fn minus(&self, other: &AScalar) -> AScalar {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn negated(&self) -> AScalar {
        AScalar {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn times(&self, other: &AScalar) -> AScalar {
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        let mut out = AScalar::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(exp_add(e1, e2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> AScalar {
        if c.is_zero() {
            return AScalar::zero();
        }
        AScalar {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exp: &[u32], c: &Rat) -> AScalar {
        if c.is_zero() {
            return AScalar::zero();
        }
        AScalar {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (exp_add(e, exp), x * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> AScalar {
        let mut out = AScalar::one();
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }

    /// Exact quotient `self / other`, or `None` when `other` does not divide.
    pub fn exact_div(&self, other: &AScalar) -> Option<AScalar> {
        let (le, lc) = other.leading()?;
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = AScalar::zero();
        while let Some((e, c)) = rem.leading() {
            let shift = exp_sub(e, le)?;
            let coef = c / lc;
            rem = rem.minus(&other.mul_monomial(&shift, &coef));
            quot.add_term(shift, coef);
        }
        Some(quot)
    }

    /// Value at a rational point; missing coordinates read as zero.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let x = point.get(i).cloned().unwrap_or_else(Rat::zero);
                t *= num_traits::pow(x, k as usize);
            }
            total += t;
        }
        total
    }

    /// Partial derivative with respect to parameter `v`.
    pub fn derivative(&self, v: usize) -> AScalar {
        let mut out = AScalar::zero();
        for (e, c) in &self.terms {
            let k = e.get(v).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            out.add_term(trim(e2), c * Rat::from_integer(BigInt::from(k)));
        }
        out
    }

    /// Coefficients of the powers of parameter `v`: `self = sum c_i * a_v^i`.
    pub fn coefficients_in(&self, v: usize) -> Vec<AScalar> {
        let mut out = vec![AScalar::zero(); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let k = e.get(v).copied().unwrap_or(0) as usize;
            let mut e2 = e.clone();
            if v < e2.len() {
                e2[v] = 0;
            }
            out[k].add_term(trim(e2), c.clone());
        }
        out
    }

    /// Componentwise minimum of all exponents: the largest monomial factor.
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Vec::new();
        };
        it.fold(first.clone(), |acc, e| exp_min(&acc, e))
    }

    pub fn div_monomial(&self, exp: &[u32]) -> AScalar {
        AScalar {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (exp_sub(e, exp).expect("monomial divides"), c.clone()))
                .collect(),
        }
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn rational_content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rat::one();
        }
        Rat::new(num, den)
    }

    /// Integer-primitive associate with positive lex-leading coefficient.
    pub fn primitive(&self) -> AScalar {
        let Some((_, lc)) = self.leading() else {
            return AScalar::zero();
        };
        let mut c = self.rational_content();
        if lc.is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Associate with lex-leading coefficient one.
    pub fn monic(&self) -> AScalar {
        match self.leading() {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => AScalar::zero(),
        }
    }

    /// Remainder of division by a lex Groebner basis of parameter polynomials.
    pub fn normal_form(&self, basis: &[AScalar]) -> AScalar {
        if basis.is_empty() {
            return self.clone();
        }
        let leads: Vec<(&Vec<u32>, &Rat)> = basis.iter().filter_map(AScalar::leading).collect();
        let mut rem = AScalar::zero();
        let mut work = self.clone();
        'outer: while let Some((e, c)) = work.leading() {
            let (e, c) = (e.clone(), c.clone());
            for (g, (ge, gc)) in basis.iter().zip(&leads) {
                if let Some(shift) = exp_sub(&e, ge) {
                    work = work.minus(&g.mul_monomial(&shift, &(&c / *gc)));
                    continue 'outer;
                }
            }
            work.terms.remove(&e);
            rem.add_term(e, c);
        }
        rem
    }

    /// Graded-lex descending term order, used for display.
    pub fn display_terms(&self) -> Vec<(&Vec<u32>, &Rat)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u64 = a.iter().map(|&x| u64::from(x)).sum();
            let db: u64 = b.iter().map(|&x| u64::from(x)).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

impl fmt::Debug for AScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| format!("{c}*a{e:?}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A fraction of parameter polynomials. Fractions are kept only loosely
/// reduced; equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct ParamScalar {
    num: AScalar,
    den: AScalar,
}

impl ParamScalar {
    /// Panics when `den` is zero.
    pub fn new(num: AScalar, den: AScalar) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut s = ParamScalar { num, den };
        s.tidy();
        s
    }

    pub fn from_poly(num: AScalar) -> Self {
        ParamScalar {
            num,
            den: AScalar::one(),
        }
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::from_poly(AScalar::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(AScalar::from_int(c))
    }

    pub fn num(&self) -> &AScalar {
        &self.num
    }

    pub fn den(&self) -> &AScalar {
        &self.den
    }

    pub fn into_parts(self) -> (AScalar, AScalar) {
        (self.num, self.den)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Cheap normalization: constant denominators are folded in, common
    /// monomial factors cancelled, the denominator made lex-monic, and
    /// exact divisibility between numerator and denominator exploited.
    fn tidy(&mut self) {
        if self.num.is_zero() {
            self.den = AScalar::one();
            return;
        }
        if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                self.num = self.num.scale(&c.recip());
                self.den = AScalar::one();
            }
            return;
        }
        let common = exp_min(&self.num.monomial_content(), &self.den.monomial_content());
        if !common.is_empty() {
            self.num = self.num.div_monomial(&common);
            self.den = self.den.div_monomial(&common);
        }
        if let Some(c) = self.den.as_constant().cloned() {
            self.num = self.num.scale(&c.recip());
            self.den = AScalar::one();
            return;
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        if self.den.len() <= self.num.len() {
            if let Some(q) = self.num.exact_div(&self.den) {
                self.num = q;
                self.den = AScalar::one();
            }
        }
    }

    /// Fully reduced form: numerator and denominator coprime, denominator
    /// lex-monic.
    pub fn canonical(&self) -> ParamScalar {
        if self.den.is_one() || self.num.is_zero() {
            return self.clone();
        }
        let g = super::gcd::gcd(&self.num, &self.den);
        let mut num = self.num.exact_div(&g).expect("gcd divides numerator");
        let mut den = self.den.exact_div(&g).expect("gcd divides denominator");
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        num = num.scale(&lc.recip());
        den = den.scale(&lc.recip());
        ParamScalar { num, den }
    }

    pub fn eval(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }
}

impl PartialEq for ParamScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.times(&other.den) == other.num.times(&self.den)
    }
}

impl Eq for ParamScalar {}

impl fmt::Debug for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

impl From<AScalar> for ParamScalar {
    fn from(a: AScalar) -> Self {
        ParamScalar::from_poly(a)
    }
}

impl super::Coeff for ParamScalar {
    fn zero() -> Self {
        ParamScalar::from_poly(AScalar::zero())
    }

    fn one() -> Self {
        ParamScalar::from_poly(AScalar::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num == self.den
    }

    fn plus(&self, other: &Self) -> Self {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        let mut s = if self.den == other.den {
            ParamScalar {
                num: self.num.plus(&other.num),
                den: self.den.clone(),
            }
        } else if let Some(q) = self.den.exact_div(&other.den) {
            ParamScalar {
                num: self.num.plus(&other.num.times(&q)),
                den: self.den.clone(),
            }
        } else if let Some(q) = other.den.exact_div(&self.den) {
            ParamScalar {
                num: self.num.times(&q).plus(&other.num),
                den: other.den.clone(),
            }
        } else {
            ParamScalar {
                num: self
                    .num
                    .times(&other.den)
                    .plus(&other.num.times(&self.den)),
                den: self.den.times(&other.den),
            }
        };
        s.tidy();
        s
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }

    fn negated(&self) -> Self {
        ParamScalar {
            num: self.num.negated(),
            den: self.den.clone(),
        }
    }

    fn times(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return <Self as super::Coeff>::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return ParamScalar::from_poly(self.num.times(&other.num));
        }
        // Cancel across before multiplying out.
        let (mut n1, mut d2) = (self.num.clone(), other.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.exact_div(&d2) {
                n1 = q;
                d2 = AScalar::one();
            }
        }
        let (mut n2, mut d1) = (other.num.clone(), self.den.clone());
        if !d1.is_one() {
            if let Some(q) = n2.exact_div(&d1) {
                n2 = q;
                d1 = AScalar::one();
            }
        }
        let mut s = ParamScalar {
            num: n1.times(&n2),
            den: d1.times(&d2),
        };
        s.tidy();
        s
    }

    fn over(&self, other: &Self) -> Self {
        assert!(!other.num.is_zero(), "division by zero");
        self.times(&other.inverse())
    }

    fn inverse(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero");
        let mut s = ParamScalar {
            num: self.den.clone(),
            den: self.num.clone(),
        };
        s.tidy();
        s
    }

    fn content_scale(coeffs: &[&Self]) -> Self {
        // Clearing a common denominator keeps coefficient sizes in check.
        let mut den = AScalar::one();
        for c in coeffs {
            if !c.den.is_one() && den.exact_div(&c.den).is_none() {
                den = den.times(&c.den);
            }
        }
        ParamScalar::from_poly(den)
    }
}

impl super::Coeff for Rat {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn negated(&self) -> Self {
        -self
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn over(&self, other: &Self) -> Self {
        self / other
    }

    fn inverse(&self) -> Self {
        self.recip()
    }

    fn content_scale(coeffs: &[&Self]) -> Self {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in coeffs {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return <Rat as One>::one();
        }
        let scale = Rat::new(den, num);
        match coeffs.first() {
            Some(lead) if lead.is_negative() => -scale,
            _ => scale,
        }
    }
}
