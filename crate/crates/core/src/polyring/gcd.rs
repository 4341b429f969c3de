//! Multivariate gcd over `Q` by recursive primitive remainder sequences,
//! square-free parts and coprime splitting of factor lists.

use num_traits::One;

use super::{AScalar, Rat};

/// Lowest-index parameter that occurs in `p` or `q`.
fn main_var(p: &AScalar, q: &AScalar) -> Option<usize> {
    let mut best: Option<usize> = None;
    for s in [p, q] {
        for (e, _) in s.terms() {
            if let Some(i) = e.iter().position(|&x| x > 0) {
                best = Some(best.map_or(i, |b| b.min(i)));
            }
        }
    }
    best
}

fn content_in(p: &AScalar, v: usize) -> AScalar {
    let mut g = AScalar::zero();
    for c in p.coefficients_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return AScalar::one();
        }
    }
    g
}

fn primitive_in(p: &AScalar, v: usize) -> AScalar {
    let c = content_in(p, v);
    let q = if c.is_one() {
        p.clone()
    } else {
        p.exact_div(&c).expect("content divides")
    };
    q.primitive()
}

/// Pseudo-remainder of `a` by `b` in the variable `v`, up to a factor in
/// the other parameters.
fn pseudo_rem(a: &AScalar, b: &AScalar, v: usize) -> AScalar {
    let db = b.degree_in(v);
    let lb = b.coefficients_in(v).pop().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.coefficients_in(v).pop().expect("nonzero");
        let mut shift = vec![0; v + 1];
        shift[v] = dr - db;
        let t = lr.mul_monomial(&shift, &Rat::one());
        r = r.times(&lb).minus(&t.times(b));
    }
    r
}

/// Greatest common divisor, normalized to lex-leading coefficient one.
/// `gcd(0, 0) = 0`.
pub fn gcd(p: &AScalar, q: &AScalar) -> AScalar {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return AScalar::one();
    }
    if p == q {
        return p.monic();
    }
    let Some(v) = main_var(p, q) else {
        return AScalar::one();
    };
    let c = gcd(&content_in(p, v), &content_in(q, v));
    let mut f = primitive_in(p, v);
    let mut g = primitive_in(q, v);
    if f.degree_in(v) < g.degree_in(v) {
        std::mem::swap(&mut f, &mut g);
    }
    let prim = loop {
        if g.degree_in(v) == 0 {
            break AScalar::one();
        }
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            break g;
        }
        f = g;
        g = primitive_in(&r, v);
    };
    c.times(&prim).monic()
}

/// Largest square-free divisor up to units.
pub fn squarefree_part(p: &AScalar) -> AScalar {
    if p.is_constant() {
        return AScalar::one();
    }
    let mut g = p.clone();
    for v in 0..p.width() {
        let d = p.derivative(v);
        if d.is_zero() {
            continue;
        }
        g = gcd(&g, &d);
        if g.is_constant() {
            break;
        }
    }
    p.exact_div(&g).expect("gcd divides").primitive()
}

/// Refines a list of polynomials into pairwise coprime square-free
/// non-constant factors whose product has the same zero set. Output is
/// primitive and sorted for determinism.
pub fn coprime_factors(items: &[AScalar]) -> Vec<AScalar> {
    let mut work: Vec<AScalar> = items
        .iter()
        .filter(|p| !p.is_constant())
        .map(squarefree_part)
        .collect();
    let mut out: Vec<AScalar> = Vec::new();
    while let Some(p) = work.pop() {
        if p.is_constant() {
            continue;
        }
        let mut p = p;
        let mut split = None;
        for (i, q) in out.iter().enumerate() {
            let g = gcd(&p, q);
            if !g.is_constant() {
                split = Some((i, g));
                break;
            }
        }
        match split {
            None => out.push(p.primitive()),
            Some((i, g)) => {
                let q = out.swap_remove(i);
                let g = g.primitive();
                let q_rest = q.exact_div(&g).expect("gcd divides");
                p = p.exact_div(&g).expect("gcd divides");
                for r in [g, q_rest, p] {
                    if !r.is_constant() {
                        work.push(squarefree_part(&r));
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| display_key(a).cmp(&display_key(b)));
    out.dedup();
    out
}

/// Sort key used for deterministic factor lists: degree, then terms with
/// earlier parameters first.
pub fn display_key(p: &AScalar) -> (u64, std::cmp::Reverse<Vec<Vec<u32>>>) {
    (
        p.total_degree(),
        std::cmp::Reverse(p.display_terms().into_iter().map(|(e, _)| e.clone()).collect()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a() -> AScalar {
        AScalar::var(0)
    }
    fn b() -> AScalar {
        AScalar::var(1)
    }
    fn int(c: i64) -> AScalar {
        AScalar::from_int(c)
    }

    #[test]
    fn univariate_gcd() {
        let p = a().times(&a()).minus(&int(1));
        let q = a().minus(&int(1)).times(&a().plus(&int(2)));
        assert_eq!(gcd(&p, &q), a().minus(&int(1)));
        assert!(gcd(&a(), &a().plus(&int(1))).is_one());
    }

    #[test]
    fn bivariate_gcd() {
        let common = a().times(&b()).plus(&int(1));
        let p = common.times(&a().minus(&b()));
        let q = common.times(&common).times(&b());
        assert_eq!(gcd(&p, &q), common.monic());
        assert_eq!(gcd(&a().times(&b()), &b().times(&b())), b());
    }

    #[test]
    fn squarefree() {
        let p = a().pow(3).times(&b().plus(&int(1)).pow(2)).scale(&Rat::from_integer(6.into()));
        assert_eq!(squarefree_part(&p), a().times(&b().plus(&int(1))));
    }

    #[test]
    fn coprime_splitting() {
        let out = coprime_factors(&[a(), a().times(&b()), a().pow(2), int(3)]);
        assert_eq!(out, vec![a(), b()]);
    }

    fn arb(m: usize) -> impl Strategy<Value = AScalar> {
        prop::collection::vec((prop::collection::vec(0u32..3, m), -4i64..=4), 1..4).prop_map(|ts| {
            AScalar::from_terms(ts.into_iter().map(|(e, c)| (e, Rat::from_integer(c.into()))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gcd_divides_and_finds_common_factor(p in arb(2), q in arb(2), r in arb(2)) {
            prop_assume!(!p.is_zero() && !q.is_zero() && !r.is_zero());
            let pr = p.times(&r);
            let qr = q.times(&r);
            let g = gcd(&pr, &qr);
            prop_assert!(pr.exact_div(&g).is_some());
            prop_assert!(qr.exact_div(&g).is_some());
            prop_assert!(g.exact_div(&r).is_some() || r.is_constant());
        }
    }
}
