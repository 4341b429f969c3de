mod common;

use common::*;
use parastd::genstd::{staircase_of, Staircase};
use parastd::hilbert::{hilbert_partition, hilbert_polynomial, hsf, milnor_number, stable_range};
use parastd::orders::{Exponent, MonomialOrder};
use parastd::polyring::text::{parse_poly, Names};
use parastd::polyring::{Poly, Rat};
use proptest::prelude::*;

fn box_exponents(n: usize, max_deg: u32) -> Vec<Exponent> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| (0..=max_deg).map(move |k| [e.clone(), vec![k]].concat()))
            .collect();
    }
    out.into_iter()
        .filter(|e| e.iter().sum::<u32>() <= max_deg)
        .map(Exponent::new)
        .collect()
}

fn brute_count(e: &Staircase, r: u32) -> u64 {
    box_exponents(e.nvars(), r).iter().filter(|a| !e.contains(a)).count() as u64
}

fn arb_staircase() -> impl Strategy<Value = Staircase> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(arb_exp(n, 4), 1..=5)
            .prop_map(move |es| Staircase::from_exponents(n, &es))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hsf_matches_enumeration(e in arb_staircase()) {
        let mut prev = 0;
        for r in 0..=10u32 {
            let v = hsf(&e, r as u64);
            prop_assert_eq!(v, brute_count(&e, r));
            prop_assert!(v >= prev);
            prev = v;
        }
        let data = hilbert_polynomial(&e, stable_range(&e)).unwrap();
        for r in data.stabilization..data.stabilization + 6 {
            prop_assert_eq!(data.eval(r), Rat::from_integer(hsf(&e, r).into()));
        }
    }

    #[test]
    fn hsf_counts_truncated_quotients(
        gens in prop::collection::vec(arb_qpoly(2, 3, 3), 1..=2),
        r in 0u32..=4,
    ) {
        let order = MonomialOrder::neg_grevlex(2);
        let e = staircase_of(&gens, &order).unwrap();
        let mut truncated = gens.clone();
        for a in box_exponents(2, r + 1).into_iter().filter(|a| a.degree() == (r + 1) as u64) {
            truncated.push(Poly::monomial(a, int(1)));
        }
        let e_trunc = staircase_of(&truncated, &order).unwrap();
        prop_assert_eq!(brute_count(&e_trunc, r + 1), hsf(&e, r as u64));
    }
}

#[test]
fn milnor_number_of_plane_staircases() {
    let e = |v: &[u32]| Exponent::new(v.to_vec());
    assert_eq!(milnor_number(&Staircase::from_exponents(2, &[e(&[2, 0]), e(&[0, 2])])), Some(4));
    assert_eq!(milnor_number(&Staircase::from_exponents(2, &[e(&[1, 1])])), None);
}

fn semicontinuity(params: &[&str], vars: &[&str], ideal: &[&str]) {
    let names = Names::new(params, vars);
    let inputs: Vec<_> = ideal.iter().map(|s| parse_poly(s, &names).unwrap()).collect();
    let order = MonomialOrder::neg_grevlex(vars.len());
    let strata = hilbert_partition(&inputs, &order, params.len(), 16).unwrap();
    let generic = strata
        .iter()
        .find(|s| s.cells.iter().any(|c| c.vanish.is_empty()))
        .expect("open stratum");
    let mu = generic.milnor.expect("finite generic multiplicity");
    for s in &strata {
        if let Some(special) = s.milnor {
            assert!(special >= mu, "special {special} below generic {mu}");
        }
    }
}

#[test]
fn milnor_number_is_upper_semicontinuous() {
    semicontinuity(&["a"], &["x1", "x2"], &["3*x1^2 + a*x2", "3*x2^2 + a*x1"]);
    semicontinuity(&["c"], &["x", "y", "z"], &["x^2 + c*y*z", "y^2 + x*z", "z^3 + c*x"]);
    semicontinuity(&["a", "b"], &["x1", "x2"], &["x1^2 + a*x2 + x1*x2^2", "x2^3 + b*x1"]);
}
