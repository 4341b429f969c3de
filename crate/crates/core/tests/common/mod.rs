#![allow(dead_code)]

use parastd::orders::{Exponent, MonomialOrder};
use parastd::polyring::{AScalar, ParamPoly, ParamScalar, Poly, QPoly, Rat};
use proptest::prelude::*;

pub fn int(c: i64) -> Rat {
    Rat::from_integer(c.into())
}

/// Exponent of total degree at most `max_deg`.
pub fn arb_exp(n: usize, max_deg: u32) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(0u32..=max_deg, n).prop_map(move |mut e| {
        while e.iter().sum::<u32>() > max_deg {
            let i = e.iter().position(|&x| x > 0).unwrap();
            e[i] -= 1;
        }
        Exponent::new(e)
    })
}

/// Nonzero polynomial in one parameter of degree at most two.
pub fn arb_ascalar() -> impl Strategy<Value = AScalar> {
    prop::collection::vec(-3i64..=3, 3)
        .prop_filter("nonzero", |cs| cs.iter().any(|&c| c != 0))
        .prop_map(|cs| AScalar::from_terms(cs.into_iter().enumerate().map(|(k, c)| (vec![k as u32], int(c)))))
}

pub fn arb_param_poly(n: usize, terms: usize, max_deg: u32) -> impl Strategy<Value = ParamPoly> {
    prop::collection::vec((arb_exp(n, max_deg), arb_ascalar()), 1..=terms)
        .prop_map(move |ts| Poly::from_terms(n, ts.into_iter().map(|(e, c)| (e, ParamScalar::from_poly(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_qpoly(n: usize, terms: usize, max_deg: u32) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((arb_exp(n, max_deg), -4i64..=4), 1..=terms)
        .prop_map(move |ts| Poly::from_terms(n, ts.into_iter().map(|(e, c)| (e, int(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_global_order(n: usize) -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![
        Just(MonomialOrder::grevlex(n)),
        Just(MonomialOrder::lex(n)),
        prop::collection::vec(1i64..=3, n).prop_map(move |w| MonomialOrder::new(n, vec![w]).unwrap()),
    ]
}

/// `a - c` for the single parameter `a`.
pub fn point_ideal(c: i64) -> AScalar {
    AScalar::from_terms([(vec![1], int(1)), (vec![0], int(-c))])
}
