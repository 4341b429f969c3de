mod common;

use common::*;
use parastd::division::divide;
use parastd::genstd::{
    check_invariants, divide_mod_q, generic_basis, generic_reduced_basis, leading_mod_q,
    verify_specialization, GenError, PrimeContext, Staircase,
};
use parastd::orders::{Exponent, MonomialOrder};
use parastd::polyring::{ParamPoint, ParamPoly};
use proptest::prelude::*;

fn context(q: Option<i64>) -> PrimeContext {
    match q {
        None => PrimeContext::zero(1),
        Some(c) => PrimeContext::new(1, vec![point_ideal(c)]).unwrap(),
    }
}

/// Integer points of `V(Q)` in `[-6, 6]` off the excluded locus.
fn admissible_points(b: &parastd::genstd::GenericBasis, q: Option<i64>, count: usize) -> Vec<ParamPoint> {
    let candidates: Vec<i64> = match q {
        Some(c) => vec![c],
        None => (-6..=6).collect(),
    };
    candidates
        .into_iter()
        .map(|c| ParamPoint::from_ints(&[c]))
        .filter(|p| !b.h.vanishes_at(&p.coords))
        .take(count)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn division_mod_q_specializes(
        f in arb_param_poly(2, 5, 3),
        gs in prop::collection::vec(arb_param_poly(2, 3, 2), 1..=3),
        order in arb_global_order(2),
        q in prop::option::of(-3i64..=3),
        c in -5i64..=5,
    ) {
        let ctx = context(q);
        let mut h = parastd::genstd::FactoredScalar::one();
        for g in &gs {
            match leading_mod_q(g, &order, &ctx) {
                Ok((_, lc)) => h.push(lc.num()),
                Err(GenError::AllCoefficientsInQ) => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
        let d = divide_mod_q(&f, &gs, &order, &ctx, None).unwrap();
        let recombined = d
            .quotients
            .iter()
            .zip(&gs)
            .fold(d.remainder.add(&d.t), |acc, (q, g)| acc.add(&q.mul(g)));
        prop_assert_eq!(recombined, f.clone());
        for (_, coef) in d.t.terms() {
            prop_assert!(ctx.scalar_in_q(coef).unwrap());
        }
        let point = ParamPoint::from_ints(&[q.unwrap_or(c)]);
        prop_assume!(!h.vanishes_at(&point.coords));
        let fs = f.specialize(&point).unwrap();
        let gss: Vec<_> = gs.iter().map(|g| g.specialize(&point).unwrap()).collect();
        let direct = divide(&fs, &gss, &order).unwrap();
        for (q_param, q_direct) in d.quotients.iter().zip(&direct.quotients) {
            prop_assert_eq!(&q_param.specialize(&point).unwrap(), q_direct);
        }
        prop_assert_eq!(d.remainder.specialize(&point).unwrap(), direct.remainder);
    }

    #[test]
    fn well_order_bases_satisfy_definition(
        fs in prop::collection::vec(arb_param_poly(2, 3, 2), 1..=3),
        order in arb_global_order(2),
        q in prop::option::of(-2i64..=2),
    ) {
        let ctx = context(q);
        let b = generic_basis(&fs, &order, &ctx).unwrap();
        prop_assert!(check_invariants(&b, 0).unwrap().is_empty());
        for cof in b.cofactors.iter().flatten() {
            prop_assert!(cof.is_polynomial());
        }
        let gens = b.staircase.generators();
        for (i, e) in gens.iter().enumerate() {
            for (j, f) in gens.iter().enumerate() {
                prop_assert!(i == j || !e.is_multiple_of(f));
            }
        }
        let pts = admissible_points(&b, q, 3);
        let rep = verify_specialization(&b, &pts).unwrap();
        prop_assert!(rep.all_pass(), "{:?}", rep);

        let r = generic_reduced_basis(&b, 0).unwrap();
        prop_assert_eq!(&r.staircase, &b.staircase, "reduction changed the staircase");
        let leads = r.leading_exponents().unwrap();
        for (g, lead) in r.gens.iter().zip(&leads) {
            for (e, coef) in g.terms() {
                if e != lead && !ctx.scalar_in_q(coef).unwrap() {
                    prop_assert!(!r.staircase.contains(e), "tail term {:?} in staircase", e);
                }
            }
        }
        let again = generic_reduced_basis(&r, 0).unwrap();
        prop_assert_eq!(again.gens, r.gens, "reduction is not idempotent");
    }

    #[test]
    fn local_bases_specialize(
        fs in prop::collection::vec(arb_param_poly(2, 3, 3), 1..=2),
        q in prop::option::of(-2i64..=2),
    ) {
        let order = MonomialOrder::neg_grevlex(2);
        let ctx = context(q);
        let b = generic_basis(&fs, &order, &ctx).unwrap();
        prop_assert!(check_invariants(&b, 4).unwrap().is_empty());
        for cof in b.cofactors.iter().flatten() {
            prop_assert!(cof.is_polynomial());
        }
        let pts = admissible_points(&b, q, 3);
        let rep = verify_specialization(&b, &pts).unwrap();
        prop_assert!(rep.all_pass(), "{:?}", rep);
    }
}

#[test]
fn staircase_is_an_antichain() {
    let e = |v: &[u32]| Exponent::new(v.to_vec());
    let s = Staircase::from_exponents(2, &[e(&[2, 1]), e(&[1, 1]), e(&[0, 3]), e(&[1, 1]), e(&[3, 0])]);
    assert_eq!(s.generators(), &[e(&[0, 3]), e(&[1, 1]), e(&[3, 0])]);
    assert!(s.contains(&e(&[2, 2])));
    assert!(!s.contains(&e(&[2, 0])));
}

#[test]
fn inputs_inside_q_give_empty_basis() {
    let a = parastd::polyring::AScalar::var(0);
    let ctx = PrimeContext::new(1, vec![a.clone()]).unwrap();
    let f = ParamPoly::monomial(
        Exponent::new(vec![1, 0]),
        parastd::polyring::ParamScalar::from_poly(a),
    );
    let b = generic_basis(&[f], &MonomialOrder::lex(2), &ctx).unwrap();
    assert!(b.gens.is_empty());
    assert!(b.staircase.generators().is_empty());
    assert!(b.h.is_one());
}
