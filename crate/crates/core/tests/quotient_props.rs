mod common;

use std::sync::Arc;

use common::*;
use polylift::kernels::AnalyticSymbol;
use polylift::linalg::{hpd_condition, max_abs_diff, CMatrix, CVector};
use polylift::quotient::{
    compress, compress_symbol, diagonal_map, is_module_map, onevar_identity_supports, weak_lift_symbol, QuotientModule,
};
use polylift::tpoly::TrigPoly;
use proptest::prelude::*;

fn modules() -> Vec<Arc<QuotientModule>> {
    vec![
        QuotientModule::homogeneous(2, 2).unwrap(),
        QuotientModule::homogeneous(3, 1).unwrap(),
        QuotientModule::homogeneous(2, 3).unwrap(),
        QuotientModule::corank_monomial(2, 3).unwrap(),
        QuotientModule::one_var_model(4).unwrap(),
    ]
}

fn element_poly(q: &QuotientModule, a: &CVector) -> TrigPoly {
    match q.element(a) {
        AnalyticSymbol::Poly { poly } => poly,
        AnalyticSymbol::Combo { combo } => combo.truncate(q.trunc_degree()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projection_is_idempotent(seed in prop::collection::vec(arb_complex(1.0), 20), which in 0usize..5) {
        let q = &modules()[which];
        let a = CVector::from_iterator(q.size(), seed.iter().cycle().copied().take(q.size()));
        let back = q.project(&element_poly(q, &a)).unwrap();
        prop_assert!((back - &a).camax() <= 1e-12);
    }

    #[test]
    fn zero_based_projection_is_idempotent(points in arb_points(2, 0.3, 1..=4, 0.05), seed in prop::collection::vec(arb_complex(1.0), 4)) {
        let q = QuotientModule::zero_based(points, None).unwrap();
        let a = CVector::from_iterator(q.size(), seed.iter().copied().take(q.size()));
        let back = q.project(&element_poly(&q, &a)).unwrap();
        // series truncation error is amplified by the Gram condition number
        let cond = hpd_condition(q.gram()).unwrap();
        prop_assert!((back - &a).camax() <= 1e-12 * cond.max(1.0));
    }

    #[test]
    fn compressions_commute_with_shifts(phi in arb_analytic(2, 3, 6), which in 0usize..2) {
        let q = &modules()[if which == 0 { 0 } else { 3 }];
        let x = compress(q, &phi).unwrap();
        prop_assert!(x.commutator_norm().unwrap() <= 1e-10 * (1.0 + phi.coefficient_l1()));
        prop_assert!(is_module_map(&x, 1e-10 * (1.0 + phi.coefficient_l1())).unwrap());
    }

    #[test]
    fn zero_based_compressions_commute(points in arb_points(2, 0.3, 1..=4, 0.05), phi in arb_analytic(2, 3, 5)) {
        let q = QuotientModule::zero_based(points, None).unwrap();
        let x = compress(&q, &phi).unwrap();
        prop_assert!(x.commutator_norm().unwrap() <= 1e-10 * (1.0 + phi.coefficient_l1()));
    }

    #[test]
    fn weak_lift_round_trip(points in arb_points(2, 0.3, 1..=4, 0.05), w in prop::collection::vec(arb_complex(0.7), 4)) {
        let q = QuotientModule::zero_based(points, None).unwrap();
        let x = diagonal_map(&q, &w[..q.size()]).unwrap();
        let psi = weak_lift_symbol(&x).unwrap();
        let back = compress_symbol(&q, &psi.into()).unwrap();
        let scale = x.matrix().iter().map(|v| v.norm()).fold(1.0, f64::max);
        prop_assert!(max_abs_diff(back.matrix(), x.matrix()) <= 1e-9 * scale);
    }

    #[test]
    fn compressing_the_projection_of_one_is_the_identity(points in arb_points(2, 0.3, 1..=4, 0.05)) {
        let q = QuotientModule::zero_based(points, None).unwrap();
        let one = q.project(&TrigPoly::constant(2, c(1.0, 0.0))).unwrap();
        let p1 = element_poly(&q, &one);
        let x = compress(&q, &p1).unwrap();
        prop_assert!(max_abs_diff(x.matrix(), &CMatrix::identity(q.size(), q.size())) <= 1e-9);
    }
}

#[test]
fn one_variable_model_identity_supports() {
    for d in 1..=4 {
        let (lhs, rhs) = onevar_identity_supports(d, 16).unwrap();
        assert_eq!(lhs, rhs, "d = {d}");
        assert!(!lhs.is_empty());
    }
}
