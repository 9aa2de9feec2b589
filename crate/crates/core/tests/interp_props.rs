mod common;

use common::*;
use num_complex::Complex64;
use polylift::interp::{
    agler_feasibility, eg_construct, grid_sup, pick_matrix_check, solve_psi, verify_agler_witness, AglerConfig,
    Feasibility, InterpolationProblem,
};
use polylift::kernels::{gram_matrix, Point};
use polylift::linalg::{hermitian_eigenvalues, hpd_condition, CMatrix};
use polylift::quotient::{diagonal_map, operator_norm, QuotientModule};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pick_positivity_matches_contractivity(
        points in arb_points(2, 0.8, 1..=4, 0.1),
        w in prop::collection::vec(arb_complex(0.7), 4),
    ) {
        let prob = InterpolationProblem::new(points.clone(), w[..points.len()].to_vec()).unwrap();
        let pick = pick_matrix_check(&prob);
        let q = QuotientModule::zero_based(points, None).unwrap();
        let norm = operator_norm(&diagonal_map(&q, prob.targets()).unwrap()).unwrap();
        // away from the boundary the two tests agree
        prop_assume!((norm - 1.0).abs() > 1e-8 && pick.min_eigenvalue.abs() > 1e-8);
        prop_assert_eq!(norm <= 1.0, pick.min_eigenvalue >= 0.0);
    }

    #[test]
    fn solve_psi_interpolates(
        points in arb_points(3, 0.9, 1..=5, 0.05),
        w in prop::collection::vec(arb_complex(0.7), 5),
    ) {
        let g = gram_matrix(&points).unwrap();
        prop_assume!(hpd_condition(&g).unwrap() <= 1e8);
        let prob = InterpolationProblem::new(points.clone(), w[..points.len()].to_vec()).unwrap();
        let psi = solve_psi(&prob).unwrap();
        for (z, t) in points.iter().zip(prob.targets()) {
            prop_assert!((psi.evaluate(z.coords()) - t).norm() <= 1e-10);
        }
    }

    #[test]
    fn linear_construction_interpolates_within_the_schur_class(
        r in 0.58f64..0.99,
        shift in 0.0..std::f64::consts::TAU,
        dir in prop::collection::vec(arb_complex(1.0), 3),
        scale in 0.0f64..1.0,
    ) {
        // frame from the third roots of unity, rotated
        let om = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let rot = Complex64::from_polar(1.0, shift);
        let nodes: Vec<Point> = (0..3)
            .map(|j| Point::new(vec![rot * om.powu(j) * r, rot.conj() * om.powu(2 * j) * r]).unwrap())
            .collect();
        let basis: Vec<Vec<Complex64>> = (0..2).map(|i| nodes.iter().map(|z| z.coords()[i]).collect()).collect();
        let norm = dir.iter().map(|d| d.norm_sqr()).sum::<f64>().sqrt().max(1e-12);
        // ‖w‖ ≤ 1/√3 keeps Σ|α_i| ≤ 1
        let w: Vec<Complex64> = dir.iter().map(|d| d * (scale / (3f64.sqrt() * norm))).collect();
        let eg = eg_construct(&nodes, &w, &basis).unwrap();
        prop_assert!(eg.report.interpolation_error <= 1e-10);
        prop_assert!(eg.report.alpha_l1 <= 1.0 + 1e-12);
        prop_assert!(eg.report.alpha_l1 <= 3f64.sqrt() * eg.report.target_norm + 1e-12);
        prop_assert!(grid_sup(&eg.phi, 64).unwrap() <= 1.0 + 1e-9);
    }
}

#[test]
fn agler_with_constant_second_coordinate_is_one_variable_pick() {
    let cfg = AglerConfig::default();
    for (w, expect) in [(0.5, Feasibility::Feasible), (0.9, Feasibility::Infeasible)] {
        let prob = InterpolationProblem::real(&[&[0.0, 0.0], &[0.5, 0.0]], &[0.0, w]).unwrap();
        let one_var = pick_matrix_check(&InterpolationProblem::real(&[&[0.0], &[0.5]], &[0.0, w]).unwrap());
        let r = agler_feasibility(&prob, &cfg).unwrap();
        assert_eq!(r.feasible, expect);
        assert_eq!(one_var.psd, expect == Feasibility::Feasible);
        if let Some(wit) = &r.witness {
            assert!(verify_agler_witness(&prob, wit, 1e-10));
            // with β = 0 the Δ term is (1 − 0)Δ, so (1 − w̄w) − Δ must equal (1 − ᾱα)∘Γ with Γ PSD
            let rest = CMatrix::from_fn(2, 2, |i, j| {
                let wi = prob.targets()[i];
                let wj = prob.targets()[j];
                Complex64::new(1.0, 0.0) - wi.conj() * wj - wit.delta[(i, j)]
            });
            let a = CMatrix::from_fn(2, 2, |i, j| {
                let ai = prob.nodes()[i].coords()[0];
                let aj = prob.nodes()[j].coords()[0];
                Complex64::new(1.0, 0.0) - ai.conj() * aj
            });
            let gamma = rest.component_div(&a);
            assert!(hermitian_eigenvalues(&gamma)[0] >= -1e-10);
        }
    }
}

#[test]
fn agler_feasible_data_yields_checked_witnesses() {
    let cfg = AglerConfig::default();
    let cases: [(&[&[f64]], &[f64]); 3] = [
        (&[&[0.1, 0.2], &[-0.3, 0.1], &[0.2, -0.4]], &[0.1, 0.0, -0.1]),
        (&[&[0.5, 0.5], &[-0.5, 0.5]], &[0.2, -0.2]),
        (&[&[0.3, 0.0], &[0.0, 0.3]], &[0.25, 0.25]),
    ];
    for (nodes, w) in cases {
        let prob = InterpolationProblem::real(nodes, w).unwrap();
        let r = agler_feasibility(&prob, &cfg).unwrap();
        assert_ne!(r.feasible, Feasibility::Infeasible);
        if let Some(wit) = &r.witness {
            assert!(verify_agler_witness(&prob, wit, cfg.psd_tol));
        }
    }
}
