mod common;

use common::{cofactor_det, dense_spectrum, robin_oracle_matrix, small_q, spectral_distance};
use epspect::exactpoly::{q_from_f64, Q};
use epspect::lattice::{self, build_hamiltonian, dirichlet_spectrum, Convention, ModelParams, RobinData};
use epspect::secular::{secular_poly, spectrum, Param};
use num_complex::Complex64;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| small_q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn secular_poly_matches_cofactor_determinant(n in 2usize..=8, u in rational(), r2 in (0i64..=60, 1i64..=12).prop_map(|(a, b)| small_q(a, b))) {
        let p = secular_poly(n, Param::Value(u.clone()), Param::Value(r2.clone())).unwrap().numeric().unwrap();
        prop_assert_eq!(p, cofactor_det(n, &u, &r2));
    }

    #[test]
    fn dyadic_parameters_match_too(n in 2usize..=6, u in -2.0f64..2.0, r in 0.0f64..1.5) {
        let uq = q_from_f64(u).unwrap();
        let rq = q_from_f64(r).unwrap();
        let r2 = &rq * &rq;
        let p = secular_poly(n, Param::Value(uq.clone()), Param::Value(r2.clone())).unwrap().numeric().unwrap();
        prop_assert_eq!(p, cofactor_det(n, &uq, &r2));
    }

    #[test]
    fn robin_elimination_matches_corner_model(
        n in 2usize..=10,
        alpha in -5.0f64..5.0,
        beta in -5.0f64..5.0,
        h in 0.05f64..2.0,
    ) {
        let z = lattice::robin_to_z(&RobinData { alpha, beta, h }).unwrap();
        let p = ModelParams::with_z(n, z).unwrap().convention(Convention::Unshifted);
        let oracle = dense_spectrum(&robin_oracle_matrix(n, alpha, beta, h));
        let ours = dense_spectrum(&build_hamiltonian(&p));
        prop_assert!(spectral_distance(&oracle, &ours) <= 1e-12, "{:?} vs {:?}", oracle, ours);
    }
}

#[test]
fn robin_oracle_matrix_equals_hamiltonian_entrywise() {
    for (n, alpha, beta, h) in [(3, 1.0, 1.0, 1.0), (6, -0.3, 2.0, 0.1), (9, 4.0, -1.5, 0.7)] {
        let z = lattice::robin_to_z(&RobinData { alpha, beta, h }).unwrap();
        let ours = build_hamiltonian(&ModelParams::with_z(n, z).unwrap().convention(Convention::Unshifted));
        let oracle = robin_oracle_matrix(n, alpha, beta, h);
        assert!(common::frob(&(ours - oracle)) < 1e-14);
    }
}

#[test]
fn large_alpha_recovers_dirichlet() {
    for n in 2..=10 {
        let z = lattice::robin_to_z(&RobinData { alpha: 1e14, beta: 0.5, h: 0.3 }).unwrap();
        let p = ModelParams::with_z(n, z).unwrap().convention(Convention::Unshifted);
        let ev = spectrum(&p).unwrap();
        let want: Vec<Complex64> = dirichlet_spectrum(n).into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        assert!(spectral_distance(&ev, &want) <= 1e-10, "n = {n}");
    }
}

#[test]
fn cofactor_oracle_reproduces_printed_polynomials() {
    // u = r = 0: E^3 - E and E^4 - 2E^2
    let zero = Q::from_integer(0.into());
    let p3 = cofactor_det(3, &zero, &zero);
    assert_eq!(p3, epspect::exactpoly::RatPoly::from_i64s(&[0, -1, 0, 1], epspect::exactpoly::VAR_E));
    let p4 = cofactor_det(4, &zero, &zero);
    assert_eq!(p4, epspect::exactpoly::RatPoly::from_i64s(&[0, 0, -2, 0, 1], epspect::exactpoly::VAR_E));
}
