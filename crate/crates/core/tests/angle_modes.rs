use std::f64::consts::PI;

use cornerlab::angle_modes::{symplectic_closed_form, symplectic_form, AngularBasis, SingularPair};
use cornerlab::waterwave::stokes_corner_params;
use cornerlab::CornerData;
use num_complex::Complex64;
use proptest::prelude::*;

fn basis() -> AngularBasis {
    AngularBasis::new(&stokes_corner_params(0.0)).unwrap()
}

#[test]
fn norms_match_closed_forms() {
    let b = basis();
    let c = &b.corner;
    let a = c.alpha_star;
    let v0 = 0.5 * a + (2.0 * c.kappa * a).sinh() / (4.0 * c.kappa);
    assert!((b.norms[0] * b.norms[0] - v0).abs() < 1e-12);
    for k in 1..b.n_modes {
        let m = c.mu[k - 1];
        let vk = 0.5 * a + (2.0 * m * a).sin() / (4.0 * m);
        assert!(vk > 0.0);
        assert!((b.norms[k] * b.norms[k] - vk).abs() < 1e-12, "k={k}");
    }
}

#[test]
fn basis_is_orthonormal() {
    let b = basis();
    for j in 0..6 {
        for k in 0..6 {
            let want = if j == k { 1.0 } else { 0.0 };
            assert!((b.gram(j, k) - want).abs() < 1e-10, "({j},{k})");
        }
    }
}

#[test]
fn phi0_at_wall_and_robin_compatibility() {
    let b = basis();
    let c = &b.corner;
    assert!((b.eval(0, 0.0).unwrap() - 1.0 / b.norms[0]).abs() < 1e-15);
    let a = c.alpha_star;
    let ratio = b.deriv(0, a) / b.eval(0, a).unwrap();
    assert!((ratio - c.rho0).abs() < 1e-12);
    // μ tan(μα*) = −ρ0 gives the same Robin ratio for the trigonometric modes.
    for k in 1..5 {
        let r = b.deriv(k, a) / b.eval(k, a).unwrap();
        assert!((r - c.rho0).abs() < 1e-9, "k={k}: {r}");
    }
}

#[test]
fn eval_rejects_out_of_range_angles() {
    let b = basis();
    assert!(b.eval(0, -0.1).is_err());
    assert!(b.eval(1, b.alpha_star() + 0.1).is_err());
}

#[test]
fn projection_recovers_basis_functions() {
    let b = basis();
    let nodes = b.arc_nodes();
    for k in 0..4 {
        let samples: Vec<f64> = nodes.iter().map(|&t| b.eval_unchecked(k, t)).collect();
        for j in 0..4 {
            let want = if j == k { 1.0 } else { 0.0 };
            assert!((b.project(j, &samples).unwrap() - want).abs() < 1e-10, "({j},{k})");
        }
    }
    let phi0: Vec<f64> = nodes.iter().map(|&t| b.eval_unchecked(0, t)).collect();
    assert!((b.project_h(&phi0).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn projection_of_cos_mu3() {
    let b = basis();
    let mu3 = b.corner.mu[2];
    let samples: Vec<f64> = b.arc_nodes().iter().map(|&t| (mu3 * t).cos()).collect();
    assert!((b.project(3, &samples).unwrap() - b.norms[3]).abs() < 1e-10);
    assert!(b.project(0, &samples).unwrap().abs() < 1e-10);
}

#[test]
fn too_few_samples_is_an_error() {
    let b = basis();
    assert!(b.project_h(&[1.0, 2.0, 3.0]).is_err());
}

#[test]
fn phase_pairs_stated_example() {
    let c = CornerData::new(PI / 3.0, 3f64.sqrt() / 2.0, 0.0, 0.5).unwrap();
    let b = AngularBasis::new(&c).unwrap();
    let (g1, g2) = (0.3, 1.1);
    let w1 = SingularPair::from_phase(c.kappa, g1);
    let w2 = SingularPair::from_phase(c.kappa, g2);
    let q = symplectic_form(&b, &w1, &w2, 0.7).unwrap();
    let want = symplectic_closed_form(&c, g1, g2);
    assert!((q - Complex64::new(want, 0.0)).norm() < 1e-10, "{q} vs {want}");
    let same = symplectic_form(&b, &w1, &w1, 0.7).unwrap();
    assert!(same.norm() < 1e-12);
}

#[test]
fn symplectic_rejects_nonpositive_radius() {
    let b = basis();
    let w = SingularPair::from_phase(b.corner.kappa, 0.0);
    assert!(symplectic_form(&b, &w, &w, 0.0).is_err());
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symplectic_is_independent_of_r(a1 in complex(), b1 in complex(), a2 in complex(), b2 in complex()) {
        let b = basis();
        let (w1, w2) = (SingularPair::new(a1, b1), SingularPair::new(a2, b2));
        let q0 = symplectic_form(&b, &w1, &w2, 1.0).unwrap();
        let scale = 1.0 + q0.norm();
        for &r in &[0.01, 100.0] {
            let q = symplectic_form(&b, &w1, &w2, r).unwrap();
            prop_assert!((q - q0).norm() < 1e-10 * scale);
        }
    }

    #[test]
    fn symplectic_is_skew_hermitian(a1 in complex(), b1 in complex(), a2 in complex(), b2 in complex()) {
        let b = basis();
        let (w1, w2) = (SingularPair::new(a1, b1), SingularPair::new(a2, b2));
        let q12 = symplectic_form(&b, &w1, &w2, 0.3).unwrap();
        let q21 = symplectic_form(&b, &w2, &w1, 0.3).unwrap();
        prop_assert!((q12 + q21.conj()).norm() < 1e-10 * (1.0 + q12.norm()));
    }

    #[test]
    fn equal_moduli_are_lagrangian(m in 0.01f64..3.0, pa in 0.0f64..6.3, pb in 0.0f64..6.3) {
        let b = basis();
        let w = SingularPair::new(Complex64::from_polar(m, pa), Complex64::from_polar(m, pb));
        prop_assert!(symplectic_form(&b, &w, &w, 2.0).unwrap().norm() < 1e-10 * (1.0 + m * m));
    }

    #[test]
    fn phase_pairs_match_closed_form(g1 in 0.0f64..PI, g2 in 0.0f64..PI) {
        let b = basis();
        let k = b.corner.kappa;
        let q = symplectic_form(&b, &SingularPair::from_phase(k, g1), &SingularPair::from_phase(k, g2), 0.5).unwrap();
        let want = symplectic_closed_form(&b.corner, g1, g2);
        prop_assert!((q - Complex64::new(want, 0.0)).norm() < 1e-10);
    }
}
