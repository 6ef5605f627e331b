use std::f64::consts::PI;

use cornerlab::oracle::{bessel_k_gauss, gamma_phase_series, kappa_bisection, mu_bisection};
use cornerlab::specfun::{
    bessel_all, bessel_i_real, bessel_k, bessel_k_deriv, gamma_modulus, gamma_modulus_defect, gamma_phase,
    i_asymptotic, k_asymptotic, k_integral, k_series, small_z_limits, solve_kappa, solve_mu,
};
use cornerlab::{CornerData, Error};
use proptest::prelude::*;

const STOKES_RHO0: f64 = 0.866_025_403_784_438_6;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

#[test]
fn stokes_kappa_is_about_1_07() {
    let k = solve_kappa(PI / 3.0, STOKES_RHO0).unwrap();
    assert!((k - 1.07).abs() < 0.005, "{k}");
}

#[test]
fn kappa_matches_bisection_at_right_angle() {
    let newton = solve_kappa(PI / 2.0, 1.0).unwrap();
    let bis = kappa_bisection(PI / 2.0, 1.0).unwrap();
    assert!((newton - bis).abs() < 1e-13, "{newton} vs {bis}");
}

#[test]
fn kappa_vanishes_with_rho0() {
    for &rho0 in &[1e-2, 1e-4, 1e-8] {
        let k = solve_kappa(1.0, rho0).unwrap();
        // κ² α* ≈ ρ0 once κα* is small.
        assert!(rel(k, rho0.sqrt()) < 0.01, "rho0={rho0}: {k}");
    }
}

#[test]
fn stokes_mu1_is_three_halves_tau1() {
    let mu1 = solve_mu(PI / 3.0, STOKES_RHO0, 1).unwrap();
    assert!((mu1 - 2.7).abs() < 0.01, "{mu1}");
    let tau1 = cornerlab::waterwave::tau1_root();
    assert!((mu1 - 1.5 * tau1).abs() < 1e-10);
}

#[test]
fn mu_matches_bisection() {
    let newton = solve_mu(PI / 2.0, 0.5, 2).unwrap();
    let bis = mu_bisection(PI / 2.0, 0.5, 2).unwrap();
    assert!((newton - bis).abs() < 1e-12, "{newton} vs {bis}");
}

#[test]
fn mu_approaches_k_pi_over_alpha_as_rho0_vanishes() {
    let a = 1.2;
    for k in 1..=4 {
        let mu = solve_mu(a, 1e-9, k).unwrap();
        let limit = k as f64 * PI / a;
        assert!(mu < limit && limit - mu < 1e-8, "k={k}: {mu}");
    }
}

#[test]
fn root_finders_reject_bad_input() {
    assert!(matches!(solve_kappa(0.0, 1.0), Err(Error::InvalidParameter(_))));
    assert!(matches!(solve_kappa(1.0, -1.0), Err(Error::InvalidParameter(_))));
    assert!(solve_mu(1.0, 1.0, 0).is_err());
}

#[test]
fn inadmissible_corner_is_refused() {
    // α* close to π puts μ1 below 1.
    assert!(CornerData::new(3.0, 0.5, 0.0, 0.5).is_err());
}

#[test]
fn gamma_phase_small_kappa_and_series() {
    assert!(gamma_phase(1e-8).abs() < 1e-7);
    let k = 1.07;
    assert!((gamma_phase(k) - gamma_phase_series(k)).abs() < 1e-10);
    let m = gamma_modulus(k);
    assert!(rel(m * m, PI * k / (PI * k).sinh()) < 1e-12);
}

#[test]
fn bessel_k_reference_at_one() {
    let (oracle, _) = bessel_k_gauss(1.0, 1.0);
    assert!(rel(bessel_k(1.0, 1.0).unwrap(), oracle) < 1e-12);
}

#[test]
fn bessel_k_large_z_leading_term() {
    let k = 1.07;
    let z = 50.0;
    let lead = (PI / (2.0 * z)).sqrt() * (-z).exp();
    let r = bessel_k(k, z).unwrap() / lead;
    assert!((r - 1.0).abs() < 0.03, "{r}");
}

#[test]
fn small_z_limits_hold() {
    let k = 1.07;
    let z = 1e-6;
    let (ks, is) = small_z_limits(k, z, gamma_phase(k));
    assert!((bessel_k(k, z).unwrap() - ks).abs() < 1e-6);
    assert!((bessel_i_real(k, z).unwrap() - is).abs() < 1e-6);
}

#[test]
fn i_grows_like_exp_over_sqrt() {
    // e^z/(2πz)^{1/2}, not (2πz)^{1/2} e^z.
    let k = 1.07;
    for &z in &[30.0, 60.0] {
        let v = bessel_i_real(k, z).unwrap();
        let lead = z.exp() / (2.0 * PI * z).sqrt();
        assert!((v / lead - 1.0).abs() < 0.05, "z={z}: {}", v / lead);
    }
}

#[test]
fn i_overflow_is_an_error() {
    assert!(matches!(bessel_i_real(1.07, 800.0), Err(Error::Overflow(_))));
    assert!(bessel_k(1.07, 0.0).is_err());
    assert!(bessel_k(1.07, -1.0).is_err());
}

#[test]
fn k_derivative_matches_finite_difference() {
    let (k, z, h) = (1.07, 2.0, 1e-5);
    let fd = (bessel_k(k, z + h).unwrap() - bessel_k(k, z - h).unwrap()) / (2.0 * h);
    assert!((fd - bessel_k_deriv(k, z).unwrap()).abs() < 1e-7);
}

#[test]
fn k_is_decreasing_on_tested_points() {
    for &z in &[0.5, 1.0, 2.0, 5.0, 10.0, 40.0] {
        assert!(bessel_k_deriv(1.07, z).unwrap() < 0.0, "z={z}");
    }
}

#[test]
fn wronskian_at_stated_points() {
    let k = 1.07;
    for &z in &[0.1, 1.0, 10.0] {
        let [kk, kp, i, ip] = bessel_all(k, z).unwrap();
        let w = i * kp - ip * kk;
        assert!(rel(w, -1.0 / z) < 1e-9, "z={z}: {w}");
    }
}

#[test]
fn regimes_agree_on_overlaps() {
    let k = 1.07;
    for &z in &[0.5, 2.0, 5.0] {
        let (a, _) = k_integral(k, z);
        let (b, _) = k_series(k, z);
        assert!(rel(b, a) < 1e-8, "series z={z}");
    }
    for &z in &[30.0, 40.0] {
        let (a, _) = k_integral(k, z);
        let (b, _) = k_asymptotic(k, z);
        assert!(rel(b, a) < 1e-8, "K asymptotic z={z}");
        let (i_s, _) = cornerlab::specfun::i_series(k, z + 5.0);
        let (i_a, _) = i_asymptotic(k, z + 5.0);
        assert!(rel(i_a, i_s.re) < 1e-8, "I asymptotic z={}", z + 5.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn root_residuals_and_branches(a in 0.1f64..(PI - 0.1), rho0 in 0.01f64..10.0) {
        let k = solve_kappa(a, rho0).unwrap();
        prop_assert!((k * (k * a).tanh() - rho0).abs() <= 1e-12 * rho0);
        for j in 1..=4usize {
            let mu = solve_mu(a, rho0, j).unwrap();
            prop_assert!((mu * (mu * a).tan() + rho0).abs() <= 1e-10);
            let x = mu * a;
            let jf = j as f64;
            prop_assert!(x > (jf - 0.5) * PI && x < jf * PI);
        }
    }

    #[test]
    fn gamma_modulus_identity(k in 0.01f64..20.0) {
        prop_assert!(gamma_modulus_defect(k) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wronskian_across_range(k in 0.2f64..3.0, lz in -6.0f64..2.6) {
        let z = 10f64.powf(lz);
        let [kk, kp, i, ip] = bessel_all(k, z).unwrap();
        let w = i * kp - ip * kk;
        prop_assert!(rel(w, -1.0 / z) < 1e-9, "w z = {}", w * z);
    }

    #[test]
    fn k_matches_gauss_oracle(k in 0.2f64..3.0, z in 0.05f64..20.0) {
        let (oracle, doracle) = bessel_k_gauss(k, z);
        let scale = oracle.abs().max((PI / (2.0 * z)).sqrt() * (-z).exp() * 1e-3);
        prop_assert!((bessel_k(k, z).unwrap() - oracle).abs() < 1e-8 * scale);
        let dscale = doracle.abs().max(scale);
        prop_assert!((bessel_k_deriv(k, z).unwrap() - doracle).abs() < 1e-8 * dscale);
    }
}
