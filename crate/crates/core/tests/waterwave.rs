use std::f64::consts::PI;
use std::sync::Arc;

use cornerlab::experiments::{solve_ladder, LadderConfig};
use cornerlab::specfun::solve_mu;
use cornerlab::waterwave::{
    expansion_profile, profile_from_expansion, rho_coefficient, rho_limit_exponent, stokes_a0, stokes_corner_params,
    stokes_rho0, tau1_residual, tau1_root, ExpansionParams, StokesLinearization, STOKES_ALPHA_STAR,
};
use cornerlab::Error;
use proptest::prelude::*;

fn curved_rho(a1: f64, a2: f64) -> cornerlab::solver2d::profile::ScalarFn {
    let prof = profile_from_expansion(a1, a2, 0.5).unwrap();
    rho_coefficient(&StokesLinearization::from_corner_expansion(prof, 0.0, 1.0)).unwrap()
}

#[test]
fn stokes_constants() {
    let c = stokes_corner_params(0.0);
    assert_eq!(c.alpha_star, PI / 3.0);
    assert_eq!(STOKES_ALPHA_STAR, PI / 3.0);
    assert!((c.rho0 - 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((stokes_a0() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!((c.kappa - 1.07).abs() < 0.005);
    assert!(c.kappa_residual() <= 1e-12);
    assert!((1..=c.mu.len()).all(|k| c.mu_residual(k) <= 1e-12));
    assert!(c.mu[0] > 1.0);
}

#[test]
fn tau1_root_and_mu1() {
    let t = tau1_root();
    assert!((1.0..2.0).contains(&t));
    assert!((t - 1.8).abs() < 0.05, "{t}");
    assert!(tau1_residual(t) <= 1e-12);
    let mu1 = solve_mu(PI / 3.0, stokes_rho0(), 1).unwrap();
    assert!((1.5 * t - mu1).abs() <= 1e-10);
}

#[test]
fn rho_tends_to_sqrt3_over_2() {
    let rho = curved_rho(0.3, -0.2);
    let rho0 = stokes_rho0();
    for &x in &[1e-4, 1e-6, 1e-8] {
        // O(x^{1/2}) with a moderate constant.
        assert!((rho(x) - rho0).abs() <= 5.0 * x.sqrt(), "x={x}: {}", rho(x));
    }
    let e = rho_limit_exponent(&rho, rho0, 1e-8, 1e-4);
    assert!((e - 0.5).abs() < 0.05, "exponent {e}");
}

#[test]
fn rho_derivative_is_order_x_to_minus_half() {
    let rho = curved_rho(0.3, -0.2);
    let scaled: Vec<f64> = [1e-7, 1e-6, 1e-5, 1e-4, 1e-3]
        .iter()
        .map(|&x: &f64| {
            let h = 1e-3 * x;
            (rho(x + h) - rho(x - h)) / (2.0 * h) * x.sqrt()
        })
        .collect();
    let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(v.abs()), b.max(v.abs())));
    assert!(hi < 5.0 && lo > 0.0 && hi / lo < 3.0, "{scaled:?}");
}

#[test]
fn flat_irrotational_sanity() {
    let prof = profile_from_expansion(0.0, 0.0, 0.5).unwrap();
    let lin = StokesLinearization {
        omega_prime: Arc::new(|_| 0.0),
        omega_surface: 0.0,
        psi_y: Arc::new(|_| 0.4),
        r_bernoulli: 1.5,
        m: 0.0,
        profile: prof.clone(),
    };
    let rho = rho_coefficient(&lin).unwrap();
    // η′ = η″ = 0 at the trough.
    let x = prof.half_period();
    assert_eq!((prof.eta_p(x), prof.eta_pp(x)), (0.0, 0.0));
    let r = x.hypot(prof.eta0 - prof.eta(x));
    let want = r / (2.0 * (1.5 - prof.eta(x)));
    assert!((rho(x) - want).abs() < 1e-13, "{} vs {want}", rho(x));
    assert!(lin.sigma_is_zero());
}

#[test]
fn stagnation_is_reported() {
    let prof = profile_from_expansion(0.0, 0.0, 0.5).unwrap();
    let mut lin = StokesLinearization::from_corner_expansion(prof, 0.0, 1.0);
    lin.r_bernoulli = 0.5;
    assert!(matches!(rho_coefficient(&lin), Err(Error::Stagnation(_))));
}

#[test]
fn expansion_profile_shape() {
    let p = profile_from_expansion(0.3, -0.2, 0.5).unwrap();
    assert!((p.eta_p(1e-12) + stokes_a0()).abs() < 1e-5);
    assert_eq!(p.alpha, 0.5);
    assert_eq!(p.eta_p(p.half_period()), 0.0);
    let fit = p.slope_fit(1e-8, 1e-4);
    assert!((fit.exponent - 0.5).abs() < 0.02, "{}", fit.exponent);

    let straight = profile_from_expansion(0.0, 0.0, 0.5).unwrap();
    for &x in &[1e-6, 0.1, 0.4, 0.5] {
        assert!((straight.eta_p(x) + stokes_a0()).abs() < 1e-15);
        assert!((straight.eta(x) - (1.0 - stokes_a0() * x)).abs() < 1e-14);
    }
}

#[test]
fn bad_expansions_are_geometry_errors() {
    assert!(matches!(profile_from_expansion(0.0, 0.0, 1.5), Err(Error::Geometry(_))));
    let sinking = ExpansionParams { a1: -3.0, cutoff: 1.4, ..ExpansionParams::default() };
    assert!(matches!(expansion_profile(&sinking), Err(Error::Geometry(_))));
}

#[test]
fn end_to_end_fit_recovers_kappa() {
    let prof = profile_from_expansion(0.3, -0.2, 0.5).unwrap();
    let rho = curved_rho(0.3, -0.2);
    let corner = stokes_corner_params(0.0);
    let run = solve_ladder(&prof, rho, &corner, &LadderConfig::default()).unwrap();
    let fit = run.fit.as_ref().unwrap();
    assert!((fit.kappa_fit / corner.kappa - 1.0).abs() < 0.05, "κ_fit = {}", fit.kappa_fit);
    assert!((fit.kappa_fit - 1.07).abs() < 0.05 * 1.07);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn corner_params_are_deterministic(gamma in 0.0f64..PI) {
        let a = stokes_corner_params(gamma);
        let b = stokes_corner_params(gamma);
        prop_assert_eq!(a.kappa.to_bits(), b.kappa.to_bits());
        prop_assert_eq!(a.gamma_kappa.to_bits(), b.gamma_kappa.to_bits());
        prop_assert_eq!(&a.mu, &b.mu);
        prop_assert_eq!(a.ladder(2).to_bits(), b.ladder(2).to_bits());
    }

    #[test]
    fn expansion_profiles_satisfy_invariants(a1 in -0.3f64..0.3, a2 in -0.2f64..0.2) {
        let p = profile_from_expansion(a1, a2, 0.5).unwrap();
        prop_assert!((p.eta_p(1e-14) + stokes_a0()).abs() < 1e-6);
        let l = p.half_period();
        for i in 1..=50 {
            let x = l * i as f64 / 50.0;
            prop_assert!(p.eta(x) > 0.0 && p.eta(x) < p.eta0);
        }
        prop_assert_eq!(p.eta_p(l), 0.0);
    }
}
