use std::f64::consts::PI;

use cornerlab::cutoff::smooth_step;
use cornerlab::model1d::{
    alpha_zero, classify_normalization, extension_constant, halfline_fd_oracle, halfline_ladder,
    interval_eigenfunction, interval_eigenvalues, interval_eigenvalues_with, interval_fd_oracle,
    interval_log_q_excess, interval_psi, interval_q, localization_fraction, moment_scalings, robin_residual,
    IntervalOptions, Moment, Normalization,
};
use cornerlab::waterwave::stokes_corner_params;
use cornerlab::Error;
use proptest::prelude::*;

#[test]
fn halfline_fd_picks_plain_normalization() {
    let c = stokes_corner_params(0.0);
    let (r_min, r_max) = (1e-8, 50.0);
    let fd = halfline_fd_oracle(&c, r_min, r_max, 10_000).unwrap();
    // Modes far from both grid ends.
    let inner: Vec<f64> = fd.taus().into_iter().filter(|t| t * r_max > 20.0 && t * r_min < 1e-3).collect();
    assert!(inner.len() >= 3, "{inner:?}");
    let (norm, plain, two) = classify_normalization(&c, &inner);
    assert_eq!(norm, Normalization::Plain);
    assert!(plain < 1e-3 && two > 0.1, "{plain} {two}");
    let first = inner[0];
    assert!((first / c.ladder(c.ladder_index(first)) - 1.0).abs() < 1e-3);
    for w in inner.windows(2) {
        assert!((w[1] / w[0] / c.ladder_ratio() - 1.0).abs() < 1e-3);
    }
    assert!(fd.warnings.is_empty(), "{:?}", fd.warnings);
}

#[test]
fn halfline_fd_modes_are_simple_and_bessel_shaped() {
    let c = stokes_corner_params(0.4);
    let fd = halfline_fd_oracle(&c, 1e-8, 50.0, 10_000).unwrap();
    let taus = fd.taus();
    let log_gap = c.ladder_ratio().ln();
    for w in taus.windows(2) {
        assert!((w[1] / w[0]).ln() > 0.5 * log_gap);
    }
    for &l in fd.lambdas.iter().take(3) {
        assert!(fd.correlation_with_k(&c, l).unwrap() > 0.999);
    }
}

#[test]
fn halfline_fd_rejects_bad_grid() {
    let c = stokes_corner_params(0.0);
    assert!(halfline_fd_oracle(&c, 1.0, 0.5, 100).is_err());
    assert!(halfline_fd_oracle(&c, 1e-6, 10.0, 5).is_err());
}

#[test]
fn ladder_ratio_and_index_shift() {
    let c = stokes_corner_params(0.0);
    let l = halfline_ladder(&c, -2..=5);
    assert!((l.ratio - (PI / c.kappa).exp()).abs() < 1e-12);
    assert!((l.ratio - (PI / 1.07).exp()).abs() / l.ratio < 0.01);
    for w in l.tau.windows(2) {
        assert!((w[1] / w[0] / l.ratio - 1.0).abs() < 1e-12);
    }
    for (p, t) in l.tau.iter().zip(&l.tau_factor_two) {
        assert!((t / p - 2.0).abs() < 1e-15);
    }
    assert_eq!(l.candidates(Normalization::FactorTwo), l.tau_factor_two);
}

#[test]
fn empty_k_range_gives_empty_ladder() {
    let c = stokes_corner_params(0.0);
    #[allow(clippy::reversed_empty_ranges)]
    let l = halfline_ladder(&c, 1..=0);
    assert!(l.tau.is_empty());
}

#[test]
fn q_matches_exponential_scale() {
    let c = stokes_corner_params(0.0);
    let delta = 0.5;
    // α ≡ 0: Q ≈ −π e^{−2τδ} / (4τδ), so one power of τ only.
    for &z in &[20.0, 40.0, 80.0] {
        let tau = z / delta;
        let q = interval_q(&c, tau, delta, &alpha_zero).unwrap();
        let lead = PI / (4.0 * z) * (-2.0 * z).exp();
        assert!((q / -lead - 1.0).abs() < 3.0 / z, "z={z}: {}", q / -lead);
    }
    // α(0) = −1/(2δ) removes the leading term and leaves τ⁻² e^{−2τδ}.
    let matched = |_s: f64| -0.5 / delta;
    let scaled: Vec<f64> = [20.0, 40.0, 80.0]
        .iter()
        .map(|&z| {
            let tau = z / delta;
            let q = interval_q(&c, tau, delta, &matched).unwrap();
            q.abs() * tau * tau * (2.0 * z).exp()
        })
        .collect();
    assert!(scaled.iter().all(|v| v.is_finite() && *v < 10.0), "{scaled:?}");
    assert!(scaled[2] / scaled[0] > 0.5 && scaled[2] / scaled[0] < 2.0, "{scaled:?}");
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..=40 {
        let z = 10.0 + 20.0 * i as f64 / 40.0;
        let e = interval_log_q_excess(&c, z / delta, delta, &alpha_zero).unwrap();
        lo = lo.min(e);
        hi = hi.max(e);
    }
    assert!(hi.is_finite() && hi - lo < 5.0, "excess range [{lo}, {hi}]");
}

#[test]
fn psi_tracks_q() {
    let c = stokes_corner_params(0.7);
    for &(tau, d) in &[(30.0, 0.5), (60.0, 0.25), (15.0, 1.0)] {
        let q = interval_q(&c, tau, d, &alpha_zero).unwrap();
        let psi = interval_psi(&c, tau, d, &alpha_zero).unwrap();
        assert_eq!(psi.signum(), q.signum());
        assert!(psi.abs() <= q.abs() * (PI * c.kappa).sinh() / PI * (1.0 + 1e-12));
    }
}

#[test]
fn interval_spectrum_deviation_and_robin() {
    let c = stokes_corner_params(0.0);
    let s = interval_eigenvalues(&c, 0.6, &alpha_zero, 1..=3).unwrap();
    for e in &s.entries {
        assert!(e.residual < 1e-12, "k={} residual {}", e.k, e.residual);
        let bound = 10.0 * (-2.0 * e.tau_hat * s.delta).exp();
        assert!(e.relative_deviation() <= bound, "k={}", e.k);
        assert!(robin_residual(&s, e.k, &alpha_zero).unwrap() < 1e-12);
    }
    for w in s.entries.windows(2) {
        assert!((w[1].tau_hat / w[0].tau_hat / c.ladder_ratio() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn interval_requires_large_tau_delta() {
    let c = stokes_corner_params(0.0);
    assert!(matches!(interval_eigenvalues(&c, 0.01, &alpha_zero, 0..=1), Err(Error::InvalidParameter(_))));
    assert!(interval_eigenvalues(&c, -1.0, &alpha_zero, 1..=1).is_err());
}

#[test]
fn interval_fd_matches_secular_roots() {
    let c = stokes_corner_params(0.0);
    let alpha = |s: f64| 0.3 * s;
    let s = interval_eigenvalues(&c, 0.6, &alpha, 1..=3).unwrap();
    let fd = interval_fd_oracle(&c, 0.6, &alpha, &[1, 2, 3], 2e-3, 8.0).unwrap();
    for (e, t) in s.entries.iter().zip(&fd) {
        assert!((t / e.tau_hat - 1.0).abs() < 1e-3, "k={}: {t} vs {}", e.k, e.tau_hat);
    }
}

#[test]
fn interval_fd_converges_at_second_order() {
    let c = stokes_corner_params(0.0);
    let delta = 0.6;
    let exact = interval_eigenvalues(&c, delta, &alpha_zero, 1..=1).unwrap().entries[0].tau_hat;
    let err = |dt: f64| {
        let t = interval_fd_oracle(&c, delta, &alpha_zero, &[1], dt, 0.02 / dt).unwrap()[0];
        (t / exact - 1.0).abs()
    };
    let (e1, e2, e3) = (err(1.6e-2), err(8e-3), err(4e-3));
    let p1 = (e1 / e2).log2();
    let p2 = (e2 / e3).log2();
    assert!(p1 > 1.7 && p2 > 1.7, "orders {p1} {p2} (errors {e1} {e2} {e3})");
}

#[test]
fn eigenfunction_near_origin_follows_phase() {
    let c = stokes_corner_params(0.5);
    let s = interval_eigenvalues(&c, 0.6, &alpha_zero, 1..=2).unwrap();
    for e in &s.entries {
        let radii: Vec<f64> = (0..30).map(|i| 1e-9 / e.tau_hat * 1.37f64.powi(i)).collect();
        let phi = interval_eigenfunction(&s, e.k, &radii).unwrap();
        let model: Vec<f64> = radii.iter().map(|&r| (c.kappa * (0.5 * r).ln() + c.gamma).sin()).collect();
        let corr = cornerlab::solver2d::modes::correlation(&phi, &model).abs();
        assert!(corr > 1.0 - 1e-8, "k={}: {corr}", e.k);
    }
}

#[test]
fn eigenfunction_is_small_at_delta() {
    let c = stokes_corner_params(0.0);
    // τδ stays below the double range of e^{τδ}.
    let s = interval_eigenvalues(&c, 0.1, &alpha_zero, 2..=3).unwrap();
    for e in &s.entries {
        let phi = interval_eigenfunction(&s, e.k, &[s.delta]).unwrap()[0];
        let scaled = phi.abs() * e.tau_hat.sqrt() * (e.tau_hat * s.delta).exp();
        assert!(scaled < 5.0, "k={}: {scaled}", e.k);
    }
    assert!(interval_eigenfunction(&s, 2, &[0.2]).is_err());
}

#[test]
fn localization_inside_ten_over_tau() {
    let c = stokes_corner_params(0.0);
    let s = interval_eigenvalues(&c, 1.0, &alpha_zero, 1..=3).unwrap();
    for e in &s.entries {
        assert!(localization_fraction(&s, e.k, 10.0).unwrap() > 0.99);
    }
}

#[test]
fn value_moment_converges_to_bessel_integral() {
    let c = stokes_corner_params(0.0);
    let s = interval_eigenvalues(&c, 1.0, &alpha_zero, 1..=4).unwrap();
    let rows = moment_scalings(&s, Moment::Value, 0.0).unwrap();
    // ∫₀^∞ K_{iκ}(s)² s ds = πκ / (2 sinh πκ).
    let limit = PI * c.kappa / (2.0 * (PI * c.kappa).sinh());
    let last = rows.last().unwrap().normalized;
    assert!((last / limit - 1.0).abs() < 1e-6, "{last} vs {limit}");
}

#[test]
fn moments_are_uniformly_bounded() {
    let c = stokes_corner_params(0.0);
    let s = interval_eigenvalues(&c, 1.0, &alpha_zero, 1..=5).unwrap();
    for (m, beta) in [(Moment::Value, 0.5), (Moment::FirstDerivative, 0.5), (Moment::SecondDerivative, 1.5)] {
        let rows = moment_scalings(&s, m, beta).unwrap();
        let lo = rows.iter().map(|r| r.normalized).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
        assert!(lo > 0.0 && hi / lo < 1.01, "{m:?}: [{lo}, {hi}]");
    }
    assert!(moment_scalings(&s, Moment::Value, -0.5).is_ok());
    assert!(matches!(moment_scalings(&s, Moment::SecondDerivative, -0.5), Err(Error::Domain(_))));
}

/// h = ζ(r) sin(κ ln(r/2) + γ), ζ = 1 on (0, r0) and 0 beyond r0 + w, has C = 1.
fn manufactured_rhs(kappa: f64, gamma: f64, tau: f64, r0: f64, w: f64) -> impl Fn(f64) -> f64 {
    move |r: f64| {
        let (s, ds, d2s) = smooth_step((r - r0) / w);
        let (z, dz, d2z) = (1.0 - s, -ds / w, -d2s / (w * w));
        let (sn, cs) = (kappa * (0.5 * r).ln() + gamma).sin_cos();
        let du = kappa * cs / r;
        // M u = 0 for u = sin(κ ln(r/2) + γ).
        tau * tau * z * sn - d2z * sn - 2.0 * dz * du - dz * sn / r
    }
}

#[test]
fn extension_constant_recovers_manufactured_coefficient() {
    for &gamma in &[0.0, 0.9] {
        let c = stokes_corner_params(gamma);
        let tau_k = c.ladder(1);
        for &tau in &[0.5 * tau_k, 1.7 * tau_k] {
            let f = manufactured_rhs(c.kappa, c.gamma, tau, 0.05, 0.1);
            let got = extension_constant(&f, &c, tau, tau_k).unwrap();
            assert!((got.abs() - 1.0).abs() < 1e-8, "gamma={gamma} tau={tau}: {got}");
        }
    }
}

#[test]
fn extension_constant_zero_rhs_and_errors() {
    let c = stokes_corner_params(0.0);
    let tau_k = c.ladder(1);
    assert_eq!(extension_constant(&|_| 0.0, &c, 1.3 * tau_k, tau_k).unwrap(), 0.0);
    assert!(matches!(extension_constant(&|_| 1.0, &c, tau_k, tau_k), Err(Error::Pole(_))));
    assert!(matches!(extension_constant(&|_| 1.0, &c, 100.0 * tau_k, tau_k), Err(Error::Domain(_))));
}

#[test]
fn extension_constant_has_a_simple_pole() {
    let c = stokes_corner_params(0.0);
    let tau_k = c.ladder(1);
    let f = |r: f64| (-r * r).exp();
    let scaled: Vec<f64> = [1e-2, 1e-3, 1e-4, -1e-4]
        .iter()
        .map(|&e| {
            let tau = tau_k * (1.0 + e);
            extension_constant(&f, &c, tau, tau_k).unwrap() * (tau - tau_k)
        })
        .collect();
    let last = scaled[3];
    assert!((scaled[2] / last - 1.0).abs() < 1e-3, "{scaled:?}");
    assert!((scaled[1] / last - 1.0).abs() < 1e-2, "{scaled:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_shift_covariance(g1 in 0.0f64..3.1, g2 in 0.0f64..3.1) {
        let c1 = stokes_corner_params(g1);
        let c2 = stokes_corner_params(g2);
        let factor = ((c2.gamma - c1.gamma) / c1.kappa).exp();
        let l1 = halfline_ladder(&c1, 0..=4);
        let l2 = halfline_ladder(&c2, 0..=4);
        for (a, b) in l1.tau.iter().zip(&l2.tau) {
            prop_assert!((b / (a * factor) - 1.0).abs() < 1e-12);
        }
        let o = IntervalOptions { min_tau_delta: 0.0, ..IntervalOptions::default() };
        let s1 = interval_eigenvalues_with(&c1, 1.0, &alpha_zero, 2..=3, o).unwrap();
        let s2 = interval_eigenvalues_with(&c2, 1.0, &alpha_zero, 2..=3, o).unwrap();
        for (a, b) in s1.entries.iter().zip(&s2.entries) {
            prop_assert!((b.tau_closed / (a.tau_closed * factor) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_by_pi_moves_one_index(g in 0.0f64..3.1, k in -3i64..6) {
        let c = stokes_corner_params(0.0);
        let a = cornerlab::CornerData { gamma: g, ..c.clone() };
        let b = cornerlab::CornerData { gamma: g + PI, ..c };
        prop_assert!((b.ladder(k) / a.ladder(k + 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interval_roots_satisfy_secular_relation(g in 0.0f64..3.1, delta in 0.3f64..2.0) {
        let c = stokes_corner_params(g);
        let k0 = (1..8).find(|&k| c.ladder(k) * delta >= 8.0).unwrap();
        let s = interval_eigenvalues(&c, delta, &alpha_zero, k0..=k0 + 1).unwrap();
        for e in &s.entries {
            prop_assert!(e.residual < 1e-12);
            prop_assert!(e.relative_deviation() <= 10.0 * (-2.0 * e.tau_hat * delta).exp());
            prop_assert!(robin_residual(&s, e.k, &alpha_zero).unwrap() < 1e-12);
        }
    }
}
