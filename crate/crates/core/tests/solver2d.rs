use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use cornerlab::angle_modes::AngularBasis;
use cornerlab::cutoff::SmoothCutoff;
use cornerlab::experiments::{
    curved_vs_model_compare, model_ladder, model_profile, solve_ladder, LadderConfig, LadderRun,
};
use cornerlab::model1d::{alpha_zero, interval_eigenvalues_with, IntervalOptions};
use cornerlab::solver2d::dtn::dtn_alpha;
use cornerlab::solver2d::eigen::{count_below, gap_ratios};
use cornerlab::solver2d::fit::fit_taus;
use cornerlab::solver2d::modes::{eigenfunction_profile, h_component};
use cornerlab::solver2d::{
    assemble, build_straightened, generate_mesh, generate_mesh_with, solve_negative_spectrum_with, Assembled,
    BoundaryTag, EigenOptions, EnrichedSpace, MeshParams, ScalarFn, SolveMethod,
};
use cornerlab::specfun::bessel_k;
use cornerlab::waterwave::{
    profile_from_expansion, rho_coefficient, stokes_corner_params, StokesLinearization,
};
use cornerlab::Error;
use proptest::prelude::*;

fn default_run() -> &'static LadderRun {
    static RUN: OnceLock<LadderRun> = OnceLock::new();
    RUN.get_or_init(|| model_ladder(&LadderConfig::default()).unwrap())
}

/// Coarse enriched model problem with a handful of negative eigenvalues.
fn small_system(sigma: f64) -> Assembled {
    let corner = stokes_corner_params(0.0);
    let prof = profile_from_expansion(0.0, 0.0, 0.5).unwrap();
    let mesh = generate_mesh_with(
        &prof,
        corner.alpha_star,
        &MeshParams { h_max: 0.2, grading: 0.7, n_layers: 30, n_theta: 8, polar_radius: None },
    )
    .unwrap();
    let space = EnrichedSpace::new(mesh, corner.clone(), SmoothCutoff::new(1e-3, 0.1)).unwrap();
    let rho0 = corner.rho0;
    assemble(&space, &move |_, _| sigma, &move |_| rho0).unwrap()
}

#[test]
fn default_mesh_invariants() {
    let run = default_run();
    let m = &run.space.mesh;
    m.check_conforming().unwrap();
    assert!(m.min_quality() >= 0.2);
    let p = MeshParams::default();
    let pred = p.h_max * p.grading.powi(p.n_layers as i32);
    assert!((m.r_inner / pred - 1.0).abs() < 0.1);
}

#[test]
fn halving_h_max_doubles_outer_edges() {
    let corner = stokes_corner_params(0.0);
    let prof = profile_from_expansion(0.3, -0.2, 0.5).unwrap();
    let outer = |h: f64| {
        let m = generate_mesh(&prof, corner.alpha_star, h, 0.8, 20).unwrap();
        (m.count_edges(BoundaryTag::Bottom) + m.count_edges(BoundaryTag::Right)) as f64
    };
    let ratio = outer(0.05) / outer(0.1);
    assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
}

#[test]
fn bad_mesh_parameters_are_rejected() {
    let prof = profile_from_expansion(0.0, 0.0, 0.5).unwrap();
    assert!(generate_mesh(&prof, PI / 3.0, 0.05, 1.2, 10).is_err());
    assert!(generate_mesh(&prof, PI / 3.0, -0.05, 0.8, 10).is_err());
}

#[test]
fn assembled_pencil_is_symmetric() {
    let run = default_run();
    assert!(run.system.enriched);
    assert!(run.system.asymmetry() <= 1e-12, "{}", run.system.asymmetry());
    assert!(run.system.quadrature_change.is_finite() && run.system.quadrature_change < 1e-6);
}

#[test]
fn dirichlet_form_is_nonnegative() {
    let corner = stokes_corner_params(0.0);
    let prof = profile_from_expansion(0.3, -0.2, 0.5).unwrap();
    let mesh = generate_mesh(&prof, corner.alpha_star, 0.1, 0.7, 20).unwrap();
    let space = EnrichedSpace::unenriched(mesh, corner).unwrap();
    let sys = assemble(&space, &|_, _| 0.0, &|_| 0.0).unwrap();
    assert_eq!(count_below(&sys, 0.0).unwrap(), 0);
}

#[test]
fn constant_potential_shifts_every_eigenvalue() {
    let c = 3.0;
    let opts = EigenOptions { n_eigs: 3, force: Some(SolveMethod::Dense), ..EigenOptions::default() };
    let base = solve_negative_spectrum_with(&small_system(0.0), &opts).unwrap();
    let shifted = solve_negative_spectrum_with(&small_system(c), &opts).unwrap();
    assert_eq!(base.eigenvalues.len(), 3);
    for (a, b) in base.eigenvalues.iter().zip(&shifted.eigenvalues) {
        assert!((b - a - c).abs() <= 1e-9 * a.abs(), "{a} -> {b}");
    }
}

#[test]
fn dense_and_shift_invert_agree() {
    let sys = small_system(0.0);
    assert!((300..=900).contains(&sys.n()), "n = {}", sys.n());
    let base = EigenOptions { n_eigs: 4, ..EigenOptions::default() };
    let dense = solve_negative_spectrum_with(&sys, &EigenOptions { force: Some(SolveMethod::Dense), ..base }).unwrap();
    let iter = solve_negative_spectrum_with(&sys, &EigenOptions { force: Some(SolveMethod::ShiftInvert), ..base }).unwrap();
    assert_eq!(dense.method, SolveMethod::Dense);
    assert_eq!(iter.method, SolveMethod::ShiftInvert);
    assert_eq!(dense.eigenvalues.len(), iter.eigenvalues.len());
    for (a, b) in dense.eigenvalues.iter().zip(&iter.eigenvalues) {
        assert!((a - b).abs() <= 1e-9 * a.abs(), "{a} vs {b}");
    }
    let (rd, ri) = (dense.max_residual(), iter.max_residual());
    assert!(rd <= 1e-9 && ri <= base.tol, "dense {rd:.2e}, shift-invert {ri:.2e}");
}

#[test]
fn model_ladder_follows_closed_form() {
    let run = default_run();
    let c = &run.corner;
    assert!(run.resolved.len() >= 3);
    let fit = run.fit.as_ref().unwrap();
    assert!((0.97..=1.03).contains(&fit.slope_over_pi()), "{}", fit.slope_over_pi());
    assert!(fit.phase_error.abs() <= 0.1);
    assert!(run.report.max_residual() <= 1e-9);
    // Two most negative resolved modes.
    let n = run.resolved.len();
    let ratio = run.resolved[n - 1] / run.resolved[n - 2];
    assert!((ratio / c.ladder_ratio() - 1.0).abs() < 0.01, "{ratio}");
    let predicted: Vec<f64> = run.resolved_indices().iter().map(|&k| -c.ladder(k).powi(2)).collect();
    let lambdas: Vec<f64> = run.resolved.iter().map(|s| -s * s).collect();
    assert!(gap_ratios(&lambdas, &predicted).iter().all(|&g| g > 0.5));
}

#[test]
fn fit_needs_three_modes() {
    let c = stokes_corner_params(0.0);
    assert!(matches!(fit_taus(&[14.0, 260.0], &c), Err(Error::Fit(_))));
}

#[test]
fn enrichment_phase_moves_the_intercept() {
    let run = default_run();
    let other = model_ladder(&LadderConfig { gamma: 1.3, ..LadderConfig::default() }).unwrap();
    let f0 = run.fit.as_ref().unwrap();
    let f1 = other.fit.as_ref().unwrap();
    assert!(f1.phase_error.abs() <= 0.1, "{}", f1.phase_error);
    // Intercept moves by Δγ modulo π.
    let shift = cornerlab::solver2d::fit::wrap_half_pi(f1.intercept - f0.intercept - 1.3);
    assert!(shift.abs() <= 0.1, "{shift}");
}

#[test]
fn ladder_gains_one_mode_per_ratio_of_range() {
    let run = default_run();
    let q = run.corner.ladder_ratio();
    let mut cfg = LadderConfig::default();
    cfg.cutoff[0] *= q;
    let shorter = model_ladder(&cfg).unwrap();
    assert_eq!(run.resolved.len(), shorter.resolved.len() + 1);
}

#[test]
fn grading_refinement_converges_monotonically() {
    let errors = |grading: f64, n_layers: usize| -> Vec<f64> {
        let mut cfg = LadderConfig::default();
        cfg.mesh.grading = grading;
        cfg.mesh.n_layers = n_layers;
        let run = model_ladder(&cfg).unwrap();
        (1..=3)
            .map(|k| {
                let j = run.resolved_indices().iter().position(|&i| i == k).unwrap();
                (run.resolved[j] / run.corner.ladder(k) - 1.0).abs()
            })
            .collect()
    };
    // Same innermost radius for every grading.
    let coarse = errors(0.8, 63);
    let mid = errors(0.9, 137);
    let fine = errors(0.95, 280);
    for k in 0..3 {
        assert!(coarse[k] > mid[k] && mid[k] > fine[k], "k={}: {} {} {}", k + 1, coarse[k], mid[k], fine[k]);
    }
}

#[test]
fn first_mode_is_bessel_shaped() {
    let run = default_run();
    let basis = AngularBasis::new(&run.corner).unwrap();
    let j = run.mode_position(1).unwrap();
    let s = run.resolved[0];
    let radii: Vec<f64> = (0..40).map(|i| 1e-3 / s * (4e3f64).powf(i as f64 / 39.0)).filter(|&r| r < 0.15).collect();
    let p = eigenfunction_profile(&run.report, j, &run.space, &basis, &radii).unwrap();
    assert!(p.correlation >= 0.99, "{}", p.correlation);
    assert!(eigenfunction_profile(&run.report, j, &run.space, &basis, &[10.0]).is_err());
}

#[test]
fn h_component_of_pure_singular_field() {
    let corner = stokes_corner_params(0.0);
    let basis = AngularBasis::new(&corner).unwrap();
    let tau = 20.0;
    for &r in &[1e-4, 0.01, 0.1] {
        let k = bessel_k(corner.kappa, tau * r).unwrap();
        let u = |rr: f64, t: f64| bessel_k(corner.kappa, tau * rr).unwrap() * basis.eval_unchecked(0, t);
        assert!((h_component(&basis, u, r) - k).abs() <= 1e-12 * (1.0 + k.abs()));
    }
}

#[test]
fn dtn_coefficient_bounded_and_improves_interval_model() {
    let cfg = LadderConfig::default();
    let prof = model_profile(&cfg).unwrap();
    let corner = stokes_corner_params(0.0);
    let rho0 = corner.rho0;
    let delta = 0.1;
    for &tau in &[14.0, 30.0, 60.0, 140.0] {
        let d = dtn_alpha(&prof, &|_| rho0, &corner, tau, delta).unwrap();
        assert!(d.alpha.is_finite() && d.alpha.abs() <= 1.0 / delta, "tau={tau}: {}", d.alpha);
        assert!((d.alpha - d.alpha_sector).abs() <= 0.5, "tau={tau}");
        // ‖W‖ ≤ c e^{−τδ} down to the P1 discretization floor.
        assert!(d.remainder <= (-tau * delta).exp() + 2e-3, "tau={tau}: {}", d.remainder);
    }
    let run = default_run();
    let s1 = run.resolved[0];
    let k = run.corner.ladder_index(s1);
    let a = dtn_alpha(&prof, &|_| rho0, &corner, s1, delta).unwrap().alpha;
    let o = IntervalOptions { min_tau_delta: 0.5, ..IntervalOptions::default() };
    let with_zero = interval_eigenvalues_with(&corner, delta, &alpha_zero, k..=k, o).unwrap().entries[0].tau_hat;
    let with_dtn = interval_eigenvalues_with(&corner, delta, &move |_| a, k..=k, o).unwrap().entries[0].tau_hat;
    assert!((with_dtn - s1).abs() < (with_zero - s1).abs(), "{s1}: dtn {with_dtn}, zero {with_zero}");
}

fn curved_rho(prof: &cornerlab::solver2d::SurfaceProfile) -> ScalarFn {
    let lin = StokesLinearization::from_corner_expansion(prof.clone(), 0.0, 1.0);
    rho_coefficient(&lin).unwrap()
}

#[test]
fn straightened_profile_properties() {
    let prof = profile_from_expansion(0.3, -0.2, 0.5).unwrap();
    let rho = curved_rho(&prof);
    let rho0 = stokes_corner_params(0.0).rho0;
    let l = prof.half_period();
    let mut constants = Vec::new();
    for &delta in &[0.1, 0.05, 0.025, 0.0125] {
        let st = build_straightened(&prof, rho.clone(), rho0, delta).unwrap();
        for i in 1..50 {
            let x = 3.0 * delta * i as f64 / 50.0;
            assert_eq!(st.xi.eta_p(x), -prof.a0);
            assert_eq!(st.chi(x), rho0);
        }
        for i in 0..=20 {
            let x = l - delta + delta * i as f64 / 20.0;
            assert_eq!(st.xi.eta(x), prof.eta(x));
            assert_eq!(st.chi(x), st.rho(x));
        }
        constants.push(st.deviation().profile_constant);
    }
    let (lo, hi) = constants.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &c| (a.min(c), b.max(c)));
    assert!(hi / lo < 3.0, "deviation / δ^α: {constants:?}");
    assert!(matches!(build_straightened(&prof, rho, rho0, 0.5), Err(Error::Geometry(_))));
}

#[test]
fn identical_profiles_agree_to_discretization_level() {
    let prof = profile_from_expansion(0.0, 0.0, 0.5).unwrap();
    let corner = stokes_corner_params(0.0);
    let rho0 = corner.rho0;
    let st = build_straightened(&prof, Arc::new(move |_| rho0), rho0, 0.05).unwrap();
    let cmp = curved_vs_model_compare(&st, &corner, &LadderConfig::default()).unwrap();
    assert!(cmp.rows.len() >= 3);
    // The profiles agree to rounding; what remains is the shift-invert stopping
    // tolerance, far below the ~1e-3 discretization error of the ladder.
    for r in &cmp.rows {
        assert!((r.difference / r.lambda_model).abs() < 1e-6, "k={}: {:e}", r.k, r.difference);
    }
}

#[test]
fn model_difference_shrinks_with_delta() {
    let prof = profile_from_expansion(0.3, -0.2, 0.5).unwrap();
    let rho = curved_rho(&prof);
    let corner = stokes_corner_params(0.0);
    let cfg = LadderConfig { cutoff: [5e-7, 0.1], ..LadderConfig::default() };
    let curved = solve_ladder(&prof, rho.clone(), &corner, &cfg).unwrap();
    let s_curved = curved.resolved[0];
    // Below 3δ ≈ 1/s_1 the straightened model approaches the curved domain.
    let diffs: Vec<f64> = [0.01, 0.005, 0.0025]
        .iter()
        .map(|&delta| {
            let st = build_straightened(&prof, rho.clone(), corner.rho0, delta).unwrap();
            let model = solve_ladder(&st.xi, st.chi_fn(), &corner, &cfg).unwrap();
            (s_curved * s_curved - model.resolved[0].powi(2)).abs()
        })
        .collect();
    let alpha = prof.alpha;
    for w in diffs.windows(2) {
        assert!(w[1] / w[0] <= 0.5f64.powf(alpha), "{diffs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_meshes_are_valid(
        h_max in 0.04f64..0.15,
        grading in 0.6f64..0.95,
        n_layers in 5usize..60,
        a1 in -0.3f64..0.3,
        a2 in -0.2f64..0.2,
    ) {
        let prof = profile_from_expansion(a1, a2, 0.5).unwrap();
        let m = generate_mesh(&prof, PI / 3.0, h_max, grading, n_layers).unwrap();
        prop_assert!(m.check_conforming().is_ok());
        prop_assert!(m.min_quality() >= 0.2);
        prop_assert!(m.min_signed_area() > 0.0);
        let pred = h_max * grading.powi(n_layers as i32);
        prop_assert!((m.r_inner / pred - 1.0).abs() < 0.1);
        // Constant ring ratio through the graded layers.
        let radii: Vec<f64> = m.ring_radii().into_iter().filter(|&r| r >= m.r_inner && r <= h_max * grading).collect();
        prop_assert!(radii.len() >= 4);
        for w in radii.windows(2) {
            prop_assert!((w[0] / w[1] / m.grading - 1.0).abs() < 0.05, "{} vs {}", w[0] / w[1], m.grading);
        }
    }
}
