//! One `run` per mode: result rows, threshold checks and plot series.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::angle_modes::AngularBasis;
use crate::error::{Error, Result};
use crate::experiments::{curved_vs_model_compare, solve_ladder, LadderRun};
use crate::model1d::{
    classify_normalization, halfline_fd_oracle, halfline_ladder, interval_eigenvalues_with, interval_fd_oracle,
    robin_residual, IntervalOptions,
};
use crate::oracle::{bessel_k_gauss, gamma_phase_series, kappa_bisection, mu_bisection, tau1_bisection};
use crate::solver2d::eigen::gap_ratios;
use crate::solver2d::modes::eigenfunction_profile;
use crate::solver2d::profile::{linear_fit, straight_corner_profile};
use crate::solver2d::{build_straightened, ScalarFn};
use crate::specfun::{bessel_k, bessel_k_deriv, bessel_scaled, gamma_phase};
use crate::verify::{Bound, Check};
use crate::waterwave::{expansion_profile, stokes_a0, rho_coefficient, rho_limit_exponent, tau1_residual, tau1_root, StokesLinearization};

use super::config::{ExperimentConfig, Mode};

/// CSV header shared by every mode.
pub const CSV_HEADER: [&str; 6] = ["mode", "label", "index", "predicted", "computed", "residual"];

/// One CSV line: a root or eigenvalue with its prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub mode: String,
    pub label: String,
    pub index: i64,
    pub predicted: f64,
    pub computed: f64,
    pub residual: f64,
}

/// Two-column data for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    pub rows: Vec<ResultRow>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub plots: Vec<PlotSeries>,
}

impl RunOutcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn row(&mut self, mode: Mode, label: &str, index: i64, predicted: f64, computed: f64, residual: f64) {
        self.rows.push(ResultRow { mode: mode.name().into(), label: label.into(), index, predicted, computed, residual });
    }
}

pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let mode = cfg.mode.ok_or_else(|| Error::InvalidParameter("no mode given".into()))?;
    match mode {
        Mode::Roots => roots(cfg),
        Mode::BesselTable => bessel_table(cfg),
        Mode::Halfline => halfline(cfg),
        Mode::Interval => interval(cfg),
        Mode::Solve2d => solve2d(cfg),
        Mode::Compare => compare(cfg),
        Mode::Waterwave => waterwave(cfg),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn roots(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let m = Mode::Roots;
    let c = cfg.corner_data()?;
    let tol = cfg.tolerances.roots;
    let mut out = RunOutcome::default();
    let kb = kappa_bisection(c.alpha_star, c.rho0)?;
    out.row(m, "kappa", 0, kb, c.kappa, c.kappa_residual());
    out.checks.push(Check::new("kappa vs bisection", rel(c.kappa, kb), Bound::AtMost(tol)));
    let gs = gamma_phase_series(c.kappa);
    out.row(m, "gamma_kappa", 0, gs, c.gamma_kappa, (c.gamma_kappa - gs).abs());
    out.checks.push(Check::new("gamma_kappa vs product series", (c.gamma_kappa - gs).abs(), Bound::AtMost(1e-10)));
    for k in 1..=4 {
        let mb = mu_bisection(c.alpha_star, c.rho0, k)?;
        out.row(m, "mu", k as i64, mb, c.mu[k - 1], c.mu_residual(k));
        out.checks.push(Check::new(format!("mu_{k} vs bisection"), rel(c.mu[k - 1], mb), Bound::AtMost(tol)));
    }
    out.checks.push(Check::new("mu_1 > 1 (admissible)", c.mu[0], Bound::AtLeast(1.0)));
    if cfg.is_stokes_corner() {
        let t = tau1_root();
        let tb = tau1_bisection()?;
        out.row(m, "tau1", 1, tb, t, tau1_residual(t));
        out.checks.push(Check::new("tau1 vs bisection", rel(t, tb), Bound::AtMost(tol)));
    }
    out.row(m, "ladder_ratio", 0, (PI / c.kappa).exp(), c.ladder_ratio(), 0.0);
    if cfg.output.plot_data {
        let pts = (0..=200)
            .map(|i| {
                let k = 3.0 * i as f64 / 200.0;
                (k, k * (k * c.alpha_star).tanh() - c.rho0)
            })
            .collect();
        out.plots.push(PlotSeries { name: "kappa_equation".into(), points: pts });
    }
    Ok(out)
}

fn bessel_table(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let m = Mode::BesselTable;
    let kap = match cfg.bessel.kappa {
        Some(k) => k,
        None => cfg.corner_data()?.kappa,
    };
    let mut out = RunOutcome::default();
    let (mut worst, mut wr) = (0.0f64, 0.0f64);
    let mut k_pts = Vec::new();
    let mut i_pts = Vec::new();
    for (j, &z) in cfg.bessel.z.iter().enumerate() {
        let j = j as i64;
        let k = bessel_k(kap, z)?;
        let kp = bessel_k_deriv(kap, z)?;
        let (ko, kpo) = bessel_k_gauss(kap, z);
        let scale = (ko.abs() + kpo.abs()).max(f64::MIN_POSITIVE);
        out.row(m, "K", j, ko, k, (k - ko).abs() / scale);
        out.row(m, "dK", j, kpo, kp, (kp - kpo).abs() / scale);
        worst = worst.max((k - ko).abs() / scale).max((kp - kpo).abs() / scale);
        let [ks, kps, is, ips] = bessel_scaled(kap, z)?;
        let w = (is * kps - ips * ks) * z;
        out.row(m, "wronskian_z", j, -1.0, w, (w + 1.0).abs());
        wr = wr.max((w + 1.0).abs());
        k_pts.push((z, k));
        i_pts.push((z, is * z.exp()));
    }
    out.notes.push(format!("order kappa = {kap}; z values listed by index in the CSV"));
    out.checks.push(Check::new("K, K' vs quadrature oracle", worst, Bound::AtMost(cfg.tolerances.bessel)));
    out.checks.push(Check::new("Wronskian defect", wr, Bound::AtMost(cfg.tolerances.wronskian)));
    if cfg.output.plot_data {
        out.plots.push(PlotSeries { name: "bessel_k".into(), points: k_pts });
        out.plots.push(PlotSeries { name: "bessel_i".into(), points: i_pts });
    }
    Ok(out)
}

fn halfline(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let m = Mode::Halfline;
    let c = cfg.corner_data()?;
    let range = cfg.k_range_or(1..=3);
    let mut out = RunOutcome::default();
    if range.is_empty() {
        return Ok(out);
    }
    let ladder = halfline_ladder(&c, range.clone());
    let h = &cfg.halfline;
    let fd = halfline_fd_oracle(&c, h.r_min, h.r_max, h.n_points)?;
    let taus = fd.taus();
    let (norm, dp, d2) = classify_normalization(&c, &taus);
    out.notes.push(format!("FD spectrum follows the {norm:?} normalization ({dp:.2e} vs {d2:.2e})"));
    out.notes.extend(fd.warnings.iter().cloned());
    let mut worst = 0.0f64;
    let mut found = Vec::new();
    for (k, &pred) in range.zip(&ladder.tau) {
        let near = taus
            .iter()
            .copied()
            .min_by(|a, b| (a / pred).ln().abs().total_cmp(&(b / pred).ln().abs()))
            .ok_or_else(|| Error::Resolution("FD oracle found no negative eigenvalue".into()))?;
        out.row(m, "tau", k, pred, near, rel(near, pred));
        out.row(m, "tau_factor_two", k, 2.0 * pred, near, rel(near, 2.0 * pred));
        worst = worst.max(rel(near, pred));
        found.push((k as f64, near));
    }
    out.checks.push(Check::new("FD vs closed-form ladder", worst, Bound::AtMost(cfg.tolerances.halfline)));
    let ratio = found.windows(2).map(|w| (w[1].1 / w[0].1 / ladder.ratio - 1.0).abs()).fold(0.0, f64::max);
    out.checks.push(Check::new("consecutive ratio vs e^(pi/kappa)", ratio, Bound::AtMost(cfg.tolerances.halfline)));
    if cfg.output.plot_data {
        out.plots.push(PlotSeries { name: "ladder".into(), points: found.iter().map(|&(k, t)| (k, t.ln())).collect() });
    }
    Ok(out)
}

fn interval(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let m = Mode::Interval;
    let c = cfg.corner_data()?;
    let range = cfg.k_range_or(1..=3);
    let mut out = RunOutcome::default();
    if range.is_empty() {
        return Ok(out);
    }
    let a = cfg.interval.alpha;
    let alpha = move |_: f64| a;
    let opts = IntervalOptions { min_tau_delta: cfg.interval.min_tau_delta, ..IntervalOptions::default() };
    let sp = interval_eigenvalues_with(&c, cfg.delta, &alpha, range.clone(), opts)?;
    let ks: Vec<i64> = range.collect();
    let fd = interval_fd_oracle(&c, cfg.delta, &alpha, &ks, cfg.interval.fd_step, cfg.interval.fd_layer_points)?;
    let t = &cfg.tolerances;
    let (mut dev, mut fdr, mut rob) = (0.0f64, 0.0f64, 0.0f64);
    for (e, &f) in sp.entries.iter().zip(&fd) {
        let rr = robin_residual(&sp, e.k, &alpha)?;
        out.row(m, "tau_hat", e.k, e.tau_closed, e.tau_hat, e.relative_deviation());
        out.row(m, "tau_fd", e.k, e.tau_hat, f, rel(f, e.tau_hat));
        out.row(m, "robin", e.k, 0.0, rr, rr);
        let bound = t.interval_remainder * (-2.0 * e.tau_hat * cfg.delta).exp();
        let d = e.relative_deviation();
        dev = dev.max(if d == 0.0 { 0.0 } else { d / bound });
        fdr = fdr.max(rel(f, e.tau_hat));
        rob = rob.max(rr);
    }
    out.checks.push(Check::new("deviation / (c e^(-2 tau delta))", dev, Bound::AtMost(1.0)));
    out.checks.push(Check::new("secular root vs FD", fdr, Bound::AtMost(t.interval_fd)));
    out.checks.push(Check::new("Robin residual", rob, Bound::AtMost(t.robin)));
    if cfg.output.plot_data {
        let pts = sp.entries.iter().map(|e| (e.k as f64, e.psi)).collect();
        out.plots.push(PlotSeries { name: "psi".into(), points: pts });
    }
    Ok(out)
}

fn ladder_rows(out: &mut RunOutcome, m: Mode, run: &LadderRun, cfg: &ExperimentConfig) {
    for (k, &s) in run.resolved_indices().into_iter().zip(&run.resolved) {
        let pos = run.mode_position(k).ok();
        let res = pos.map_or(f64::NAN, |j| run.report.residuals[j]);
        out.row(m, "s", k, run.corner.ladder(k), s, res);
    }
    let t = &cfg.tolerances;
    out.checks.push(Check::new("resolved negative eigenvalues", run.resolved.len() as f64, Bound::AtLeast(t.min_modes as f64)));
    match &run.fit {
        Some(f) => {
            let target = (run.corner.gamma + run.corner.gamma_kappa).rem_euclid(PI);
            out.row(m, "slope_over_pi", 0, 1.0, f.slope_over_pi(), (f.slope_over_pi() - 1.0).abs());
            out.row(m, "intercept", 0, target, f.intercept, f.phase_error.abs());
            out.row(m, "kappa_fit", 0, run.corner.kappa, f.kappa_fit, rel(f.kappa_fit, run.corner.kappa));
            out.checks.push(Check::new("slope / pi", f.slope_over_pi(), Bound::Within(1.0 - t.slope, 1.0 + t.slope)));
            out.checks.push(Check::new("phase error [rad]", f.phase_error.abs(), Bound::AtMost(t.phase)));
        }
        None => out.checks.push(Check::new("ladder fit available", 0.0, Bound::AtLeast(1.0))),
    }
    let lam: Vec<f64> = run.resolved.iter().map(|s| -s * s).collect();
    let pred: Vec<f64> = run.resolved_indices().iter().map(|&k| -run.corner.ladder(k).powi(2)).collect();
    let gap = gap_ratios(&lam, &pred).into_iter().fold(f64::INFINITY, f64::min);
    if gap.is_finite() {
        out.checks.push(Check::new("min gap / predicted gap", gap, Bound::AtLeast(0.5)));
    }
}

fn solve2d(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let m = Mode::Solve2d;
    let corner = cfg.corner_data()?;
    // 1/tan(π/3) and 1/√3 differ in the last bit; keep the exact Stokes slope.
    let a0 = if cfg.is_stokes_corner() { stokes_a0() } else { 1.0 / corner.alpha_star.tan() };
    let profile = straight_corner_profile(cfg.profile.lambda, cfg.profile.eta0, a0, cfg.solver.straight_until)?;
    let rho0 = corner.rho0;
    let rho: ScalarFn = Arc::new(move |_| rho0);
    let run = solve_ladder(&profile, rho, &corner, &cfg.ladder_config())?;
    let mut out = RunOutcome::default();
    out.notes.push(format!(
        "{} unknowns, method {:?}, {} negative eigenvalues computed",
        run.system.n(),
        run.report.method,
        run.report.eigenvalues.len()
    ));
    ladder_rows(&mut out, m, &run, cfg);
    if cfg.output.plot_data {
        let pts = run
            .resolved_indices()
            .into_iter()
            .zip(&run.resolved)
            .map(|(k, s)| (k as f64, corner.kappa * s.ln()))
            .collect();
        out.plots.push(PlotSeries { name: "ladder".into(), points: pts });
        if let Some(&k0) = run.resolved_indices().first() {
            let basis = AngularBasis::new(&corner)?;
            let j = run.mode_position(k0)?;
            let s = run.resolved[0];
            let r_c = run.space.mesh.ring_radii().last().copied().unwrap_or(0.1);
            let r_hi = (0.5 * r_c).min(8.0 / s);
            let radii: Vec<f64> = (0..60).map(|i| 1e-6 * (r_hi / 1e-6).powf(i as f64 / 59.0)).collect();
            let p = eigenfunction_profile(&run.report, j, &run.space, &basis, &radii)?;
            out.notes.push(format!("h correlation of mode {k0} with K_ik(s r): {}", p.correlation));
            // Scale K to h by least squares for overlay.
            let c = p.h.iter().zip(&p.bessel).map(|(a, b)| a * b).sum::<f64>() / p.bessel.iter().map(|b| b * b).sum::<f64>();
            out.plots.push(PlotSeries { name: "h_profile".into(), points: radii.iter().copied().zip(p.h.iter().copied()).collect() });
            out.plots.push(PlotSeries { name: "k_profile".into(), points: radii.iter().copied().zip(p.bessel.iter().map(|b| c * b)).collect() });
        }
    }
    Ok(out)
}

fn wave_rho(cfg: &ExperimentConfig) -> Result<(crate::solver2d::SurfaceProfile, ScalarFn)> {
    let prof = expansion_profile(&cfg.profile)?;
    let lin = StokesLinearization::from_corner_expansion(prof.clone(), cfg.waterwave.omega, cfg.waterwave.m);
    let rho = rho_coefficient(&lin)?;
    Ok((prof, rho))
}

fn compare(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let m = Mode::Compare;
    let corner = cfg.corner_data()?;
    let (prof, rho) = wave_rho(cfg)?;
    let st = build_straightened(&prof, rho, corner.rho0, cfg.delta)?;
    let cmp = curved_vs_model_compare(&st, &corner, &cfg.ladder_config())?;
    let mut out = RunOutcome::default();
    for r in &cmp.rows {
        out.row(m, "lambda", r.k, r.lambda_model, r.lambda_curved, r.normalized);
    }
    let first = cmp.rows[0].normalized;
    out.checks.push(Check::new("modes compared", cmp.rows.len() as f64, Bound::AtLeast(cfg.tolerances.min_modes as f64)));
    out.checks.push(Check::new("max / first normalized difference", cmp.max_normalized() / first, Bound::AtMost(cfg.tolerances.compare_growth)));
    if cmp.rows.len() >= 2 {
        let pts: Vec<(f64, f64)> = cmp.rows.iter().map(|r| (r.k as f64, r.normalized.ln())).collect();
        out.checks.push(Check::new("trend of ln normalized difference", linear_fit(&pts).0, Bound::AtMost(0.0)));
    }
    if let Some(f) = &cmp.curved.fit {
        out.notes.push(format!("curved ladder fit: slope/pi {}, phase error {}", f.slope_over_pi(), f.phase_error));
    }
    if cfg.output.plot_data {
        let pts = cmp.rows.iter().map(|r| (r.k as f64, r.normalized)).collect();
        out.plots.push(PlotSeries { name: "normalized_difference".into(), points: pts });
    }
    Ok(out)
}

fn waterwave(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let m = Mode::Waterwave;
    let corner = cfg.corner_data()?;
    let (prof, rho) = wave_rho(cfg)?;
    let mut out = RunOutcome::default();
    let x0 = 1e-10;
    let r0 = rho(x0);
    out.row(m, "rho0", 0, corner.rho0, r0, (r0 - corner.rho0).abs());
    out.checks.push(Check::new("rho(1e-10) - rho0", (r0 - corner.rho0).abs(), Bound::AtMost(cfg.tolerances.rho0)));
    let expo = rho_limit_exponent(&rho, corner.rho0, 1e-8, 1e-4);
    let want = prof.alpha;
    out.row(m, "rho_exponent", 0, want, expo, (expo - want).abs());
    // A straight profile has ρ ≡ ρ0 near the crest and no exponent to fit.
    if cfg.profile.a1 != 0.0 || cfg.profile.a2 != 0.0 {
        out.checks.push(Check::new("|rho - rho0| exponent", (expo - want).abs(), Bound::AtMost(cfg.tolerances.rho_exponent)));
    }
    if cfg.is_stokes_corner() {
        let t = tau1_root();
        out.row(m, "tau1", 1, tau1_bisection()?, t, tau1_residual(t));
    }
    let (gs, gp) = (gamma_phase_series(corner.kappa), gamma_phase(corner.kappa));
    out.row(m, "gamma_kappa", 0, gs, gp, (gp - gs).abs());
    if cfg.output.plot_data {
        let l = prof.half_period();
        let rho_pts = (1..=200).map(|i| {
            let x = l * i as f64 / 200.0;
            (x, rho(x))
        });
        out.plots.push(PlotSeries { name: "rho".into(), points: rho_pts.collect() });
        let eta_pts = (0..=200).map(|i| {
            let x = l * i as f64 / 200.0;
            (x, prof.eta(x))
        });
        out.plots.push(PlotSeries { name: "profile".into(), points: eta_pts.collect() });
    }
    Ok(out)
}
