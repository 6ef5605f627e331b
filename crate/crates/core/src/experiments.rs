//! Desk-scale runs that tie the pieces together: the negative ladder on the
//! straight-corner model domain, and the curved-versus-straightened comparison.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cutoff::SmoothCutoff;
use crate::error::{Error, Result};
use crate::solver2d::eigen::{solve_negative_spectrum_with, EigenOptions, EigenReport};
use crate::solver2d::fit::{fit_taus, AsymptoticFit};
use crate::solver2d::profile::straight_corner_profile;
use crate::solver2d::{
    assemble, generate_mesh_with, Assembled, EnrichedSpace, MeshParams, ScalarFn, StraightenedProfile,
    SurfaceProfile,
};
use crate::specfun::CornerData;
use crate::waterwave::{stokes_a0, stokes_corner_params};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LadderConfig {
    pub gamma: f64,
    pub mesh: MeshParams,
    /// Radii (δ1, δ2) of the enrichment cut-off.
    pub cutoff: [f64; 2],
    pub n_eigs: usize,
    /// Abscissa up to which the model profile is exactly straight.
    pub straight_until: f64,
    pub dense_limit: usize,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            gamma: 0.0,
            mesh: MeshParams::default(),
            cutoff: [5e-6, 0.1],
            n_eigs: 8,
            straight_until: 0.5,
            dense_limit: 1500,
        }
    }
}

impl LadderConfig {
    /// Range of s = √(−λ) the discretization resolves: 1/δ2 ≤ s ≤ 1/(2δ1).
    /// Below, modes feel the outer geometry; above, their oscillation
    /// reaches into the region where the cut-off is identically one.
    pub fn resolved_window(&self) -> (f64, f64) {
        (1.0 / self.cutoff[1], 0.5 / self.cutoff[0])
    }
}

/// Result of one ladder computation.
#[derive(Debug, Clone)]
pub struct LadderRun {
    pub corner: CornerData,
    pub space: EnrichedSpace,
    pub system: Assembled,
    /// Negative eigenpairs up to the top of the resolved window.
    pub report: EigenReport,
    /// s values inside the resolved window, ascending.
    pub resolved: Vec<f64>,
    pub fit: Option<AsymptoticFit>,
}

impl LadderRun {
    /// Ladder index of each resolved mode, ascending with s.
    pub fn resolved_indices(&self) -> Vec<i64> {
        let first = self.fit.as_ref().map_or_else(
            || self.resolved.first().map_or(0, |&s| self.corner.ladder_index(s)),
            |f| f.first_index,
        );
        (0..self.resolved.len() as i64).map(|i| first + i).collect()
    }

    /// Position in `report` of the resolved mode with ladder index k.
    pub fn mode_position(&self, k: i64) -> Result<usize> {
        let idx = self.resolved_indices();
        let j = idx
            .iter()
            .position(|&i| i == k)
            .ok_or_else(|| Error::Domain(format!("ladder mode {k} not resolved")))?;
        let s = self.resolved[j];
        self.report
            .eigenvalues
            .iter()
            .position(|&l| ((-l).sqrt() - s).abs() <= 1e-12 * s)
            .ok_or_else(|| Error::Domain(format!("ladder mode {k} missing from report")))
    }
}

pub fn model_profile(cfg: &LadderConfig) -> Result<SurfaceProfile> {
    straight_corner_profile(3.0, 1.0, stokes_a0(), cfg.straight_until)
}

/// Negative ladder on the straight-corner model domain with σ = 0 and the
/// constant Robin coefficient ρ0.
pub fn model_ladder(cfg: &LadderConfig) -> Result<LadderRun> {
    let corner = stokes_corner_params(cfg.gamma);
    let profile = model_profile(cfg)?;
    let rho0 = corner.rho0;
    solve_ladder(&profile, Arc::new(move |_| rho0), &corner, cfg)
}

/// Meshes `profile`, enriches, assembles with Robin coefficient `rho`
/// (σ = 0), and extracts and fits the negative ladder.
pub fn solve_ladder(profile: &SurfaceProfile, rho: ScalarFn, corner: &CornerData, cfg: &LadderConfig) -> Result<LadderRun> {
    let mesh = generate_mesh_with(profile, corner.alpha_star, &cfg.mesh)?;
    let space = EnrichedSpace::new(mesh, corner.clone(), SmoothCutoff::new(cfg.cutoff[0], cfg.cutoff[1]))?;
    let rho_ref: &(dyn Fn(f64) -> f64 + Sync) = &*rho;
    let system = assemble(&space, &|_, _| 0.0, rho_ref)?;
    let (s_lo, s_hi) = cfg.resolved_window();
    let opts = EigenOptions {
        n_eigs: cfg.n_eigs,
        lower_bound: Some(-s_hi * s_hi),
        dense_limit: cfg.dense_limit,
        ..EigenOptions::default()
    };
    // Keep the modes nearest zero: the most negative ones are the first to
    // leave the resolved window.
    let mut report = solve_negative_spectrum_with(&system, &EigenOptions { n_eigs: usize::MAX, ..opts })?;
    keep_shallowest(&mut report, cfg.n_eigs);
    let resolved: Vec<f64> = report.taus().into_iter().filter(|&s| s >= s_lo && s <= s_hi).collect();
    let fit = fit_taus(&resolved, corner).ok();
    report.fit = fit.clone();
    Ok(LadderRun { corner: corner.clone(), space, system, report, resolved, fit })
}

fn keep_shallowest(report: &mut EigenReport, n: usize) {
    let len = report.eigenvalues.len();
    if len <= n {
        return;
    }
    let drop = len - n;
    report.eigenvalues.drain(..drop);
    report.eigenvectors.drain(..drop);
    report.sing_coeffs.drain(..drop);
    report.residuals.drain(..drop);
}

/// One row of the curved-versus-model table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub k: i64,
    pub lambda_curved: f64,
    pub lambda_model: f64,
    pub difference: f64,
    /// |λ̃ − λ̂| / τ̂^{2−α}
    pub normalized: f64,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    pub curved: LadderRun,
    pub model: LadderRun,
}

impl Comparison {
    pub fn max_normalized(&self) -> f64 {
        self.rows.iter().map(|r| r.normalized).fold(0.0, f64::max)
    }

    /// True when the normalized column does not grow with k beyond `slack` (relative).
    pub fn normalized_non_increasing(&self, slack: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].normalized <= w[0].normalized * (1.0 + slack))
    }
}

/// Eigenvalues on the curved domain (profile η, coefficient ρ) against the
/// straightened model (ξ, χ), on meshes built with identical parameters.
pub fn curved_vs_model_compare(
    straightened: &StraightenedProfile,
    corner: &CornerData,
    cfg: &LadderConfig,
) -> Result<Comparison> {
    let base = straightened.base.clone();
    let rho = {
        let s = straightened.clone();
        Arc::new(move |x| s.rho(x)) as ScalarFn
    };
    let curved = solve_ladder(&base, rho, corner, cfg)?;
    let model = solve_ladder(&straightened.xi, straightened.chi_fn(), corner, cfg)?;
    let alpha = base.alpha;
    let mut rows = Vec::new();
    for (k, &s_model) in model.resolved_indices().iter().zip(&model.resolved) {
        let Some(j) = curved.resolved_indices().iter().position(|i| i == k) else { continue };
        let s_curved = curved.resolved[j];
        let (lc, lm) = (-s_curved * s_curved, -s_model * s_model);
        rows.push(CompareRow {
            k: *k,
            lambda_curved: lc,
            lambda_model: lm,
            difference: lc - lm,
            normalized: (lc - lm).abs() / s_model.powf(2.0 - alpha),
        });
    }
    if rows.is_empty() {
        return Err(Error::Resolution("no ladder mode resolved on both domains".into()));
    }
    Ok(Comparison { rows, curved, model })
}
