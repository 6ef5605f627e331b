//! Experiment configuration read from TOML.

use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::experiments::LadderConfig;
use crate::solver2d::MeshParams;
use crate::specfun::CornerData;
use crate::verify::ALL_CRITERIA;
use crate::waterwave::{stokes_rho0, ExpansionParams, STOKES_ALPHA_STAR, STOKES_HOLDER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Roots,
    BesselTable,
    Halfline,
    Interval,
    Solve2d,
    Compare,
    Waterwave,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Roots => "roots",
            Mode::BesselTable => "bessel-table",
            Mode::Halfline => "halfline",
            Mode::Interval => "interval",
            Mode::Solve2d => "solve2d",
            Mode::Compare => "compare",
            Mode::Waterwave => "waterwave",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CornerSpec {
    pub alpha_star: f64,
    pub rho0: f64,
    /// Hölder exponent of the profile remainder.
    pub holder: f64,
}

impl Default for CornerSpec {
    fn default() -> Self {
        Self { alpha_star: STOKES_ALPHA_STAR, rho0: stokes_rho0(), holder: STOKES_HOLDER }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    /// Radii (δ1, δ2) of the enrichment cut-off.
    pub cutoff: [f64; 2],
    pub n_eigs: usize,
    pub straight_until: f64,
    pub dense_limit: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        let l = LadderConfig::default();
        Self { cutoff: l.cutoff, n_eigs: l.n_eigs, straight_until: l.straight_until, dense_limit: l.dense_limit }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HalflineSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
}

impl Default for HalflineSpec {
    fn default() -> Self {
        Self { r_min: 1e-8, r_max: 50.0, n_points: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntervalSpec {
    /// Constant Robin correction α.
    pub alpha: f64,
    /// Smallest admissible τδ.
    pub min_tau_delta: f64,
    /// Log-grid step of the FD cross-check.
    pub fd_step: f64,
    pub fd_layer_points: f64,
}

impl Default for IntervalSpec {
    fn default() -> Self {
        Self { alpha: 0.0, min_tau_delta: 8.0, fd_step: 2e-3, fd_layer_points: 8.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BesselSpec {
    /// Order κ of K_{iκ}; the corner κ when absent.
    pub kappa: Option<f64>,
    pub z: Vec<f64>,
}

impl Default for BesselSpec {
    fn default() -> Self {
        Self { kappa: None, z: vec![1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveSpec {
    /// Constant surface vorticity ω.
    pub omega: f64,
    /// Stream function value on the surface.
    pub m: f64,
}

impl Default for WaveSpec {
    fn default() -> Self {
        Self { omega: 0.0, m: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub csv: String,
    pub summary: String,
    /// Write two-column plot-data files next to the CSV.
    pub plot_data: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { csv: "results.csv".into(), summary: "summary.txt".into(), plot_data: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub roots: f64,
    pub bessel: f64,
    pub wronskian: f64,
    pub halfline: f64,
    /// Factor c in |τ̂/τ_k − 1| ≤ c·e^{−2τ̂δ}.
    pub interval_remainder: f64,
    pub interval_fd: f64,
    pub robin: f64,
    pub slope: f64,
    pub phase: f64,
    pub min_modes: usize,
    /// Allowed ratio of the largest to the first normalized difference.
    pub compare_growth: f64,
    pub rho0: f64,
    pub rho_exponent: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            roots: 1e-12,
            bessel: 1e-8,
            wronskian: 1e-9,
            halfline: 1e-3,
            interval_remainder: 10.0,
            interval_fd: 1e-3,
            robin: 1e-10,
            slope: 0.05,
            phase: 0.1,
            min_modes: 3,
            compare_growth: 1.0,
            rho0: 1e-3,
            rho_exponent: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySpec {
    pub criteria: Vec<usize>,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self { criteria: ALL_CRITERIA.to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Required by `run`, ignored by `verify`.
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Inclusive `[k_min, k_max]`; `[]` selects nothing.
    #[serde(default)]
    pub k_range: Option<Vec<i64>>,
    #[serde(default)]
    pub corner: CornerSpec,
    #[serde(default)]
    pub profile: ExpansionParams,
    #[serde(default)]
    pub waterwave: WaveSpec,
    #[serde(default)]
    pub mesh: MeshParams,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub halfline: HalflineSpec,
    #[serde(default)]
    pub interval: IntervalSpec,
    #[serde(default)]
    pub bessel: BesselSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub verify: VerifySpec,
}

fn default_delta() -> f64 {
    0.1
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: None,
            gamma: 0.0,
            delta: default_delta(),
            k_range: None,
            corner: CornerSpec::default(),
            profile: ExpansionParams::default(),
            waterwave: WaveSpec::default(),
            mesh: MeshParams::default(),
            solver: SolverSpec::default(),
            halfline: HalflineSpec::default(),
            interval: IntervalSpec::default(),
            bessel: BesselSpec::default(),
            output: OutputSpec::default(),
            tolerances: Tolerances::default(),
            verify: VerifySpec::default(),
        }
    }
}

/// Problems with a configuration, reported before any computation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("configuration error: {0}")]
pub struct ConfigError(pub String);

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = |name: &str, v: f64| if v.is_finite() { Ok(()) } else { Err(bad(format!("{name} must be finite"))) };
        finite("gamma", self.gamma)?;
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(bad(format!("delta = {} must be positive", self.delta)));
        }
        if let Some(k) = &self.k_range {
            if !(k.is_empty() || k.len() == 2) {
                return Err(bad("k_range must be [] or [k_min, k_max]"));
            }
        }
        let c = &self.corner;
        if !(c.alpha_star > 0.0 && c.alpha_star < 0.5 * PI) {
            return Err(bad(format!("corner.alpha_star = {} outside (0, pi/2)", c.alpha_star)));
        }
        if !(c.rho0 > 0.0 && c.rho0.is_finite()) {
            return Err(bad(format!("corner.rho0 = {} must be positive", c.rho0)));
        }
        if !(c.holder > 0.0 && c.holder <= 1.0) {
            return Err(bad(format!("corner.holder = {} outside (0, 1]", c.holder)));
        }
        let m = &self.mesh;
        if !(m.h_max > 0.0 && m.grading > 0.0 && m.grading < 1.0 && m.n_theta >= 2) {
            return Err(bad("mesh needs h_max > 0, grading in (0, 1), n_theta >= 2"));
        }
        let s = &self.solver;
        if !(s.cutoff[0] > 0.0 && s.cutoff[0] < s.cutoff[1]) {
            return Err(bad("solver.cutoff must satisfy 0 < delta1 < delta2"));
        }
        if s.n_eigs == 0 {
            return Err(bad("solver.n_eigs must be positive"));
        }
        let h = &self.halfline;
        if !(h.r_min > 0.0 && h.r_max > h.r_min && h.n_points >= 10) {
            return Err(bad("halfline needs 0 < r_min < r_max and n_points >= 10"));
        }
        let i = &self.interval;
        finite("interval.alpha", i.alpha)?;
        if !(i.min_tau_delta > 0.0 && i.fd_step > 0.0 && i.fd_layer_points > 0.0) {
            return Err(bad("interval step parameters must be positive"));
        }
        if self.bessel.z.iter().any(|z| !(*z > 0.0 && z.is_finite())) {
            return Err(bad("bessel.z entries must be positive"));
        }
        if let Some(k) = self.bessel.kappa {
            if !(k > 0.0 && k.is_finite()) {
                return Err(bad("bessel.kappa must be positive"));
            }
        }
        let o = &self.output;
        for (name, v) in [("output.csv", &o.csv), ("output.summary", &o.summary)] {
            if v.is_empty() || v.contains('/') || v.contains('\\') {
                return Err(bad(format!("{name} must be a plain file name")));
            }
        }
        if o.csv == o.summary {
            return Err(bad("output.csv and output.summary must differ"));
        }
        if let Some(&id) = self.verify.criteria.iter().find(|id| !ALL_CRITERIA.contains(id)) {
            return Err(bad(format!("verify.criteria: no criterion {id}")));
        }
        let p = &self.profile;
        if !(p.lambda > 0.0 && p.eta0 > 0.0 && p.a0 > 0.0 && p.cutoff > 0.0 && p.cutoff < 0.5 * p.lambda) {
            return Err(bad("profile needs positive lambda, eta0, a0 and 0 < cutoff < lambda/2"));
        }
        Ok(())
    }

    /// The k range, or `default` when unset.
    pub fn k_range_or(&self, default: RangeInclusive<i64>) -> RangeInclusive<i64> {
        match self.k_range.as_deref() {
            None => default,
            Some([a, b]) => *a..=*b,
            // `[]`: an empty range.
            _ => 1..=0,
        }
    }

    pub fn corner_data(&self) -> crate::Result<CornerData> {
        CornerData::new(self.corner.alpha_star, self.corner.rho0, self.gamma, self.corner.holder)
    }

    pub fn is_stokes_corner(&self) -> bool {
        (self.corner.alpha_star - STOKES_ALPHA_STAR).abs() < 1e-15 && (self.corner.rho0 - stokes_rho0()).abs() < 1e-15
    }

    pub fn ladder_config(&self) -> LadderConfig {
        LadderConfig {
            gamma: self.gamma,
            mesh: self.mesh,
            cutoff: self.solver.cutoff,
            n_eigs: self.solver.n_eigs,
            straight_until: self.solver.straight_until,
            dense_limit: self.solver.dense_limit,
        }
    }

}
