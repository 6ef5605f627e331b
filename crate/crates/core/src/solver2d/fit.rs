//! Regression of the computed ladder against s_k = e^{(γ+γ_κ+kπ)/κ}.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::CornerData;

use super::eigen::EigenReport;
use super::profile::linear_fit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    /// Slope of κ·ln s_k against k; π in the limit.
    pub slope: f64,
    /// Intercept of κ·ln s_k, reduced to [0, π).
    pub intercept: f64,
    /// Intercept minus (γ + γ_κ), reduced to (−π/2, π/2].
    pub phase_error: f64,
    /// π divided by the slope of ln s_k.
    pub kappa_fit: f64,
    /// Fitted phase, same as `intercept`.
    pub phase_fit: f64,
    /// Fitted e^{π/κ}.
    pub ratio_fit: f64,
    /// Ladder index matched to the first computed s.
    pub first_index: i64,
    /// Per mode: κ ln s_k minus the closed-form value at the matched index.
    pub deviations: Vec<f64>,
}

impl AsymptoticFit {
    pub fn slope_over_pi(&self) -> f64 {
        self.slope / PI
    }
}

/// Reduces x to (−π/2, π/2].
pub fn wrap_half_pi(x: f64) -> f64 {
    let y = x.rem_euclid(PI);
    if y > 0.5 * PI {
        y - PI
    } else {
        y
    }
}

/// Fits κ·ln s_k = slope·k + intercept over the consecutive computed modes.
pub fn fit_asymptotics(report: &EigenReport, corner: &CornerData) -> Result<AsymptoticFit> {
    fit_taus(&report.taus(), corner)
}

pub fn fit_taus(taus: &[f64], corner: &CornerData) -> Result<AsymptoticFit> {
    if taus.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 negative eigenvalues, have {}", taus.len())));
    }
    let kap = corner.kappa;
    let pts: Vec<(f64, f64)> = taus.iter().enumerate().map(|(k, s)| (k as f64, kap * s.ln())).collect();
    let (slope, b) = linear_fit(&pts);
    let target = corner.gamma + corner.gamma_kappa;
    let first_index = ((b - target) / PI).round() as i64;
    let deviations = pts
        .iter()
        .map(|&(k, y)| y - (target + (k + first_index as f64) * PI))
        .collect();
    let intercept = b.rem_euclid(PI);
    Ok(AsymptoticFit {
        slope,
        intercept,
        phase_error: wrap_half_pi(b - target),
        kappa_fit: PI * kap / slope,
        phase_fit: intercept,
        ratio_fit: (slope / kap).exp(),
        first_index,
        deviations,
    })
}
