//! Scalar transcendental roots, the Gamma phase and imaginary-order Bessel
//! functions, collected into the [`CornerData`] fingerprint of a corner.

mod bessel;
mod gamma;
mod roots;

pub use bessel::{
    bessel_all, bessel_i_real, bessel_scaled, bessel_i_real_deriv, bessel_k, bessel_k_deriv, i_asymptotic,
    i_series, k_asymptotic, k_integral, k_series, small_z_limits, I_ASYMPTOTIC_FROM, I_OVERFLOW,
    K_ASYMPTOTIC_FROM,
};
pub use gamma::{gamma_modulus, gamma_modulus_defect, gamma_phase, ln_gamma};
pub use roots::{bisect, bracketed_newton, solve_kappa, solve_mu};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Spectral fingerprint of a Robin corner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerData {
    pub alpha_star: f64,
    pub rho0: f64,
    pub kappa: f64,
    /// Extension phase, reduced to [0, π).
    pub gamma: f64,
    pub gamma_kappa: f64,
    pub mu: Vec<f64>,
    /// Hölder exponent of the profile remainder.
    pub alpha: f64,
}

impl CornerData {
    pub const DEFAULT_MU_COUNT: usize = 16;

    pub fn new(alpha_star: f64, rho0: f64, gamma: f64, alpha: f64) -> Result<Self> {
        Self::with_modes(alpha_star, rho0, gamma, alpha, Self::DEFAULT_MU_COUNT)
    }

    pub fn with_modes(
        alpha_star: f64,
        rho0: f64,
        gamma: f64,
        alpha: f64,
        n_mu: usize,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Hölder exponent {alpha} outside (0, 1]"
            )));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter("extension phase must be finite".into()));
        }
        let kappa = solve_kappa(alpha_star, rho0)?;
        let mu = (1..=n_mu.max(1))
            .map(|k| solve_mu(alpha_star, rho0, k))
            .collect::<Result<Vec<_>>>()?;
        if mu[0] <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "corner not admissible: mu_1 = {} <= 1",
                mu[0]
            )));
        }
        Ok(Self {
            alpha_star,
            rho0,
            kappa,
            gamma: gamma.rem_euclid(PI),
            gamma_kappa: gamma_phase(kappa),
            mu,
            alpha,
        })
    }

    /// Same corner, different extension phase.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self {
            gamma: gamma.rem_euclid(PI),
            ..self.clone()
        }
    }

    /// Ladder ratio e^{π/κ}.
    pub fn ladder_ratio(&self) -> f64 {
        (PI / self.kappa).exp()
    }

    /// Closed-form ladder entry e^{(γ+γ_κ+kπ)/κ}.
    pub fn ladder(&self, k: i64) -> f64 {
        ((self.gamma + self.gamma_kappa + k as f64 * PI) / self.kappa).exp()
    }

    /// Index of the ladder entry closest to `tau` in log scale.
    pub fn ladder_index(&self, tau: f64) -> i64 {
        ((self.kappa * tau.ln() - self.gamma - self.gamma_kappa) / PI).round() as i64
    }

    pub fn kappa_residual(&self) -> f64 {
        (self.kappa * (self.kappa * self.alpha_star).tanh() - self.rho0).abs() / self.rho0
    }

    pub fn mu_residual(&self, k: usize) -> f64 {
        let m = self.mu[k - 1];
        (m * (m * self.alpha_star).tan() + self.rho0).abs()
    }

    /// Singular function w_γ = sin(κ ln(r/2) + γ) cosh(κθ) and its polar derivatives
    /// (w, ∂_r w, ∂_θ w, ∂_rr w).
    pub fn singular_function(&self, r: f64, theta: f64) -> [f64; 4] {
        let k = self.kappa;
        let (s, c) = (k * (0.5 * r).ln() + self.gamma).sin_cos();
        let ch = (k * theta).cosh();
        let sh = (k * theta).sinh();
        [
            s * ch,
            k * c / r * ch,
            k * s * sh,
            (-k * k * s - k * c) / (r * r) * ch,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stokes_corner() {
        let c = CornerData::new(PI / 3.0, 3f64.sqrt() / 2.0, 0.0, 0.5).unwrap();
        assert!((c.kappa - 1.071_453_474_249_718_7).abs() < 1e-13);
        assert!(c.kappa_residual() < 1e-14);
        for k in 1..=c.mu.len() {
            assert!(c.mu_residual(k) < 1e-10 * c.mu[k - 1].max(1.0));
        }
        assert!((c.mu[0] - 2.704_018_610_650_034).abs() < 1e-12);
    }

    #[test]
    fn ladder_index_round_trip() {
        let c = CornerData::new(PI / 3.0, 3f64.sqrt() / 2.0, 0.4, 0.5).unwrap();
        for k in -2..6 {
            assert_eq!(c.ladder_index(c.ladder(k)), k);
        }
    }
}
