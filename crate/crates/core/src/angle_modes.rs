//! Angular eigenbasis on (0, α*) and the symplectic form on the span of
//! r^{±iκ} cosh(κθ).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::specfun::CornerData;

pub const DEFAULT_MODES: usize = 16;
const DEFAULT_QUAD: usize = 96;

/// φ_0 = cosh(κθ)/v̂_0 and φ_k = cos(μ_kθ)/v̂_k, orthonormal in L²(0, α*).
#[derive(Debug, Clone)]
pub struct AngularBasis {
    pub corner: CornerData,
    pub n_modes: usize,
    pub norms: Vec<f64>,
    quad: GaussLegendre,
}

impl AngularBasis {
    pub fn new(corner: &CornerData) -> Result<Self> {
        Self::with_modes(corner, DEFAULT_MODES)
    }

    pub fn with_modes(corner: &CornerData, n_modes: usize) -> Result<Self> {
        let corner = if corner.mu.len() < n_modes {
            CornerData::with_modes(
                corner.alpha_star,
                corner.rho0,
                corner.gamma,
                corner.alpha,
                n_modes,
            )?
        } else {
            corner.clone()
        };
        let a = corner.alpha_star;
        let k = corner.kappa;
        let mut norms = vec![(0.5 * a + (2.0 * k * a).sinh() / (4.0 * k)).sqrt()];
        for m in corner.mu.iter().take(n_modes) {
            norms.push((0.5 * a + (2.0 * m * a).sin() / (4.0 * m)).sqrt());
        }
        // Enough nodes for cos(μ_n θ) on the widest mode retained.
        let mu_max = corner.mu[n_modes.max(1) - 1];
        let n_quad = DEFAULT_QUAD.max((mu_max * a) as usize + 48);
        Ok(Self {
            corner,
            n_modes,
            norms,
            quad: GaussLegendre::new(n_quad),
        })
    }

    pub fn alpha_star(&self) -> f64 {
        self.corner.alpha_star
    }

    /// φ_k(θ); k = 0 is the cosh mode.
    pub fn eval(&self, k: usize, theta: f64) -> Result<f64> {
        let a = self.corner.alpha_star;
        if !(theta >= -1e-14 && theta <= a * (1.0 + 1e-14)) {
            return Err(Error::Domain(format!("angle {theta} outside [0, {a}]")));
        }
        if k > self.n_modes {
            return Err(Error::Domain(format!(
                "mode {k} beyond the {} retained",
                self.n_modes
            )));
        }
        Ok(self.eval_unchecked(k, theta))
    }

    pub fn eval_unchecked(&self, k: usize, theta: f64) -> f64 {
        if k == 0 {
            (self.corner.kappa * theta).cosh() / self.norms[0]
        } else {
            (self.corner.mu[k - 1] * theta).cos() / self.norms[k]
        }
    }

    pub fn deriv(&self, k: usize, theta: f64) -> f64 {
        if k == 0 {
            let kap = self.corner.kappa;
            kap * (kap * theta).sinh() / self.norms[0]
        } else {
            let m = self.corner.mu[k - 1];
            -m * (m * theta).sin() / self.norms[k]
        }
    }

    /// Quadrature nodes on (0, α*) at which [`project_h`](Self::project_h) expects samples.
    pub fn arc_nodes(&self) -> Vec<f64> {
        self.quad.on(0.0, self.corner.alpha_star).map(|(x, _)| x).collect()
    }

    /// φ_k-coefficient of samples taken at [`arc_nodes`](Self::arc_nodes).
    pub fn project(&self, k: usize, samples: &[f64]) -> Result<f64> {
        if samples.len() != self.quad.len() {
            return Err(Error::Resolution(format!(
                "expected {} arc samples, got {}",
                self.quad.len(),
                samples.len()
            )));
        }
        if k > self.n_modes {
            return Err(Error::Domain(format!("mode {k} not retained")));
        }
        Ok(self
            .quad
            .on(0.0, self.corner.alpha_star)
            .zip(samples)
            .map(|((t, w), u)| w * u * self.eval_unchecked(k, t))
            .sum())
    }

    /// h = ∫ U φ_0 dθ from samples at [`arc_nodes`](Self::arc_nodes).
    pub fn project_h(&self, samples: &[f64]) -> Result<f64> {
        self.project(0, samples)
    }

    /// h = ∫ U φ_0 dθ for a callable U(θ).
    pub fn project_h_fn<F: FnMut(f64) -> f64>(&self, mut u: F) -> f64 {
        self.quad
            .on(0.0, self.corner.alpha_star)
            .map(|(t, w)| w * u(t) * self.eval_unchecked(0, t))
            .sum()
    }

    /// Gram matrix entry ∫ φ_j φ_k dθ.
    pub fn gram(&self, j: usize, k: usize) -> f64 {
        self.quad
            .on(0.0, self.corner.alpha_star)
            .map(|(t, w)| w * self.eval_unchecked(j, t) * self.eval_unchecked(k, t))
            .sum()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F) -> f64 {
        self.quad.integrate(0.0, self.corner.alpha_star, f)
    }
}

/// w = (a r^{iκ} + b r^{−iκ}) cosh(κθ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPair {
    pub a: Complex64,
    pub b: Complex64,
}

impl SingularPair {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self { a, b }
    }

    /// sin(κ ln(r/2) + γ) cosh(κθ) written in the (a, b) coordinates.
    pub fn from_phase(kappa: f64, gamma: f64) -> Self {
        let phase = gamma - kappa * std::f64::consts::LN_2;
        let two_i = Complex64::new(0.0, 2.0);
        Self {
            a: Complex64::from_polar(1.0, phase) / two_i,
            b: -Complex64::from_polar(1.0, -phase) / two_i,
        }
    }

    /// Radial factor and its r-derivative at r.
    fn radial(&self, kappa: f64, r: f64) -> (Complex64, Complex64) {
        let x = Complex64::from_polar(1.0, kappa * r.ln());
        let xi = x.conj();
        let i = Complex64::i();
        (
            self.a * x + self.b * xi,
            i * kappa * (self.a * x - self.b * xi) / r,
        )
    }
}

/// q(w1, w2) = ∫₀^{α*} (∂_r w1 · conj(w2) − w1 · conj(∂_r w2)) r dθ, by quadrature.
pub fn symplectic_form(
    basis: &AngularBasis,
    w1: &SingularPair,
    w2: &SingularPair,
    r: f64,
) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    let kappa = basis.corner.kappa;
    let (f1, d1) = w1.radial(kappa, r);
    let (f2, d2) = w2.radial(kappa, r);
    let mut re = 0.0;
    let mut im = 0.0;
    for (t, w) in basis.quad.on(0.0, basis.corner.alpha_star) {
        let c = (kappa * t).cosh();
        let v = (d1 * f2.conj() - f1 * d2.conj()) * (c * c * r * w);
        re += v.re;
        im += v.im;
    }
    Ok(Complex64::new(re, im))
}

/// Closed form κ sin(γ₂ − γ₁) ∫ cosh²(κθ) dθ of q for two real phase functions.
pub fn symplectic_closed_form(corner: &CornerData, gamma1: f64, gamma2: f64) -> f64 {
    let a = corner.alpha_star;
    let k = corner.kappa;
    let c2 = 0.5 * a + (2.0 * k * a).sinh() / (4.0 * k);
    k * (gamma2 - gamma1).sin() * c2
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn stokes() -> CornerData {
        CornerData::new(PI / 3.0, 3f64.sqrt() / 2.0, 0.0, 0.5).unwrap()
    }

    #[test]
    fn norms_match_closed_forms() {
        let c = stokes();
        let b = AngularBasis::new(&c).unwrap();
        for k in 0..=b.n_modes {
            let g = b.gram(k, k);
            assert!((g - 1.0).abs() < 1e-12, "mode {k}: {g}");
        }
        assert!(b.eval(0, -0.1).is_err());
        assert!(b.eval(0, c.alpha_star + 0.1).is_err());
    }

    #[test]
    fn robin_compatibility_of_cosh_mode() {
        let c = stokes();
        let b = AngularBasis::new(&c).unwrap();
        let a = c.alpha_star;
        let ratio = b.deriv(0, a) / b.eval(0, a).unwrap();
        assert!((ratio - c.rho0).abs() < 1e-12);
        for k in 1..=4 {
            let r = b.deriv(k, a) / b.eval(k, a).unwrap();
            assert!((r - c.rho0).abs() < 1e-9, "mode {k}: {r}");
        }
    }

    #[test]
    fn projection_samples_checked() {
        let b = AngularBasis::new(&stokes()).unwrap();
        assert!(matches!(b.project_h(&[1.0; 5]), Err(Error::Resolution(_))));
        let nodes = b.arc_nodes();
        let s: Vec<f64> = nodes.iter().map(|&t| b.eval(1, t).unwrap()).collect();
        assert!(b.project_h(&s).unwrap().abs() < 1e-12);
    }
}
