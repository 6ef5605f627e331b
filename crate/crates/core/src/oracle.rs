//! Independent reference implementations used to cross-check the production
//! routines. They favor transparency over speed.

use std::f64::consts::PI;

use crate::error::Result;
use crate::quad::{GaussLegendre, KahanSum};
use crate::specfun::bisect;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// arg Γ(1+iy) from the product formula
/// −γ_E·y + Σ_{n≥1} (y/n − arctan(y/n)), with an Euler-Maclaurin tail.
pub fn gamma_phase_series(y: f64) -> f64 {
    let f = |n: f64| y / n - (y / n).atan();
    let n_terms = (2000.0 * y.max(1.0)).ceil() as usize;
    let mut acc = KahanSum::default();
    for n in 1..=n_terms {
        acc.add(f(n as f64));
    }
    let nn = n_terms as f64;
    // ∫_N^∞ f = −y + N arctan(y/N) + (y/2) ln(1 + y²/N²)
    let integral = -y + nn * (y / nn).atan() + 0.5 * y * (y * y / (nn * nn)).ln_1p();
    // f′(N) = −y/N² + y/(N² + y²)
    let fp = -y / (nn * nn) + y / (nn * nn + y * y);
    acc.add(integral - 0.5 * f(nn) - fp / 12.0);
    -EULER_GAMMA * y + acc.value()
}

/// K_{iκ}(z) and K′ by composite Gauss-Legendre on the unscaled integral,
/// panel width tied to both the oscillation and the decay scale.
pub fn bessel_k_gauss(kappa: f64, z: f64) -> (f64, f64) {
    let g = GaussLegendre::new(20);
    let t_max = (1.0 + 45.0 / z).acosh() + 0.5;
    let width = (0.25f64).min(1.0 / kappa.max(1.0)).min(0.5 / z.sqrt().max(1.0));
    let n = (t_max / width).ceil() as usize;
    let mut k = KahanSum::default();
    let mut kp = KahanSum::default();
    for j in 0..n {
        let a = t_max * j as f64 / n as f64;
        let b = t_max * (j + 1) as f64 / n as f64;
        for (t, w) in g.on(a, b) {
            let c = t.cosh();
            let e = (-z * c).exp() * (kappa * t).cos();
            k.add(w * e);
            kp.add(-w * e * c);
        }
    }
    (k.value(), kp.value())
}

/// Bisection root of κ tanh(κα*) = ρ₀ on [0, 10] (interval width 1e-14).
pub fn kappa_bisection(alpha_star: f64, rho0: f64) -> Result<f64> {
    bisect(|k| k * (k * alpha_star).tanh() - rho0, 0.0, 10.0, 1e-14)
}

/// Bisection root of μ sin(μα*) + ρ₀ cos(μα*) on ((kπ−π/2)/α*, kπ/α*).
pub fn mu_bisection(alpha_star: f64, rho0: f64, k: usize) -> Result<f64> {
    let lo = (k as f64 * PI - 0.5 * PI) / alpha_star;
    let hi = k as f64 * PI / alpha_star;
    bisect(
        |m| m * (m * alpha_star).sin() + rho0 * (m * alpha_star).cos(),
        lo,
        hi,
        1e-14,
    )
}

/// Smallest positive root of τ = −(1/√3) cot(πτ/2) by bisection on (1, 2).
pub fn tau1_bisection() -> Result<f64> {
    bisect(
        |t| t * (0.5 * PI * t).sin() + (0.5 * PI * t).cos() / 3f64.sqrt(),
        1.0 + 1e-12,
        2.0 - 1e-12,
        1e-15,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_phase_small_y() {
        // arg Γ(1+iy) ≈ −γ_E y + ζ(3) y³/3 for small y
        let y = 1e-3;
        let approx = -EULER_GAMMA * y + 1.202_056_903_159_594 * y.powi(3) / 3.0;
        assert!((gamma_phase_series(y) - approx).abs() < 1e-15);
    }

    #[test]
    fn gauss_k_reference() {
        let (k, _) = bessel_k_gauss(1.0, 1.0);
        assert!((k - 0.289_428_037_025_992_13).abs() < 1e-13);
    }
}
