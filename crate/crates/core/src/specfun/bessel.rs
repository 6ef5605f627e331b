//! Modified Bessel functions of purely imaginary order iκ at real argument.
//!
//! `K_{iκ}(z)` is real; `Ĩ_{iκ}(z) = Re I_{iκ}(z)` is the real symmetric
//! combination `(I_{iκ} + I_{-iκ})/2`. Regimes:
//!
//! * `K`: trapezoid rule on the scaled integral `∫₀^∞ e^{-z(cosh t - 1)} cos κt dt`
//!   for `z < K_ASYMPTOTIC_FROM`, Hankel asymptotic series beyond.
//! * `Ĩ`: ascending series in complex arithmetic for `z < I_ASYMPTOTIC_FROM`,
//!   exponential asymptotic series beyond, explicit overflow error past `I_OVERFLOW`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

pub const K_ASYMPTOTIC_FROM: f64 = 30.0;
pub const I_ASYMPTOTIC_FROM: f64 = 35.0;
pub const I_OVERFLOW: f64 = 705.0;

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("Bessel argument must be positive, got {z}")));
    }
    Ok(())
}

fn use_k_asymptotic(kappa: f64, z: f64) -> bool {
    z >= K_ASYMPTOTIC_FROM.max(2.0 * kappa * kappa)
}

fn use_i_asymptotic(kappa: f64, z: f64) -> bool {
    z >= I_ASYMPTOTIC_FROM.max(2.0 * kappa * kappa)
}

/// K_{iκ}(z).
pub fn bessel_k(kappa: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    if use_k_asymptotic(kappa, z) {
        Ok(k_asymptotic(kappa, z).0)
    } else {
        Ok(k_integral(kappa, z).0)
    }
}

/// d/dz K_{iκ}(z).
pub fn bessel_k_deriv(kappa: f64, z: f64) -> Result<f64> {
    check_z(z)?;
    if use_k_asymptotic(kappa, z) {
        Ok(k_asymptotic(kappa, z).1)
    } else {
        Ok(k_integral(kappa, z).1)
    }
}

/// Ĩ_{iκ}(z) = Re I_{iκ}(z).
pub fn bessel_i_real(kappa: f64, z: f64) -> Result<f64> {
    i_pair(kappa, z).map(|p| p.0)
}

/// d/dz Ĩ_{iκ}(z).
pub fn bessel_i_real_deriv(kappa: f64, z: f64) -> Result<f64> {
    i_pair(kappa, z).map(|p| p.1)
}

/// (K, K′, Ĩ, Ĩ′) at one point.
pub fn bessel_all(kappa: f64, z: f64) -> Result<[f64; 4]> {
    check_z(z)?;
    let (k, kp) = if use_k_asymptotic(kappa, z) {
        k_asymptotic(kappa, z)
    } else {
        k_integral(kappa, z)
    };
    let (i, ip) = i_pair(kappa, z)?;
    Ok([k, kp, i, ip])
}

fn i_pair(kappa: f64, z: f64) -> Result<(f64, f64)> {
    check_z(z)?;
    if z > I_OVERFLOW {
        return Err(Error::Overflow(format!(
            "I_(i{kappa})({z}) exceeds the double range"
        )));
    }
    if use_i_asymptotic(kappa, z) {
        Ok(i_asymptotic(kappa, z))
    } else {
        let (v, d) = i_series(kappa, z);
        Ok((v.re, d.re))
    }
}

/// Exponentially scaled values (e^z K, e^z K′, e^{-z} Ĩ, e^{-z} Ĩ′), finite for
/// every positive z.
pub fn bessel_scaled(kappa: f64, z: f64) -> Result<[f64; 4]> {
    check_z(z)?;
    let (k, kp) = if use_k_asymptotic(kappa, z) {
        hankel_k_scaled(kappa, z)
    } else {
        k_integral_scaled(kappa, z)
    };
    let (i, ip) = if use_i_asymptotic(kappa, z) {
        hankel_i_scaled(kappa, z)
    } else {
        let (v, d) = i_series(kappa, z);
        let e = (-z).exp();
        (v.re * e, d.re * e)
    };
    Ok([k, kp, i, ip])
}

/// Trapezoid evaluation of (K, K′) from the integral representation.
///
/// The integrand is entire and even in t, so the trapezoid rule on [0, T]
/// converges geometrically; the step is halved until two levels agree.
pub fn k_integral(kappa: f64, z: f64) -> (f64, f64) {
    let (k, kp) = k_integral_scaled(kappa, z);
    let ez = (-z).exp();
    (k * ez, kp * ez)
}

fn k_integral_scaled(kappa: f64, z: f64) -> (f64, f64) {
    // e^{-z(cosh T - 1)} < e^{-42} at the cut.
    let t_max = (1.0 + 42.0 / z).acosh() + 1.0;
    let f = |t: f64| {
        let c = t.cosh();
        let e = (-z * (c - 1.0)).exp();
        let ck = (kappa * t).cos();
        (e * ck, e * c * ck, e)
    };
    let mut h = (0.5f64).min(0.5 / z.sqrt());
    let mut n = (t_max / h).ceil() as usize;
    h = t_max / n as f64;
    let (f0, g0, a0) = f(0.0);
    let mut s = 0.5 * f0;
    let mut sd = 0.5 * g0;
    let mut scale = 0.5 * a0;
    for j in 1..=n {
        let (a, b, c) = f(j as f64 * h);
        s += a;
        sd += b;
        scale += c;
    }
    let mut prev = (s * h, sd * h);
    for _ in 0..12 {
        // add midpoints
        let mut ms = 0.0;
        let mut msd = 0.0;
        let mut mscale = 0.0;
        for j in 0..n {
            let (a, b, c) = f((j as f64 + 0.5) * h);
            ms += a;
            msd += b;
            mscale += c;
        }
        s += ms;
        sd += msd;
        scale += mscale;
        n *= 2;
        h *= 0.5;
        let cur = (s * h, sd * h);
        let tol = 1e-15 * scale * h;
        if (cur.0 - prev.0).abs() <= tol && (cur.1 - prev.1).abs() <= tol * t_max.cosh() {
            prev = cur;
            break;
        }
        prev = cur;
    }
    // K′ = -∫ e^{-z cosh t} cosh t cos κt dt
    (prev.0, -prev.1)
}

/// Hankel expansion coefficients a_k(iκ) with 4ν² = -4κ².
fn hankel_terms(kappa: f64, z: f64) -> Vec<f64> {
    let mu = -4.0 * kappa * kappa;
    let mut terms = vec![1.0];
    let mut a = 1.0;
    let mut last = 1.0f64;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * 8.0 * z);
        if a.abs() > last.abs() && k > 2 {
            break;
        }
        terms.push(a);
        last = a;
        if a.abs() < 1e-18 {
            break;
        }
    }
    terms
}

/// Large-z asymptotic (K, K′).
pub fn k_asymptotic(kappa: f64, z: f64) -> (f64, f64) {
    let (k, kp) = hankel_k_scaled(kappa, z);
    let e = (-z).exp();
    (k * e, kp * e)
}

fn hankel_k_scaled(kappa: f64, z: f64) -> (f64, f64) {
    let terms = hankel_terms(kappa, z);
    let mut s = 0.0;
    let mut sd = 0.0;
    for (k, a) in terms.iter().enumerate() {
        s += a;
        sd += a * (-1.0 - (k as f64 + 0.5) / z);
    }
    let pre = (PI / (2.0 * z)).sqrt();
    (pre * s, pre * sd)
}

/// Large-z asymptotic (Ĩ, Ĩ′); the exponentially small e^{-z} part is dropped.
pub fn i_asymptotic(kappa: f64, z: f64) -> (f64, f64) {
    let (i, ip) = hankel_i_scaled(kappa, z);
    let e = z.exp();
    (i * e, ip * e)
}

fn hankel_i_scaled(kappa: f64, z: f64) -> (f64, f64) {
    let terms = hankel_terms(kappa, z);
    let mut s = 0.0;
    let mut sd = 0.0;
    for (k, a) in terms.iter().enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * a;
        sd += sign * a * (1.0 - (k as f64 + 0.5) / z);
    }
    let pre = 1.0 / (2.0 * PI * z).sqrt();
    (pre * s, pre * sd)
}

/// Ascending series for the complex I_{iκ}(z) and its derivative.
pub fn i_series(kappa: f64, z: f64) -> (Complex64, Complex64) {
    let nu = Complex64::new(0.0, kappa);
    let half = 0.5 * z;
    // (z/2)^{iκ} / Γ(1+iκ)
    let lead = (nu * half.ln() - ln_gamma(Complex64::new(1.0, kappa))).exp();
    let q = half * half;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = term * nu;
    let mut k = 0usize;
    loop {
        k += 1;
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        dsum += term * (nu + 2.0 * kf);
        if term.norm() < 1e-17 * sum.norm() && kf > q.sqrt() {
            break;
        }
        if k > 10_000 {
            break;
        }
    }
    (lead * sum, lead * dsum / z)
}

/// K from the ascending series, K = -π Im I_{iκ} / sinh(πκ). Only sensible
/// for small and moderate z, where cancellation stays mild.
pub fn k_series(kappa: f64, z: f64) -> (f64, f64) {
    let (i, d) = i_series(kappa, z);
    let s = (PI * kappa).sinh();
    (-PI * i.im / s, -PI * d.im / s)
}

/// Small-z limits: K ~ -(π/(κ sinh πκ))^{1/2} sin(κ ln(z/2) - γ_κ) and
/// Ĩ ~ (sinh πκ/(πκ))^{1/2} cos(κ ln(z/2) - γ_κ).
pub fn small_z_limits(kappa: f64, z: f64, gamma_kappa: f64) -> (f64, f64) {
    let ph = kappa * (0.5 * z).ln() - gamma_kappa;
    let sh = (PI * kappa).sinh();
    (
        -(PI / (kappa * sh)).sqrt() * ph.sin(),
        (sh / (PI * kappa)).sqrt() * ph.cos(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_reference_value() {
        // mpmath besselk(1j, 1)
        let k = bessel_k(1.0, 1.0).unwrap();
        assert!((k - 0.289_428_037_025_992_13).abs() < 1e-13, "{k}");
    }

    #[test]
    fn domain_and_overflow() {
        assert!(bessel_k(1.0, 0.0).is_err());
        assert!(bessel_k(1.0, -1.0).is_err());
        assert!(matches!(bessel_i_real(1.0, 800.0), Err(Error::Overflow(_))));
        assert_eq!(bessel_k(1.0, 800.0).unwrap(), 0.0);
    }
}
