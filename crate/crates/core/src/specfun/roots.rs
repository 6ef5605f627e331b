use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Safeguarded Newton on a sign-changing bracket `[a, b]`.
///
/// `f` returns the value and derivative. Falls back to bisection whenever the
/// Newton step leaves the current bracket or stalls.
pub fn bracketed_newton<F>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (fa, _) = f(a);
    let (fb, _) = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{a}, {b}] (f(a) = {fa:e}, f(b) = {fb:e})"
        )));
    }
    let neg_at_a = fa < 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..300 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx < 0.0) == neg_at_a {
            a = x;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx.is_finite() && dfx != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= xtol * x.abs().max(1e-300) || (b - a) <= xtol * x.abs() {
            return Ok(next);
        }
        x = next;
    }
    Err(Error::Convergence(format!(
        "bracketed Newton did not settle on [{a}, {b}]"
    )))
}

/// Plain bisection to absolute width `width`. Kept deliberately simple.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, width: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!("no sign change on [{a}, {b}]")));
    }
    let neg_at_a = fa < 0.0;
    while b - a > width {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn check_corner_inputs(alpha_star: f64, rho0: f64) -> Result<()> {
    if !(alpha_star > 0.0 && alpha_star < PI) {
        return Err(Error::InvalidParameter(format!(
            "opening angle {alpha_star} outside (0, pi)"
        )));
    }
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Robin constant {rho0} must be positive"
        )));
    }
    Ok(())
}

/// Positive root of κ·tanh(κα*) = ρ₀.
pub fn solve_kappa(alpha_star: f64, rho0: f64) -> Result<f64> {
    check_corner_inputs(alpha_star, rho0)?;
    let f = |k: f64| {
        let t = (k * alpha_star).tanh();
        let sech2 = 1.0 - t * t;
        (k * t - rho0, t + k * alpha_star * sech2)
    };
    // κ tanh(κα*) ≥ κ²α*/(1+κα*) gives a finite upper bracket.
    let mut hi = (rho0 / alpha_star).sqrt().max(rho0) + 1.0;
    while f(hi).0 <= 0.0 {
        hi *= 2.0;
    }
    bracketed_newton(f, 0.0, hi, 1e-15)
}

/// k-th root of μ·tan(μα*) = −ρ₀ on the branch μα* ∈ ((k−1)π + π/2, kπ).
pub fn solve_mu(alpha_star: f64, rho0: f64, k: usize) -> Result<f64> {
    check_corner_inputs(alpha_star, rho0)?;
    if k == 0 {
        return Err(Error::InvalidParameter("mode index starts at 1".into()));
    }
    let lo = ((k as f64 - 0.5) * PI) / alpha_star;
    let hi = (k as f64 * PI) / alpha_star;
    // Multiply through by cos(μα*) to remove the pole at the left end:
    // g(μ) = μ sin(μα*) + ρ₀ cos(μα*), whose zero set on the branch is the same.
    let g = |m: f64| {
        let (s, c) = (m * alpha_star).sin_cos();
        (
            m * s + rho0 * c,
            s + m * alpha_star * c - rho0 * alpha_star * s,
        )
    };
    let mut mu = bracketed_newton(g, lo, hi, 1e-15)?;
    // The stopping step is a few ulps wide at large μ; polish while |g| drops.
    for _ in 0..4 {
        let (v, dv) = g(mu);
        let next = mu - v / dv;
        if !(g(next).0.abs() < v.abs()) {
            break;
        }
        mu = next;
    }
    let x = mu * alpha_star;
    if !(x > lo * alpha_star && x < hi * alpha_star) {
        return Err(Error::Bracket(format!(
            "root {mu} escaped branch {k} ({lo}, {hi})"
        )));
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_matches_bisection() {
        let k = solve_kappa(PI / 2.0, 1.0).unwrap();
        let b = bisect(|x| x * (x * PI / 2.0).tanh() - 1.0, 0.0, 10.0, 1e-14).unwrap();
        assert!((k - b).abs() < 1e-13);
    }

    #[test]
    fn mu_matches_bisection() {
        let (a, r) = (PI / 2.0, 0.5);
        let m = solve_mu(a, r, 2).unwrap();
        let lo = 1.5 * PI / a;
        let hi = 2.0 * PI / a;
        let b = bisect(|x| x * (x * a).sin() + r * (x * a).cos(), lo + 1e-12, hi, 1e-14).unwrap();
        assert!((m - b).abs() < 1e-12);
        assert!((m * (m * a).tan() + r).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(solve_kappa(0.0, 1.0).is_err());
        assert!(solve_kappa(1.0, -1.0).is_err());
        assert!(solve_mu(1.0, 1.0, 0).is_err());
    }
}
