//! C^∞ radial cut-off ζ with ζ = 1 on [0, r1] and ζ = 0 on [r2, ∞). The
//! transition is uniform in ln r, so a wide ratio r2/r1 spreads it over
//! several decades of scale.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothCutoff {
    pub r1: f64,
    pub r2: f64,
}

impl SmoothCutoff {
    pub fn new(r1: f64, r2: f64) -> Self {
        assert!(0.0 < r1 && r1 < r2, "cut-off radii must satisfy 0 < r1 < r2");
        Self { r1, r2 }
    }

    /// (ζ, ζ′, ζ″) at r.
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        if r <= self.r1 {
            return (1.0, 0.0, 0.0);
        }
        if r >= self.r2 {
            return (0.0, 0.0, 0.0);
        }
        let w = (self.r2 / self.r1).ln();
        let (s, ds, d2s) = smooth_step((self.r2 / r).ln() / w);
        // x = ln(r2/r)/w: dx/dr = −1/(rw), d²x/dr² = 1/(r²w)
        let x1 = -1.0 / (r * w);
        let x2 = 1.0 / (r * r * w);
        (s, ds * x1, d2s * x1 * x1 + ds * x2)
    }

    pub fn support(&self) -> f64 {
        self.r2
    }
}

/// C^∞ step on [0, 1]: S = 1/(1 + e^{−u}), u = 1/(1−x) − 1/x, with (S, S′, S″).
/// S = 0 for x ≤ 0 and S = 1 for x ≥ 1.
pub fn smooth_step(x: f64) -> (f64, f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    if x >= 1.0 {
        return (1.0, 0.0, 0.0);
    }
    let u = 1.0 / (1.0 - x) - 1.0 / x;
    let s = 1.0 / (1.0 + (-u).exp());
    let s1 = s * (1.0 - s);
    if s1 == 0.0 {
        return (s, 0.0, 0.0);
    }
    let s2 = s1 * (1.0 - 2.0 * s);
    let du = 1.0 / ((1.0 - x) * (1.0 - x)) + 1.0 / (x * x);
    let d2u = 2.0 / (1.0 - x).powi(3) - 2.0 / x.powi(3);
    (s, s1 * du, s2 * du * du + s1 * d2u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_differences() {
        let z = SmoothCutoff::new(0.5, 1.0);
        let _ = SmoothCutoff::new(1e-4, 0.1).eval(1e-3);
        for i in 1..50 {
            let r = 0.5 + 0.5 * i as f64 / 50.0;
            let h = 1e-5;
            let (_, d, d2) = z.eval(r);
            let fd = (z.eval(r + h).0 - z.eval(r - h).0) / (2.0 * h);
            let fd2 = (z.eval(r + h).1 - z.eval(r - h).1) / (2.0 * h);
            assert!((d - fd).abs() < 1e-6 * (1.0 + d.abs()), "r={r}");
            assert!((d2 - fd2).abs() < 1e-5 * (1.0 + d2.abs()), "r={r}");
        }
        assert_eq!(z.eval(0.3), (1.0, 0.0, 0.0));
        assert_eq!(z.eval(1.2), (0.0, 0.0, 0.0));
    }
}
