//! Free-surface profiles y = η(x) on the half period (0, Λ/2) and their
//! straightened counterparts.

use std::fmt;
use std::sync::Arc;

use crate::cutoff::smooth_step;
use crate::error::{Error, Result};
use crate::specfun::bracketed_newton;

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Half-period surface profile. The domain is {0 < x < Λ/2, 0 < y < η(x)}
/// with the crest at (0, η0).
#[derive(Clone)]
pub struct SurfaceProfile {
    pub lambda: f64,
    pub a0: f64,
    pub alpha: f64,
    pub eta0: f64,
    eta: ScalarFn,
    eta_p: ScalarFn,
    eta_pp: ScalarFn,
    depth: Option<ScalarFn>,
}

impl fmt::Debug for SurfaceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceProfile")
            .field("lambda", &self.lambda)
            .field("a0", &self.a0)
            .field("alpha", &self.alpha)
            .field("eta0", &self.eta0)
            .finish_non_exhaustive()
    }
}

/// Near-corner fit of the profile slope.
#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    /// Fitted exponent of |η′ + a0| against x.
    pub exponent: f64,
    /// max |η′(x) + a0| / x^α over the sample.
    pub constant: f64,
}

impl SurfaceProfile {
    pub fn new(
        lambda: f64,
        a0: f64,
        alpha: f64,
        eta0: f64,
        eta: ScalarFn,
        eta_p: ScalarFn,
        eta_pp: ScalarFn,
    ) -> Result<Self> {
        if !(lambda > 0.0 && a0 > 0.0 && eta0 > 0.0) {
            return Err(Error::Geometry(format!(
                "need Λ, a0, η0 > 0 (got {lambda}, {a0}, {eta0})"
            )));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Geometry(format!("Hölder exponent {alpha} outside (0, 1]")));
        }
        let p = Self { lambda, a0, alpha, eta0, eta, eta_p, eta_pp, depth: None };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let l = self.half_period();
        let n = 400;
        for i in 1..=n {
            let x = l * i as f64 / n as f64;
            let y = self.eta(x);
            if !(y > 0.0) || !y.is_finite() {
                return Err(Error::Geometry(format!("η({x}) = {y} is not positive")));
            }
            if !(y < self.eta0) {
                return Err(Error::Geometry(format!(
                    "η({x}) = {y} reaches the crest height {}",
                    self.eta0
                )));
            }
        }
        let e0 = (self.eta(1e-14 * l) - self.eta0).abs();
        if e0 > 1e-10 {
            return Err(Error::Geometry(format!("η(0+) differs from η0 by {e0}")));
        }
        let tail = self.eta_p(l).abs();
        if tail > 1e-10 {
            return Err(Error::Geometry(format!("η′(Λ/2) = {tail}, must vanish")));
        }
        Ok(())
    }

    /// Supplies η0 − η(x) in a form free of cancellation near the crest.
    pub fn with_depth(mut self, depth: ScalarFn) -> Self {
        self.depth = Some(depth);
        self
    }

    /// η0 − η(x).
    pub fn depth(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match &self.depth {
            Some(d) => d(x),
            None => self.eta0 - (self.eta)(x),
        }
    }

    pub fn half_period(&self) -> f64 {
        0.5 * self.lambda
    }

    pub fn eta(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.eta0;
        }
        (self.eta)(x)
    }

    pub fn eta_p(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return -self.a0;
        }
        (self.eta_p)(x)
    }

    pub fn eta_pp(&self, x: f64) -> f64 {
        (self.eta_pp)(x)
    }

    /// Polar angle of the surface point (x, η(x)) seen from the crest,
    /// measured from the downward vertical.
    pub fn angle_at_x(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return (1.0 / self.a0).atan();
        }
        x.atan2(self.depth(x))
    }

    /// Abscissa of the surface point at distance r from the crest.
    pub fn x_at_radius(&self, r: f64) -> Result<f64> {
        let l = self.half_period();
        let f = |x: f64| {
            let d = self.depth(x);
            (x * x + d * d - r * r, 2.0 * x - 2.0 * d * self.eta_p(x))
        };
        if f(l).0 < 0.0 {
            return Err(Error::Geometry(format!("radius {r} exceeds the surface arc")));
        }
        let guess = r / (1.0 + self.a0 * self.a0).sqrt();
        let (mut a, mut b) = (0.0, l);
        // Tight initial bracket around the straight-corner guess when it holds.
        if guess < l && f(0.5 * guess).0 < 0.0 && f((2.0 * guess).min(l)).0 >= 0.0 {
            a = 0.5 * guess;
            b = (2.0 * guess).min(l);
        }
        bracketed_newton(f, a, b, 1e-15 * r.max(1e-300))
    }

    /// Surface angle θ_S(r).
    pub fn angle_at_radius(&self, r: f64) -> Result<f64> {
        Ok(self.angle_at_x(self.x_at_radius(r)?))
    }

    /// Log-log regression of |η′ + a0| against x on (x_lo, x_hi).
    pub fn slope_fit(&self, x_lo: f64, x_hi: f64) -> SlopeFit {
        let n = 24;
        let mut pts = Vec::with_capacity(n);
        let mut constant: f64 = 0.0;
        for i in 0..n {
            let x = x_lo * (x_hi / x_lo).powf(i as f64 / (n - 1) as f64);
            let d = (self.eta_p(x) + self.a0).abs();
            constant = constant.max(d / x.powf(self.alpha));
            if d > 0.0 {
                pts.push((x.ln(), d.ln()));
            }
        }
        let exponent = if pts.len() >= 2 { linear_fit(&pts).0 } else { f64::INFINITY };
        SlopeFit { exponent, constant }
    }
}

/// Least-squares slope and intercept.
pub(crate) fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Profile that is exactly straight near the crest and equal to a base
/// profile away from it, with a matching Robin coefficient χ.
#[derive(Clone)]
pub struct StraightenedProfile {
    pub base: SurfaceProfile,
    pub delta: f64,
    /// ξ as a profile in its own right.
    pub xi: SurfaceProfile,
    rho: ScalarFn,
    rho0: f64,
    blend: (f64, f64),
}

impl fmt::Debug for StraightenedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StraightenedProfile")
            .field("base", &self.base)
            .field("delta", &self.delta)
            .field("blend", &self.blend)
            .finish_non_exhaustive()
    }
}

/// Sup-norm deviations of a straightened profile from its base.
#[derive(Debug, Clone, Copy)]
pub struct StraighteningDeviation {
    pub profile: f64,
    pub coefficient: f64,
    /// profile / δ^α
    pub profile_constant: f64,
    /// coefficient / δ^α
    pub coefficient_constant: f64,
}

/// Blend weight b(x): 0 on (0, x0), 1 beyond x1.
fn blend_weight(x: f64, (x0, x1): (f64, f64)) -> (f64, f64, f64) {
    let w = x1 - x0;
    let (s, ds, d2s) = smooth_step((x - x0) / w);
    (s, ds / w, d2s / (w * w))
}

/// Straightening with ξ = η0 − a0·x and χ = ρ0 on (0, 3δ), ξ = η and χ = ρ
/// beyond min(6δ, Λ/2 − δ), blended by a C^∞ step in between.
pub fn build_straightened(
    profile: &SurfaceProfile,
    rho: ScalarFn,
    rho0: f64,
    delta: f64,
) -> Result<StraightenedProfile> {
    let l = profile.half_period();
    if !(delta > 0.0) || 3.0 * delta >= l - delta {
        return Err(Error::Geometry(format!(
            "matching radius δ = {delta} too large for half period {l}"
        )));
    }
    let blend = (3.0 * delta, (6.0 * delta).min(l - delta));
    let (eta0, a0) = (profile.eta0, profile.a0);
    let base = profile.clone();
    let b1 = base.clone();
    let b2 = base.clone();
    let b3 = base.clone();
    let xi: ScalarFn = Arc::new(move |x| {
        let (b, _, _) = blend_weight(x, blend);
        let line = eta0 - a0 * x;
        if b == 0.0 {
            return line;
        }
        (1.0 - b) * line + b * b1.eta(x)
    });
    let xi_p: ScalarFn = Arc::new(move |x| {
        let (b, db, _) = blend_weight(x, blend);
        if b == 0.0 {
            return -a0;
        }
        let line = eta0 - a0 * x;
        -(1.0 - b) * a0 + b * b2.eta_p(x) + db * (b2.eta(x) - line)
    });
    let xi_pp: ScalarFn = Arc::new(move |x| {
        let (b, db, d2b) = blend_weight(x, blend);
        if b == 0.0 {
            return 0.0;
        }
        let line = eta0 - a0 * x;
        b * b3.eta_pp(x) + 2.0 * db * (b3.eta_p(x) + a0) + d2b * (b3.eta(x) - line)
    });
    let b4 = base.clone();
    let depth: ScalarFn = Arc::new(move |x| {
        let (b, _, _) = blend_weight(x, blend);
        (1.0 - b) * a0 * x + b * b4.depth(x)
    });
    let xi = SurfaceProfile::new(profile.lambda, a0, profile.alpha, eta0, xi, xi_p, xi_pp)?.with_depth(depth);
    Ok(StraightenedProfile { base, delta, xi, rho, rho0, blend })
}

impl StraightenedProfile {
    /// Blend interval (x0, x1).
    pub fn blend_interval(&self) -> (f64, f64) {
        self.blend
    }

    pub fn chi(&self, x: f64) -> f64 {
        let (b, _, _) = blend_weight(x, self.blend);
        if b == 0.0 {
            return self.rho0;
        }
        (1.0 - b) * self.rho0 + b * (self.rho)(x)
    }

    pub fn chi_fn(&self) -> ScalarFn {
        let me = self.clone();
        Arc::new(move |x| me.chi(x))
    }

    pub fn rho(&self, x: f64) -> f64 {
        (self.rho)(x)
    }

    /// Sampled sup |ξ − η| + sup |ξ′ − η′| and sup |χ − ρ| over (0, Λ/2].
    pub fn deviation(&self) -> StraighteningDeviation {
        let n = 2000;
        let hi = self.blend.1;
        let (mut d0, mut d1, mut dc): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for i in 1..=n {
            let x = hi * i as f64 / n as f64;
            d0 = d0.max((self.xi.eta(x) - self.base.eta(x)).abs());
            d1 = d1.max((self.xi.eta_p(x) - self.base.eta_p(x)).abs());
            dc = dc.max((self.chi(x) - self.rho(x)).abs());
        }
        let scale = self.delta.powf(self.base.alpha);
        StraighteningDeviation {
            profile: d0 + d1,
            coefficient: dc,
            profile_constant: (d0 + d1) / scale,
            coefficient_constant: dc / scale,
        }
    }
}

/// Profile straight on (0, straight_until) with slope −a0, blended to a flat
/// tail. Used as the model domain.
pub fn straight_corner_profile(lambda: f64, eta0: f64, a0: f64, straight_until: f64) -> Result<SurfaceProfile> {
    crate::waterwave::expansion_profile(&crate::waterwave::ExpansionParams {
        lambda,
        eta0,
        a0,
        a1: 0.0,
        a2: 0.0,
        cutoff: straight_until,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stokes() -> SurfaceProfile {
        crate::waterwave::profile_from_expansion(0.3, -0.2, 0.5).unwrap()
    }

    #[test]
    fn radius_inversion() {
        let p = stokes();
        for &r in &[1e-8, 1e-3, 0.1, 0.6] {
            let x = p.x_at_radius(r).unwrap();
            let d = p.eta0 - p.eta(x);
            assert!(((x * x + d * d).sqrt() - r).abs() < 1e-12 * r.max(1e-3));
        }
        let th = p.angle_at_radius(1e-9).unwrap();
        assert!((th - std::f64::consts::PI / 3.0).abs() < 1e-3);
    }

    #[test]
    fn straightened_is_exact_near_corner_and_far_away() {
        let p = stokes();
        let rho: ScalarFn = Arc::new(|x| 3f64.sqrt() / 2.0 + 0.1 * x.sqrt());
        let s = build_straightened(&p, rho, 3f64.sqrt() / 2.0, 0.1).unwrap();
        for &x in &[1e-6, 0.05, 0.29] {
            assert_eq!(s.xi.eta_p(x), -p.a0);
            assert_eq!(s.chi(x), 3f64.sqrt() / 2.0);
        }
        for &x in &[0.61, 1.0, 1.45] {
            assert_eq!(s.xi.eta(x), p.eta(x));
            assert_eq!(s.chi(x), s.rho(x));
        }
        assert!(build_straightened(&p, s.rho.clone(), s.rho0, 0.4).is_err());
    }
}
