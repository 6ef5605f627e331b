//! Extreme Stokes wave instantiation: the 120° crest constants, the Robin
//! coefficient built from linearized wave quantities, and synthetic profiles
//! following the singular surface expansion η′ = −1/√3 + a1·x^{1/2} + a2·x.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cutoff::smooth_step;
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::solver2d::profile::{linear_fit, ScalarFn, SurfaceProfile};
use crate::specfun::{bracketed_newton, CornerData};

pub const STOKES_ALPHA_STAR: f64 = PI / 3.0;
pub const STOKES_HOLDER: f64 = 0.5;

pub fn stokes_a0() -> f64 {
    1.0 / 3f64.sqrt()
}

pub fn stokes_rho0() -> f64 {
    0.5 * 3f64.sqrt()
}

/// Corner data of the extreme Stokes crest: α* = π/3, ρ0 = √3/2, α = 1/2.
pub fn stokes_corner_params(gamma: f64) -> CornerData {
    CornerData::new(STOKES_ALPHA_STAR, stokes_rho0(), gamma, STOKES_HOLDER)
        .expect("the Stokes corner is admissible")
}

fn tau1_equation(t: f64) -> (f64, f64) {
    let (s, c) = (0.5 * PI * t).sin_cos();
    let k = 1.0 / 3f64.sqrt();
    (t * s + k * c, s + 0.5 * PI * t * c - 0.5 * PI * k * s)
}

/// Smallest positive root of τ = −(1/√3)·cot(πτ/2).
pub fn tau1_root() -> f64 {
    bracketed_newton(tau1_equation, 1.0, 2.0, 1e-15).expect("sign change on (1, 2)")
}

pub fn tau1_residual(t: f64) -> f64 {
    tau1_equation(t).0.abs()
}

/// Parameters of a synthetic profile with
/// η′ = (−a0 + a1·x^{1/2} + a2·x)(1 − B(x)), B a C^∞ step from `cutoff` to Λ/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExpansionParams {
    pub lambda: f64,
    pub eta0: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub cutoff: f64,
}

impl Default for ExpansionParams {
    fn default() -> Self {
        Self { lambda: 3.0, eta0: 1.0, a0: stokes_a0(), a1: 0.0, a2: 0.0, cutoff: 0.5 }
    }
}

#[derive(Clone, Copy)]
struct Expansion {
    p: ExpansionParams,
    half: f64,
}

impl Expansion {
    fn poly(&self, x: f64) -> f64 {
        -self.p.a0 + self.p.a1 * x.sqrt() + self.p.a2 * x
    }

    fn step(&self, x: f64) -> (f64, f64) {
        let w = self.half - self.p.cutoff;
        let (s, ds, _) = smooth_step((x - self.p.cutoff) / w);
        (s, ds / w)
    }

    fn slope(&self, x: f64) -> f64 {
        self.poly(x) * (1.0 - self.step(x).0)
    }

    fn curvature(&self, x: f64) -> f64 {
        let (b, db) = self.step(x);
        let dp = 0.5 * self.p.a1 / x.sqrt() + self.p.a2;
        dp * (1.0 - b) - self.poly(x) * db
    }

    /// Closed form of η on [0, cutoff].
    fn head(&self, x: f64) -> f64 {
        let p = &self.p;
        p.eta0 - p.a0 * x + 2.0 / 3.0 * p.a1 * x * x.sqrt() + 0.5 * p.a2 * x * x
    }

    fn depth(&self, x: f64, gl: &GaussLegendre) -> f64 {
        if x <= self.p.cutoff {
            let p = &self.p;
            return p.a0 * x - 2.0 / 3.0 * p.a1 * x * x.sqrt() - 0.5 * p.a2 * x * x;
        }
        self.p.eta0 - self.height(x, gl)
    }

    fn height(&self, x: f64, gl: &GaussLegendre) -> f64 {
        let c = self.p.cutoff;
        if x <= c {
            return self.head(x);
        }
        let x = x.min(self.half);
        let panels = 16;
        let breaks: Vec<f64> = (0..=panels).map(|i| c + (x - c) * i as f64 / panels as f64).collect();
        self.head(c) + gl.composite(&breaks, |s| self.slope(s))
    }
}

/// Synthetic profile on the default period Λ = 3 with crest height 1.
pub fn profile_from_expansion(a1: f64, a2: f64, cutoff: f64) -> Result<SurfaceProfile> {
    expansion_profile(&ExpansionParams { a1, a2, cutoff, ..Default::default() })
}

pub fn expansion_profile(p: &ExpansionParams) -> Result<SurfaceProfile> {
    let half = 0.5 * p.lambda;
    if !(p.cutoff > 0.0 && p.cutoff < half) {
        return Err(Error::Geometry(format!(
            "cutoff {} must lie in (0, Λ/2 = {half})",
            p.cutoff
        )));
    }
    let e = Expansion { p: *p, half };
    let gl = Arc::new(GaussLegendre::new(20));
    let alpha = if p.a1 != 0.0 { 0.5 } else { 1.0 };
    let gl2 = gl.clone();
    Ok(SurfaceProfile::new(
        p.lambda,
        p.a0,
        alpha,
        p.eta0,
        Arc::new(move |x| e.height(x, &gl)),
        Arc::new(move |x| e.slope(x)),
        Arc::new(move |x| e.curvature(x)),
    )?
    .with_depth(Arc::new(move |x| e.depth(x, &gl2))))
}

/// Linearized wave data entering the Robin coefficient.
#[derive(Clone)]
pub struct StokesLinearization {
    /// ω′ as a function of the stream function.
    pub omega_prime: ScalarFn,
    /// Vorticity value on the free surface.
    pub omega_surface: f64,
    /// ψ_y on the surface as a function of x.
    pub psi_y: ScalarFn,
    /// Bernoulli constant.
    pub r_bernoulli: f64,
    pub m: f64,
    pub profile: SurfaceProfile,
}

impl StokesLinearization {
    /// Constant vorticity, R = η0 and ψ_y from the crest expansion
    /// ψ = m − (2/3)r^{3/2}cos(3θ/2), which gives ψ_y = r^{1/2}cos(θ/2).
    pub fn from_corner_expansion(profile: SurfaceProfile, omega: f64, m: f64) -> Self {
        let p = profile.clone();
        let psi_y: ScalarFn = Arc::new(move |x| {
            let d = p.depth(x);
            let r = (x * x + d * d).sqrt();
            r.sqrt() * (0.5 * p.angle_at_x(x)).cos()
        });
        Self {
            omega_prime: Arc::new(|_| 0.0),
            omega_surface: omega,
            psi_y,
            r_bernoulli: profile.eta0,
            m,
            profile,
        }
    }

    /// Stream function of the crest expansion.
    pub fn psi(&self, x: f64, y: f64) -> f64 {
        let d = self.profile.eta0 - y;
        let r = (x * x + d * d).sqrt();
        let th = x.atan2(d);
        self.m - 2.0 / 3.0 * r.powf(1.5) * (1.5 * th).cos()
    }

    /// Potential σ = −ω′(ψ) at a point.
    pub fn sigma(&self, x: f64, y: f64) -> f64 {
        -(self.omega_prime)(self.psi(x, y))
    }

    pub fn sigma_is_zero(&self) -> bool {
        let l = self.profile.half_period();
        (0..=8).all(|i| self.sigma(l * i as f64 / 8.0, 0.5 * self.profile.eta0) == 0.0)
    }
}

/// ρ(x) = r[1 − ω(1+η′²)ψ_y + η″ψ_y²] / [2(R − η)√(1+η′²)].
pub fn rho_coefficient(lin: &StokesLinearization) -> Result<ScalarFn> {
    let p = &lin.profile;
    let l = p.half_period();
    for i in 1..=400 {
        let x = l * i as f64 / 400.0;
        let gap = lin.r_bernoulli - p.eta(x);
        if !(gap > 0.0) {
            return Err(Error::Stagnation(format!("R − η = {gap} at x = {x}")));
        }
    }
    let lin = lin.clone();
    Ok(Arc::new(move |x| rho_at(&lin, x)))
}

fn rho_at(lin: &StokesLinearization, x: f64) -> f64 {
    let p = &lin.profile;
    let d = p.depth(x);
    let r = (x * x + d * d).sqrt();
    let ep = p.eta_p(x);
    let q = 1.0 + ep * ep;
    let py = (lin.psi_y)(x);
    let num = 1.0 - lin.omega_surface * q * py + p.eta_pp(x) * py * py;
    // R − η written as (R − η0) + (η0 − η) to keep accuracy at the crest.
    let gap = (lin.r_bernoulli - p.eta0) + d;
    r * num / (2.0 * gap * q.sqrt())
}

/// Fitted exponent of |ρ(x) − ρ0| against x on (x_lo, x_hi).
pub fn rho_limit_exponent(rho: &ScalarFn, rho0: f64, x_lo: f64, x_hi: f64) -> f64 {
    let n = 24;
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = x_lo * (x_hi / x_lo).powf(i as f64 / (n - 1) as f64);
            (x.ln(), (rho(x) - rho0).abs().ln())
        })
        .collect();
    linear_fit(&pts).0
}
