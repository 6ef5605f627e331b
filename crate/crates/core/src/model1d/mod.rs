//! 1D model problems for the h-component: the half-line operator
//! M h = −r⁻¹(r h′)′ − κ² r⁻² h with the γ-phase extension, and the interval
//! (0, δ) closed by the Robin condition h′(δ) + (τ − α(τ⁻¹))h(δ) = 0.

mod fd;

pub use fd::{halfline_fd_oracle, interval_fd_oracle, FdSpectrum, LogGrid, TridiagPencil};

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::specfun::{bessel_all, bessel_scaled, CornerData};

/// Which closed form the half-line ladder follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// τ_k = e^{(γ+γ_κ+kπ)/κ}
    Plain,
    /// τ_k = 2 e^{(γ+γ_κ+kπ)/κ}
    FactorTwo,
}

impl Normalization {
    pub fn factor(self) -> f64 {
        match self {
            Normalization::Plain => 1.0,
            Normalization::FactorTwo => 2.0,
        }
    }
}

/// Closed-form half-line ladder under both normalization candidates.
#[derive(Debug, Clone)]
pub struct HalfLineLadder {
    pub corner: CornerData,
    pub k_range: RangeInclusive<i64>,
    /// Plain normalization, confirmed by the FD oracle.
    pub tau: Vec<f64>,
    pub tau_factor_two: Vec<f64>,
    pub ratio: f64,
}

impl HalfLineLadder {
    pub fn candidates(&self, norm: Normalization) -> Vec<f64> {
        self.tau.iter().map(|t| t * norm.factor()).collect()
    }
}

pub fn halfline_ladder(corner: &CornerData, k_range: RangeInclusive<i64>) -> HalfLineLadder {
    let tau: Vec<f64> = k_range.clone().map(|k| corner.ladder(k)).collect();
    HalfLineLadder {
        corner: corner.clone(),
        tau_factor_two: tau.iter().map(|t| 2.0 * t).collect(),
        tau,
        k_range,
        ratio: corner.ladder_ratio(),
    }
}

/// Decide which normalization an FD spectrum follows: for each candidate, the
/// mean relative distance of the oracle values to their nearest ladder entry.
pub fn classify_normalization(corner: &CornerData, taus: &[f64]) -> (Normalization, f64, f64) {
    let dist = |norm: Normalization| {
        let f = norm.factor();
        taus.iter()
            .map(|&t| {
                let k = corner.ladder_index(t / f);
                (t / (f * corner.ladder(k)) - 1.0).abs()
            })
            .sum::<f64>()
            / taus.len().max(1) as f64
    };
    let p = dist(Normalization::Plain);
    let f2 = dist(Normalization::FactorTwo);
    if p <= f2 {
        (Normalization::Plain, p, f2)
    } else {
        (Normalization::FactorTwo, p, f2)
    }
}

/// Robin correction α as a function of s = τ⁻¹.
pub type AlphaFn<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

/// α ≡ 0.
pub fn alpha_zero(_s: f64) -> f64 {
    0.0
}

/// e^{2τδ}·Q(τ), finite for every τδ.
fn q_scaled(corner: &CornerData, tau: f64, delta: f64, alpha_fn: AlphaFn) -> Result<f64> {
    let z = tau * delta;
    let [k, kp, i, ip] = bessel_scaled(corner.kappa, z)?;
    let beta = tau - alpha_fn(1.0 / tau);
    let num = tau * kp + beta * k;
    let den = tau * ip + beta * i;
    let scale = (tau * ip).abs() + (beta * i).abs();
    if den.abs() <= 1e-13 * scale || !den.is_finite() {
        return Err(Error::SingularClosure(format!(
            "Robin closure degenerate at tau = {tau}, delta = {delta}"
        )));
    }
    Ok(num / den)
}

/// Q(τ) such that h = K_{iκ}(τr) − Q Ĩ_{iκ}(τr) satisfies the Robin condition at δ.
pub fn interval_q(corner: &CornerData, tau: f64, delta: f64, alpha_fn: AlphaFn) -> Result<f64> {
    Ok(q_scaled(corner, tau, delta, alpha_fn)? * (-2.0 * tau * delta).exp())
}

/// ln|Q(τ)| + 2τδ, the exponent-free part of Q.
pub fn interval_log_q_excess(
    corner: &CornerData,
    tau: f64,
    delta: f64,
    alpha_fn: AlphaFn,
) -> Result<f64> {
    Ok(q_scaled(corner, tau, delta, alpha_fn)?.abs().ln())
}

/// ψ(τ) = arctan(Q sinh(πκ)/π).
pub fn interval_psi(corner: &CornerData, tau: f64, delta: f64, alpha_fn: AlphaFn) -> Result<f64> {
    let q = interval_q(corner, tau, delta, alpha_fn)?;
    Ok((q * (PI * corner.kappa).sinh() / PI).atan())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalEntry {
    pub k: i64,
    pub tau_hat: f64,
    pub tau_closed: f64,
    pub psi: f64,
    /// |κ ln τ̂ − (γ_κ + γ − ψ(τ̂) + kπ)|
    pub residual: f64,
    pub q: f64,
}

impl IntervalEntry {
    pub fn relative_deviation(&self) -> f64 {
        (self.tau_hat - self.tau_closed).abs() / self.tau_closed
    }
}

#[derive(Debug, Clone)]
pub struct IntervalSpectrum {
    pub corner: CornerData,
    pub delta: f64,
    pub entries: Vec<IntervalEntry>,
}

#[derive(Debug, Clone, Copy)]
pub struct IntervalOptions {
    /// Smallest admissible τδ for the closed-form regime.
    pub min_tau_delta: f64,
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for IntervalOptions {
    fn default() -> Self {
        Self {
            min_tau_delta: 8.0,
            max_iter: 200,
            rel_tol: 1e-14,
        }
    }
}

pub fn interval_eigenvalues(
    corner: &CornerData,
    delta: f64,
    alpha_fn: AlphaFn,
    k_range: RangeInclusive<i64>,
) -> Result<IntervalSpectrum> {
    interval_eigenvalues_with(corner, delta, alpha_fn, k_range, IntervalOptions::default())
}

/// Fixed-point solve of κ ln τ = γ_κ + γ − ψ(τ) + kπ for each k.
pub fn interval_eigenvalues_with(
    corner: &CornerData,
    delta: f64,
    alpha_fn: AlphaFn,
    k_range: RangeInclusive<i64>,
    opts: IntervalOptions,
) -> Result<IntervalSpectrum> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} must be positive")));
    }
    let mut entries = Vec::new();
    for k in k_range {
        let tau_closed = corner.ladder(k);
        if tau_closed * delta < opts.min_tau_delta {
            return Err(Error::InvalidParameter(format!(
                "tau*delta = {} below {} for k = {k}",
                tau_closed * delta,
                opts.min_tau_delta
            )));
        }
        let base = corner.gamma_kappa + corner.gamma + k as f64 * PI;
        let mut tau = tau_closed;
        let mut damping = 1.0;
        let mut last_step = f64::INFINITY;
        let mut converged = false;
        for _ in 0..opts.max_iter {
            let psi = interval_psi(corner, tau, delta, alpha_fn)?;
            let target = ((base - psi) / corner.kappa).exp();
            let step = (target - tau).abs() / tau;
            if step > last_step {
                damping *= 0.5;
            }
            last_step = step;
            tau += damping * (target - tau);
            if step <= opts.rel_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence(format!(
                "secular fixed point for k = {k} did not settle"
            )));
        }
        let psi = interval_psi(corner, tau, delta, alpha_fn)?;
        let q = interval_q(corner, tau, delta, alpha_fn)?;
        entries.push(IntervalEntry {
            k,
            tau_hat: tau,
            tau_closed,
            psi,
            residual: (corner.kappa * tau.ln() - (base - psi)).abs(),
            q,
        });
    }
    Ok(IntervalSpectrum {
        corner: corner.clone(),
        delta,
        entries,
    })
}

impl IntervalSpectrum {
    pub fn entry(&self, k: i64) -> Result<&IntervalEntry> {
        self.entries
            .iter()
            .find(|e| e.k == k)
            .ok_or_else(|| Error::Domain(format!("mode {k} not in spectrum")))
    }
}

/// Φ_k(r) = K_{iκ}(τ̂r) − Q Ĩ_{iκ}(τ̂r) and its r-derivative.
pub fn interval_eigenfunction_with_deriv(
    spectrum: &IntervalSpectrum,
    k: i64,
    r: f64,
) -> Result<(f64, f64)> {
    let e = spectrum.entry(k)?;
    let kap = spectrum.corner.kappa;
    let z = e.tau_hat * r;
    if e.q == 0.0 {
        let [k0, kp, _, _] = bessel_scaled(kap, z)?;
        let ez = (-z).exp();
        return Ok((k0 * ez, e.tau_hat * kp * ez));
    }
    let [k0, kp, i, ip] = bessel_all(kap, z)?;
    Ok((k0 - e.q * i, e.tau_hat * (kp - e.q * ip)))
}

pub fn interval_eigenfunction(spectrum: &IntervalSpectrum, k: i64, r_samples: &[f64]) -> Result<Vec<f64>> {
    r_samples
        .iter()
        .map(|&r| {
            if !(r > 0.0 && r <= spectrum.delta * (1.0 + 1e-12)) {
                return Err(Error::Domain(format!("radius {r} outside (0, delta]")));
            }
            interval_eigenfunction_with_deriv(spectrum, k, r).map(|p| p.0)
        })
        .collect()
}

/// Relative Robin residual |Φ′(δ) + (τ−α)Φ(δ)| / (|Φ′(δ)| + |(τ−α)Φ(δ)|).
pub fn robin_residual(spectrum: &IntervalSpectrum, k: i64, alpha_fn: AlphaFn) -> Result<f64> {
    let e = spectrum.entry(k)?;
    let (z, d) = (e.tau_hat * spectrum.delta, spectrum.delta);
    let kap = spectrum.corner.kappa;
    let beta = e.tau_hat - alpha_fn(1.0 / e.tau_hat);
    // Evaluate in scaled form: e^{z}Φ = e^{z}K − (e^{2z}Q)(e^{-z}Ĩ).
    let [k0, kp, i, ip] = bessel_scaled(kap, z)?;
    let qs = q_scaled(&spectrum.corner, e.tau_hat, d, alpha_fn)?;
    let phi = k0 - qs * i;
    let dphi = e.tau_hat * (kp - qs * ip);
    let scale = dphi.abs() + (beta * phi).abs() + e.tau_hat * (kp.abs() + (qs * ip).abs());
    Ok((dphi + beta * phi).abs() / scale)
}

/// Which weighted moment of Φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Moment {
    /// ∫₀^δ Φ² r^{1+2β} dr ~ τ^{−2−2β}, β > −1
    Value,
    /// ∫₀^δ |Φ′|² r^{1+2β} dr ~ τ^{−2β}, β > 0
    FirstDerivative,
    /// ∫₀^δ |Φ″|² r^{1+2β} dr ~ τ^{2−2β}, β > 1
    SecondDerivative,
}

impl Moment {
    fn min_beta(self) -> f64 {
        match self {
            Moment::Value => -1.0,
            Moment::FirstDerivative => 0.0,
            Moment::SecondDerivative => 1.0,
        }
    }

    /// Power p such that τ^p · moment is O(1).
    fn normalizing_power(self, beta: f64) -> f64 {
        match self {
            Moment::Value => 2.0 + 2.0 * beta,
            Moment::FirstDerivative => 2.0 * beta,
            Moment::SecondDerivative => 2.0 * beta - 2.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentRow {
    pub k: i64,
    pub tau_hat: f64,
    pub raw: f64,
    /// raw · τ̂^{p}
    pub normalized: f64,
}

/// Weighted moments of each Φ_k, normalized by the predicted power of τ̂_k.
pub fn moment_scalings(spectrum: &IntervalSpectrum, moment: Moment, beta: f64) -> Result<Vec<MomentRow>> {
    if !(beta > moment.min_beta()) {
        return Err(Error::Domain(format!(
            "beta = {beta} outside the range beta > {} for {moment:?}",
            moment.min_beta()
        )));
    }
    let g = GaussLegendre::new(16);
    let kap = spectrum.corner.kappa;
    spectrum
        .entries
        .iter()
        .map(|e| {
            let tau = e.tau_hat;
            // In t = ln(τr): integrand has factor (τr)^{2+2β} (value) or similar,
            // so start where it is below 1e-20 relative.
            let decay = 2.0 + 2.0 * (beta - moment.min_beta() - 1.0).max(-0.99);
            let s_lo = (-46.0 / decay).exp().max(1e-150);
            let s_hi = tau * spectrum.delta;
            let n_panels = ((s_hi / s_lo).ln() / 0.2).ceil() as usize;
            let (a, b) = (s_lo.ln(), s_hi.ln());
            let mut acc = 0.0;
            for p in 0..n_panels {
                let u0 = a + (b - a) * p as f64 / n_panels as f64;
                let u1 = a + (b - a) * (p + 1) as f64 / n_panels as f64;
                for (u, w) in g.on(u0, u1) {
                    let s = u.exp();
                    let r = s / tau;
                    let (phi, dphi) = interval_eigenfunction_with_deriv(spectrum, e.k, r)?;
                    let f = match moment {
                        Moment::Value => phi * phi,
                        Moment::FirstDerivative => dphi * dphi,
                        Moment::SecondDerivative => {
                            let d2 = tau * tau * phi - dphi / r - kap * kap * phi / (r * r);
                            d2 * d2
                        }
                    };
                    // dr = r du
                    acc += w * f * r.powf(2.0 + 2.0 * beta);
                }
            }
            Ok(MomentRow {
                k: e.k,
                tau_hat: tau,
                raw: acc,
                normalized: acc * tau.powf(moment.normalizing_power(beta)),
            })
        })
        .collect()
}

/// Fraction of ∫₀^δ Φ² r dr carried by r < c/τ̂.
pub fn localization_fraction(spectrum: &IntervalSpectrum, k: i64, c: f64) -> Result<f64> {
    let e = spectrum.entry(k)?;
    let g = GaussLegendre::new(16);
    let tau = e.tau_hat;
    let mass = |s_lo: f64, s_hi: f64| -> Result<f64> {
        let n = ((s_hi / s_lo).ln() / 0.2).ceil().max(1.0) as usize;
        let (a, b) = (s_lo.ln(), s_hi.ln());
        let mut acc = 0.0;
        for p in 0..n {
            let u0 = a + (b - a) * p as f64 / n as f64;
            let u1 = a + (b - a) * (p + 1) as f64 / n as f64;
            for (u, w) in g.on(u0, u1) {
                let r = u.exp() / tau;
                let (phi, _) = interval_eigenfunction_with_deriv(spectrum, k, r)?;
                acc += w * phi * phi * r * r;
            }
        }
        Ok(acc)
    };
    let s_delta = tau * spectrum.delta;
    let split = c.min(s_delta);
    let inner = mass(1e-12, split)?;
    let outer = if split < s_delta { mass(split, s_delta)? } else { 0.0 };
    Ok(inner / (inner + outer))
}

/// Coefficient C of the singular part of h solving (M + τ²)h = f:
/// C = (κ sinh πκ/π)^{1/2} ∫₀^∞ K_{iκ}(τr) f(r) r dr / (κ sin(γ + γ_κ − κ ln τ)).
///
/// On the ladder, sin(γ + γ_κ − κ ln τ) = (−1)^k sin(κ ln(τ_k/τ)).
/// `tau_k` selects the window (τ_k/q, qτ_k) with q the ladder ratio.
pub fn extension_constant(
    f: &dyn Fn(f64) -> f64,
    corner: &CornerData,
    tau: f64,
    tau_k: f64,
) -> Result<f64> {
    let q = corner.ladder_ratio();
    if !(tau > tau_k / q && tau < tau_k * q) {
        return Err(Error::Domain(format!(
            "tau = {tau} outside the window ({}, {})",
            tau_k / q,
            tau_k * q
        )));
    }
    let denom = corner.kappa * (corner.gamma + corner.gamma_kappa - corner.kappa * tau.ln()).sin();
    if (tau / tau_k - 1.0).abs() < 1e-13 || denom.abs() < 1e-14 {
        return Err(Error::Pole(format!("tau = {tau} sits on the ladder entry {tau_k}")));
    }
    let kap = corner.kappa;
    let g = GaussLegendre::new(20);
    // ∫ K(τr) f(r) r dr in s = τr, u = ln s: (1/τ²)∫ K(s) f(s/τ) s² du.
    let (a, b) = ((1e-14f64).ln(), (60.0f64).ln());
    let n = ((b - a) / 0.1).ceil() as usize;
    let mut acc = 0.0;
    for p in 0..n {
        let u0 = a + (b - a) * p as f64 / n as f64;
        let u1 = a + (b - a) * (p + 1) as f64 / n as f64;
        for (u, w) in g.on(u0, u1) {
            let s = u.exp();
            let [k, _, _, _] = bessel_scaled(kap, s)?;
            acc += w * k * (-s).exp() * f(s / tau) * s * s;
        }
    }
    let integral = acc / (tau * tau);
    let amp = (kap * (PI * kap).sinh() / PI).sqrt();
    Ok(amp * integral / denom)
}
