//! Finite-difference (P1, lumped mass) discretization of the radial operator in
//! t = ln r, where M + λ becomes −∂_t² − κ² − λe^{2t}. Eigenvalues are located
//! by Sturm counts on LDLᵀ pivots and refined by bisection.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{bessel_k, CornerData};

/// Symmetric tridiagonal pencil (A, B) with B diagonal positive.
#[derive(Debug, Clone)]
pub struct TridiagPencil {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub mass: Vec<f64>,
}

impl TridiagPencil {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of negative pivots of A + shift_a·e_last e_lastᵀ + c·B.
    pub fn negative_count(&self, c: f64, last_extra: f64) -> usize {
        let n = self.diag.len();
        let mut count = 0;
        let mut d_prev = 1.0;
        for i in 0..n {
            let mut d = self.diag[i] + c * self.mass[i];
            if i == n - 1 {
                d += last_extra;
            }
            if i > 0 {
                d -= self.off[i - 1] * self.off[i - 1] / d_prev;
            }
            if d == 0.0 {
                d = f64::EPSILON * (self.diag[i].abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
            d_prev = d;
        }
        count
    }

    /// Solve (A − λB)x = rhs with the Thomas algorithm.
    fn solve_shifted(&self, lambda: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut m = self.diag[0] - lambda * self.mass[0];
        c[0] = if n > 1 { self.off[0] / m } else { 0.0 };
        d[0] = rhs[0] / m;
        for i in 1..n {
            m = self.diag[i] - lambda * self.mass[i] - self.off[i - 1] * c[i - 1];
            if m == 0.0 {
                m = f64::EPSILON;
            }
            if i < n - 1 {
                c[i] = self.off[i] / m;
            }
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / m;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }

    /// B-normalized eigenvector for an (accurately known) eigenvalue.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let shift = lambda * (1.0 + 1e-11);
        let mut x = vec![1.0; n];
        for _ in 0..3 {
            let rhs: Vec<f64> = x.iter().zip(&self.mass).map(|(a, b)| a * b).collect();
            x = self.solve_shifted(shift, &rhs);
            let nrm = x
                .iter()
                .zip(&self.mass)
                .map(|(a, b)| a * a * b)
                .sum::<f64>()
                .sqrt();
            x.iter_mut().for_each(|v| *v /= nrm);
        }
        x
    }
}

/// Log-radius grid together with its pencil.
#[derive(Debug, Clone)]
pub struct LogGrid {
    pub t: Vec<f64>,
    pub pencil: TridiagPencil,
}

impl LogGrid {
    pub fn radii(&self) -> impl Iterator<Item = f64> + '_ {
        self.t.iter().map(|t| t.exp())
    }
}

/// Move t_min down (by less than π/κ) so that the phase κ(t − ln2) + γ is
/// ≡ π/2 mod π there; the phase boundary condition then becomes natural.
fn aligned_t_min(corner: &CornerData, t_min: f64) -> f64 {
    let p = corner.kappa * (t_min - std::f64::consts::LN_2) + corner.gamma;
    let excess = (p - 0.5 * PI).rem_euclid(PI);
    t_min - excess / corner.kappa
}

/// P1 pencil on the node set `t` (increasing). The last node is kept when
/// `keep_last` (Robin end), otherwise it carries a homogeneous Dirichlet value.
fn build_pencil(corner: &CornerData, t: &[f64], keep_last: bool) -> TridiagPencil {
    let n_all = t.len();
    let n = if keep_last { n_all } else { n_all - 1 };
    let k2 = corner.kappa * corner.kappa;
    let mut lump = vec![0.0; n_all];
    let mut diag = vec![0.0; n_all];
    let mut off = vec![0.0; n_all - 1];
    for e in 0..n_all - 1 {
        let h = t[e + 1] - t[e];
        diag[e] += 1.0 / h;
        diag[e + 1] += 1.0 / h;
        off[e] = -1.0 / h;
        lump[e] += 0.5 * h;
        lump[e + 1] += 0.5 * h;
    }
    let mass: Vec<f64> = (0..n).map(|i| lump[i] * (2.0 * t[i]).exp()).collect();
    let diag: Vec<f64> = (0..n).map(|i| diag[i] - k2 * lump[i]).collect();
    off.truncate(n.saturating_sub(1));
    TridiagPencil { diag, off, mass }
}

/// Negative spectrum of the half-line model on a uniform t-grid.
#[derive(Debug, Clone)]
pub struct FdSpectrum {
    /// Ascending (most negative first).
    pub lambdas: Vec<f64>,
    pub grid: LogGrid,
    pub warnings: Vec<String>,
}

impl FdSpectrum {
    /// √(−λ), ascending.
    pub fn taus(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.lambdas.iter().map(|l| (-l).sqrt()).collect();
        t.sort_by(|a, b| a.partial_cmp(b).unwrap());
        t
    }

    /// Weighted (r dr) correlation between the eigenvector at `lambda` and K_{iκ}(τr).
    pub fn correlation_with_k(&self, corner: &CornerData, lambda: f64) -> Result<f64> {
        let tau = (-lambda).sqrt();
        let v = self.grid.pencil.eigenvector(lambda);
        let m = &self.grid.pencil.mass;
        let mut vk = 0.0;
        let mut kk = 0.0;
        let mut vv = 0.0;
        for i in 0..v.len() {
            let k = bessel_k(corner.kappa, tau * self.grid.t[i].exp())?;
            vk += m[i] * v[i] * k;
            kk += m[i] * k * k;
            vv += m[i] * v[i] * v[i];
        }
        Ok((vk / (kk * vv).sqrt()).abs())
    }
}

/// Eigenvalues λ < 0 of M h = λ h on (r_min, r_max) with the γ-phase condition at
/// r_min and h(r_max) = 0, discretized on `n_points` uniform nodes in ln r.
pub fn halfline_fd_oracle(
    corner: &CornerData,
    r_min: f64,
    r_max: f64,
    n_points: usize,
) -> Result<FdSpectrum> {
    if !(r_min > 0.0 && r_max > r_min) || n_points < 10 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r_min < r_max and at least 10 points (got {r_min}, {r_max}, {n_points})"
        )));
    }
    let t0 = aligned_t_min(corner, r_min.ln());
    let t1 = r_max.ln();
    let dt = (t1 - t0) / (n_points - 1) as f64;
    let t: Vec<f64> = (0..n_points).map(|i| t0 + i as f64 * dt).collect();
    let pencil = build_pencil(corner, &t, false);
    let n_neg = pencil.negative_count(0.0, 0.0);
    let mut lambdas = Vec::with_capacity(n_neg);
    // Lower bound for the spectrum: grow until nothing lies below.
    let mut lo = -1.0;
    while pencil.negative_count(-lo, 0.0) > 0 {
        lo *= 16.0;
    }
    for j in 0..n_neg {
        // j-th eigenvalue: smallest λ with count(λ) ≥ j+1, bisected in ln(−λ).
        let mut a = (-lo).ln();
        let mut b = (1e-300f64).ln();
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let lam = -m.exp();
            if pencil.negative_count(-lam, 0.0) >= j + 1 {
                b = m;
            } else {
                a = m;
            }
            if (a - b).abs() < 1e-15 {
                break;
            }
        }
        lambdas.push(-(0.5 * (a + b)).exp());
    }
    let mut warnings = Vec::new();
    let gap = 2.0 * PI / corner.kappa;
    for w in lambdas.windows(2) {
        let d = ((w[0] / w[1]).ln()).abs();
        if d < 0.5 * gap {
            warnings.push(format!(
                "eigenvalues {} and {} closer than half the ladder gap",
                w[0], w[1]
            ));
        }
    }
    if dt * corner.kappa > 0.2 {
        warnings.push(format!(
            "grid step {dt} under-resolves the log-oscillation (kappa = {})",
            corner.kappa
        ));
    }
    Ok(FdSpectrum {
        lambdas,
        grid: LogGrid { t, pencil },
        warnings,
    })
}

/// Interval problem on (r_min, δ): γ-phase condition at r_min and Robin
/// h′(δ) + (τ − α(1/τ))h(δ) = 0. Returns τ for each requested ladder index.
///
/// The grid is uniform in t with step `dt` away from δ and refined near δ so
/// that the boundary layer e^{−τ(δ−r)} gets `layer_points` nodes per unit τ(δ−r).
pub fn interval_fd_oracle(
    corner: &CornerData,
    delta: f64,
    alpha_fn: &dyn Fn(f64) -> f64,
    ks: &[i64],
    dt: f64,
    layer_points: f64,
) -> Result<Vec<f64>> {
    if ks.is_empty() {
        return Ok(Vec::new());
    }
    let tau_max = ks
        .iter()
        .map(|&k| corner.ladder(k))
        .fold(0.0f64, f64::max)
        * corner.ladder_ratio().sqrt();
    let tau_min = ks
        .iter()
        .map(|&k| corner.ladder(k))
        .fold(f64::INFINITY, f64::min)
        / corner.ladder_ratio().sqrt();
    // r_min with τ r_min ≤ 1e-4 keeps the O((τr)²) phase error below 1e-8.
    let t_lo = aligned_t_min(corner, (1e-4 / tau_max).ln());
    let t_hi = delta.ln();
    if t_lo >= t_hi {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} too small for the requested ladder range"
        )));
    }
    // March down from δ: spacing min(dt, 1/(layer_points τ_max r)).
    let mut t = vec![t_hi];
    let mut cur = t_hi;
    while cur > t_lo {
        let r = cur.exp();
        let h = dt.min(1.0 / (layer_points * tau_max * r));
        cur -= h;
        t.push(cur.max(t_lo));
    }
    if let Some(last) = t.last_mut() {
        *last = t_lo;
    }
    t.reverse();
    t.dedup();
    let pencil = build_pencil(corner, &t, true);
    let count = |tau: f64| -> usize {
        let robin = delta * (tau - alpha_fn(1.0 / tau));
        pencil.negative_count(tau * tau, robin)
    };
    let q = corner.ladder_ratio().sqrt();
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        let guess = corner.ladder(k);
        let (mut a, mut b) = (guess / q, guess * q);
        if a < tau_min * 0.999 || b > tau_max * 1.001 {
            return Err(Error::InvalidParameter("internal bracket mismatch".into()));
        }
        let (ca, cb) = (count(a), count(b));
        if ca != cb + 1 {
            return Err(Error::Resolution(format!(
                "expected one eigenvalue near tau = {guess}, Sturm counts {ca} -> {cb}"
            )));
        }
        for _ in 0..200 {
            let m = (a * b).sqrt();
            if count(m) == ca {
                a = m;
            } else {
                b = m;
            }
            if b / a - 1.0 < 1e-14 {
                break;
            }
        }
        out.push((a * b).sqrt());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_count_matches_dense_spectrum() {
        // Small pencil: compare with a dense generalized eigen-solve.
        let corner = CornerData::new(PI / 3.0, 3f64.sqrt() / 2.0, 0.3, 0.5).unwrap();
        let t: Vec<f64> = (0..40).map(|i| -6.0 + 0.2 * i as f64).collect();
        let p = build_pencil(&corner, &t, false);
        let n = p.len();
        let mut a = nalgebra::DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let s = 1.0 / p.mass[i].sqrt();
            a[(i, i)] = p.diag[i] * s * s;
            if i + 1 < n {
                let v = p.off[i] * s / p.mass[i + 1].sqrt();
                a[(i, i + 1)] = v;
                a[(i + 1, i)] = v;
            }
        }
        let eig = nalgebra::SymmetricEigen::new(a).eigenvalues;
        for probe in [-1e4, -300.0, -10.0, -0.5, 0.0, 3.0] {
            let dense = eig.iter().filter(|&&l| l < probe).count();
            assert_eq!(p.negative_count(-probe, 0.0), dense, "probe {probe}");
        }
    }
}
