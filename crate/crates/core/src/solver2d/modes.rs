//! Radial structure of computed modes: the component h(r) = ∫ U φ_0 dθ along
//! arcs about the crest, compared with K_{iκ}(s r), and the mass of the
//! remainder W = U − h φ_0.

use serde::{Deserialize, Serialize};

use crate::angle_modes::AngularBasis;
use crate::error::{Error, Result};
use crate::specfun::bessel_k;

use super::eigen::EigenReport;
use super::space::EnrichedSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeProfile {
    pub s: f64,
    pub radii: Vec<f64>,
    pub h: Vec<f64>,
    /// K_{iκ}(s r) at the same radii.
    pub bessel: Vec<f64>,
    /// |⟨h, K⟩| / (‖h‖‖K‖) over the samples; the sign of a mode is arbitrary.
    pub correlation: f64,
}

/// h(r) for a field given in polar coordinates about the crest.
pub fn h_component<F: Fn(f64, f64) -> f64>(basis: &AngularBasis, u: F, r: f64) -> f64 {
    basis.project_h_fn(|t| u(r, t))
}

/// ∫ U² dθ and h² at radius r; their difference is ∫ W² dθ.
fn arc_masses<F: Fn(f64, f64) -> f64>(basis: &AngularBasis, u: F, r: f64) -> (f64, f64) {
    let h = h_component(basis, &u, r);
    let full = basis.integrate(|t| u(r, t).powi(2));
    (full, h * h)
}

fn mode_field<'a>(space: &'a EnrichedSpace, x: &'a [f64]) -> impl Fn(f64, f64) -> f64 + 'a {
    let c = space.mesh.corner;
    move |r, t| {
        let p = [c[0] + r * t.sin(), c[1] - r * t.cos()];
        space.evaluate(x, p).unwrap_or(f64::NAN)
    }
}

fn check_radii(space: &EnrichedSpace, radii: &[f64]) -> Result<()> {
    let r_c = space.mesh.ring_radii().last().copied().unwrap_or(0.0);
    for &r in radii {
        if !(r > 0.0 && r <= r_c) {
            return Err(Error::Domain(format!("radius {r} outside the polar sector (0, {r_c}]")));
        }
    }
    Ok(())
}

fn mode(report: &EigenReport, k: usize) -> Result<(f64, &[f64])> {
    let lambda = *report
        .eigenvalues
        .get(k)
        .ok_or_else(|| Error::Domain(format!("mode {k} not in report ({} modes)", report.eigenvalues.len())))?;
    Ok(((-lambda).sqrt(), &report.eigenvectors[k]))
}

/// h-component of mode `k` (position in the report) at the given radii.
pub fn eigenfunction_profile(
    report: &EigenReport,
    k: usize,
    space: &EnrichedSpace,
    basis: &AngularBasis,
    radii: &[f64],
) -> Result<ModeProfile> {
    check_radii(space, radii)?;
    let (s, x) = mode(report, k)?;
    let u = mode_field(space, x);
    let h: Vec<f64> = radii.iter().map(|&r| h_component(basis, &u, r)).collect();
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("sample arc leaves the mesh".into()));
    }
    let bessel = radii
        .iter()
        .map(|&r| bessel_k(basis.corner.kappa, s * r))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModeProfile { s, radii: radii.to_vec(), correlation: correlation(&h, &bessel).abs(), h, bessel })
}

pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let bb: f64 = b.iter().map(|x| x * x).sum();
    ab / (aa * bb).sqrt()
}

/// ‖W‖² / ‖U‖² over r_min < r < min(δ, 8/s), by the trapezoidal rule in
/// ln r on `n_radial` log-spaced arcs. Beyond 8/s the exact mode carries a
/// fraction e^{−16} of its mass, so the computed tail is discretization noise.
pub fn remainder_mass_fraction(
    report: &EigenReport,
    k: usize,
    space: &EnrichedSpace,
    basis: &AngularBasis,
    r_min: f64,
    delta: f64,
    n_radial: usize,
) -> Result<f64> {
    if !(r_min > 0.0 && r_min < delta && n_radial >= 2) {
        return Err(Error::InvalidParameter(format!("bad radial range ({r_min}, {delta})")));
    }
    let (s, x) = mode(report, k)?;
    let r_max = delta.min(8.0 / s).max(2.0 * r_min);
    let radii: Vec<f64> = (0..n_radial)
        .map(|i| r_min * (r_max / r_min).powf(i as f64 / (n_radial - 1) as f64))
        .collect();
    check_radii(space, &radii)?;
    let u = mode_field(space, x);
    let (mut full, mut w) = (0.0, 0.0);
    for (i, &r) in radii.iter().enumerate() {
        let (f, h2) = arc_masses(basis, &u, r);
        // r dr = r² d(ln r)
        let wt = if i == 0 || i + 1 == n_radial { 0.5 } else { 1.0 } * r * r;
        full += wt * f;
        w += wt * (f - h2).max(0.0);
    }
    if !(full > 0.0) {
        return Err(Error::Domain("mode vanishes on the sampled region".into()));
    }
    Ok(w / full)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waterwave::stokes_corner_params;

    #[test]
    fn pure_mode_projects_to_its_radial_factor() {
        let c = stokes_corner_params(0.0);
        let basis = AngularBasis::new(&c).unwrap();
        let tau = 20.0;
        let u = |r: f64, t: f64| bessel_k(c.kappa, tau * r).unwrap() * basis.eval(0, t).unwrap();
        for &r in &[0.001, 0.01, 0.05] {
            let h = h_component(&basis, u, r);
            let k = bessel_k(c.kappa, tau * r).unwrap();
            assert!((h - k).abs() <= 1e-12 * k.abs().max(1.0), "{h} {k}");
            let (f, h2) = arc_masses(&basis, u, r);
            assert!((f - h2).abs() <= 1e-12 * f);
        }
    }
}
