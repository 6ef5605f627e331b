//! Dirichlet-to-Neumann coefficient of the region r > δ.
//!
//! For λ = −τ², the outer problem −ΔU + τ²U = 0 with the Robin condition on
//! the surface and U = φ_0 on the arc r = δ is solved by P1 elements. The
//! radial derivative of h(r) = ∫ U φ_0 dθ at δ is read off the discrete
//! residual on the arc, which is the variationally consistent flux, and
//! α = τ + h′(δ)/h(δ).

use serde::{Deserialize, Serialize};

use crate::angle_modes::AngularBasis;
use crate::error::{Error, Result};
use crate::specfun::{bessel_k, bessel_k_deriv, CornerData};

use super::assemble::{assemble, RobinCoefficient};
use super::band::{BandLdl, BandLu};
use super::mesh::{generate_annular_mesh, BoundaryTag, MeshParams};
use super::profile::SurfaceProfile;
use super::space::EnrichedSpace;
use super::sparse::Csr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtnResult {
    pub tau: f64,
    pub delta: f64,
    /// α(τ⁻¹) = τ + h′(δ)/h(δ).
    pub alpha: f64,
    /// Same quantity for the exact sector solution K_{iκ}(τr)φ_0:
    /// τ + τK′(τδ)/K(τδ).
    pub alpha_sector: f64,
    pub h: f64,
    pub h_prime: f64,
    /// ‖U − hφ_0‖ / ‖U‖ over δ < r < 2δ.
    pub remainder: f64,
    pub n_dofs: usize,
}

/// Mesh parameters for the outer problem at decay rate τ.
pub fn outer_mesh_params(tau: f64, delta: f64) -> (MeshParams, f64) {
    let first = (0.05 * delta).min(0.15 / tau);
    (MeshParams { h_max: 0.05, grading: 0.85, n_layers: 0, n_theta: 16, polar_radius: None }, first)
}

pub fn dtn_alpha(
    profile: &SurfaceProfile,
    rho: RobinCoefficient,
    corner: &CornerData,
    tau: f64,
    delta: f64,
) -> Result<DtnResult> {
    let (params, first) = outer_mesh_params(tau, delta);
    dtn_alpha_with(profile, rho, corner, tau, delta, &params, first)
}

pub fn dtn_alpha_with(
    profile: &SurfaceProfile,
    rho: RobinCoefficient,
    corner: &CornerData,
    tau: f64,
    delta: f64,
    params: &MeshParams,
    first_spacing: f64,
) -> Result<DtnResult> {
    if !(tau > 0.0 && delta > 0.0) {
        return Err(Error::InvalidParameter(format!("need τ, δ > 0 (got {tau}, {delta})")));
    }
    let mesh = generate_annular_mesh(profile, corner.alpha_star, delta, first_spacing, params)?;
    let arc_nodes = mesh.tagged_nodes(BoundaryTag::Arc);
    let space = EnrichedSpace::unenriched_with_arc(mesh, corner.clone())?;
    let sys = assemble(&space, &|_, _| 0.0, rho)?;
    let b = sys.a.add_scaled(tau * tau, &sys.m);
    let n = b.n;
    let basis = AngularBasis::new(corner)?;

    // Unit φ_0 trace on the arc, interpolated at the arc nodes.
    let mut on_arc = vec![false; n];
    let mut trace = vec![0.0; n];
    for &node in &arc_nodes {
        let d = space.dof(node).ok_or_else(|| Error::Mesh("arc node without a degree of freedom".into()))?;
        let (_, th) = space.polar(space.mesh.nodes[node]);
        on_arc[d] = true;
        trace[d] = basis.eval_unchecked(0, th.clamp(0.0, corner.alpha_star));
    }
    let free: Vec<usize> = (0..n).filter(|&i| !on_arc[i]).collect();
    let mut pos = vec![usize::MAX; n];
    for (k, &i) in free.iter().enumerate() {
        pos[i] = k;
    }
    let mut t = Vec::new();
    let mut rhs = vec![0.0; free.len()];
    for (k, &i) in free.iter().enumerate() {
        for (j, v) in b.row(i) {
            if on_arc[j] {
                rhs[k] -= v * trace[j];
            } else {
                t.push((k, pos[j], v));
            }
        }
    }
    let bff = Csr::from_triplets(free.len(), t);
    let band = bff.bandwidth(free.len());
    let ldl = BandLdl::factor(&bff, free.len(), band)?;
    if ldl.negative > 0 {
        return Err(Error::InvalidParameter(format!(
            "outer form not coercive at τ = {tau} ({} negative pivots); τ is below the threshold for δ = {delta}",
            ldl.negative
        )));
    }
    let lu = BandLu::factor(&bff, free.len(), band)?;
    lu.solve_in_place(&mut rhs);
    let mut u = trace.clone();
    for (k, &i) in free.iter().enumerate() {
        u[i] = rhs[k];
    }
    let bu = b.mul(&u);
    // Σ φ_0(θ_i)(BU)_i = ∫_arc (−∂_r U) φ_0 ds = −δ h′(δ).
    let flux: f64 = (0..n).filter(|&i| on_arc[i]).map(|i| trace[i] * bu[i]).sum();
    let h_prime = -flux / delta;
    let field = |r: f64, th: f64| {
        let c = space.mesh.corner;
        space.evaluate(&u, [c[0] + r * th.sin(), c[1] - r * th.cos()]).unwrap_or(f64::NAN)
    };
    let h = basis.project_h_fn(|th| field(delta * (1.0 + 1e-12), th));
    let alpha = tau + h_prime / h;
    let z = tau * delta;
    let alpha_sector = tau + tau * bessel_k_deriv(corner.kappa, z)? / bessel_k(corner.kappa, z)?;
    let remainder = remainder_fraction(&basis, &field, delta);
    Ok(DtnResult { tau, delta, alpha, alpha_sector, h, h_prime, remainder, n_dofs: n })
}

fn remainder_fraction<F: Fn(f64, f64) -> f64>(basis: &AngularBasis, u: &F, delta: f64) -> f64 {
    let n = 24;
    let (mut full, mut w) = (0.0, 0.0);
    for i in 0..n {
        let r = delta * 2f64.powf((i as f64 + 0.5) / n as f64);
        let h = basis.project_h_fn(|t| u(r, t));
        let f = basis.integrate(|t| u(r, t).powi(2));
        full += r * r * f;
        w += r * r * (f - h * h).max(0.0);
    }
    (w / full).sqrt()
}
