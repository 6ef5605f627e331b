//! P1 finite elements on a corner mesh, optionally enriched by the cut-off
//! singular function ŵ = ζ(r)·sin(κ ln(r/2) + γ)·cosh(κθ).

use crate::cutoff::SmoothCutoff;
use crate::error::{Error, Result};
use crate::specfun::CornerData;

use super::mesh::{BoundaryTag, Mesh};

#[derive(Debug, Clone)]
pub struct EnrichedSpace {
    pub mesh: Mesh,
    pub corner: CornerData,
    pub poly_degree: u8,
    /// Cut-off radii (δ1, δ2); `None` for a plain P1 space.
    pub cutoff: Option<SmoothCutoff>,
    dof: Vec<Option<usize>>,
    pub n_poly: usize,
    /// Nodes with prescribed values (bottom, and the inner arc of annular meshes).
    pub constrained: Vec<usize>,
    element_ring: Vec<usize>,
}

/// Value and derivatives of ŵ at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnrichmentValue {
    pub value: f64,
    pub grad: [f64; 2],
    /// −Δŵ, supported on the cut-off annulus.
    pub minus_laplacian: f64,
}

impl EnrichedSpace {
    pub fn new(mesh: Mesh, corner: CornerData, cutoff: SmoothCutoff) -> Result<Self> {
        let r_c = mesh.ring_radii().last().copied().unwrap_or(0.0);
        if mesh.corner_node.is_none() {
            return Err(Error::InvalidParameter("enrichment needs a mesh containing the corner".into()));
        }
        if cutoff.r2 > r_c {
            return Err(Error::InvalidParameter(format!(
                "cut-off radius {} exceeds the polar zone radius {r_c}",
                cutoff.r2
            )));
        }
        Self::build(mesh, corner, Some(cutoff), true)
    }

    pub fn unenriched(mesh: Mesh, corner: CornerData) -> Result<Self> {
        Self::build(mesh, corner, None, true)
    }

    /// Plain P1 space whose inner-arc nodes stay free, for lifting a
    /// Dirichlet trace on the arc.
    pub fn unenriched_with_arc(mesh: Mesh, corner: CornerData) -> Result<Self> {
        Self::build(mesh, corner, None, false)
    }

    fn build(mesh: Mesh, corner: CornerData, cutoff: Option<SmoothCutoff>, fix_arc: bool) -> Result<Self> {
        let mut constrained = mesh.tagged_nodes(BoundaryTag::Bottom);
        if fix_arc {
            constrained.extend(mesh.tagged_nodes(BoundaryTag::Arc));
        }
        constrained.sort_unstable();
        constrained.dedup();
        let mut excluded = vec![false; mesh.n_nodes()];
        for &i in &constrained {
            excluded[i] = true;
        }
        if let Some(c) = mesh.corner_node {
            excluded[c] = true;
        }
        let mut dof = vec![None; mesh.n_nodes()];
        let mut n_poly = 0;
        for (i, d) in dof.iter_mut().enumerate() {
            if !excluded[i] {
                *d = Some(n_poly);
                n_poly += 1;
            }
        }
        let mut ring_of = vec![0usize; mesh.n_nodes()];
        for (k, r) in mesh.rings.iter().enumerate() {
            for i in 0..=r.segments {
                ring_of[r.node(i)] = k;
            }
        }
        let element_ring = mesh
            .elements
            .iter()
            .map(|t| t.iter().map(|&i| ring_of[i]).min().unwrap())
            .collect();
        Ok(Self { mesh, corner, poly_degree: 1, cutoff, dof, n_poly, constrained, element_ring })
    }

    pub fn gamma(&self) -> f64 {
        self.corner.gamma
    }

    /// Same mesh and cut-off with a different extension phase.
    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { corner: self.corner.with_gamma(gamma), ..self.clone() }
    }

    pub fn is_enriched(&self) -> bool {
        self.cutoff.is_some()
    }

    pub fn n_dofs(&self) -> usize {
        self.n_poly + usize::from(self.is_enriched())
    }

    pub fn dof(&self, node: usize) -> Option<usize> {
        self.dof[node]
    }

    pub fn enrichment_dof(&self) -> Option<usize> {
        self.cutoff.map(|_| self.n_poly)
    }

    /// Polar coordinates about the crest: r and θ from the downward vertical.
    pub fn polar(&self, p: [f64; 2]) -> (f64, f64) {
        let dx = p[0] - self.mesh.corner[0];
        let dy = self.mesh.corner[1] - p[1];
        (dx.hypot(dy), dx.atan2(dy))
    }

    pub fn enrichment(&self, p: [f64; 2]) -> EnrichmentValue {
        self.enrichment_at_offset([p[0] - self.mesh.corner[0], p[1] - self.mesh.corner[1]])
    }

    /// Same as [`Self::enrichment`] for a point given by its offset from the
    /// crest, which avoids cancellation at radii far below the coordinate ulp.
    pub fn enrichment_at_offset(&self, d: [f64; 2]) -> EnrichmentValue {
        let zero = EnrichmentValue { value: 0.0, grad: [0.0; 2], minus_laplacian: 0.0 };
        let Some(cut) = self.cutoff else { return zero };
        let (r, th) = (d[0].hypot(d[1]), d[0].atan2(-d[1]));
        if r >= cut.r2 || r == 0.0 {
            return zero;
        }
        let (z, z1, z2) = cut.eval(r);
        let [w, wr, wt, _] = self.corner.singular_function(r, th);
        let dr = z1 * w + z * wr;
        let dt = z * wt / r;
        let (s, c) = th.sin_cos();
        EnrichmentValue {
            value: z * w,
            grad: [dr * s + dt * c, -dr * c + dt * s],
            minus_laplacian: -z2 * w - z1 * w / r - 2.0 * z1 * wr,
        }
    }

    /// Element containing p and its barycentric coordinates. Points slightly
    /// outside the polygonal domain snap to the nearest element.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, [f64; 3])> {
        let (r, _) = self.polar(p);
        let radii: Vec<(usize, f64)> = self
            .mesh
            .rings
            .iter()
            .enumerate()
            .filter_map(|(k, ring)| ring.radius.map(|x| (k, x)))
            .collect();
        let candidates: Vec<usize> = match radii.iter().position(|&(_, x)| x >= r) {
            Some(pos) if !radii.is_empty() => {
                let lo = radii[pos.saturating_sub(1)].0.saturating_sub(1);
                let hi = radii[pos].0 + 1;
                (0..self.mesh.elements.len())
                    .filter(|&e| self.element_ring[e] >= lo && self.element_ring[e] <= hi)
                    .collect()
            }
            _ => (0..self.mesh.elements.len()).collect(),
        };
        let mut best: Option<(usize, [f64; 3], f64)> = None;
        for e in candidates {
            let b = barycentric(self.mesh.element_points(e), p);
            let m = b[0].min(b[1]).min(b[2]);
            if best.as_ref().map_or(true, |x| m > x.2) {
                best = Some((e, b, m));
            }
            if m >= 0.0 {
                break;
            }
        }
        best.filter(|x| x.2 > -1e-3).map(|(e, b, _)| (e, b))
    }

    /// Evaluates a coefficient vector at p.
    pub fn evaluate(&self, coeffs: &[f64], p: [f64; 2]) -> Result<f64> {
        let (e, b) = self
            .locate(p)
            .ok_or_else(|| Error::Domain(format!("point ({}, {}) outside the mesh", p[0], p[1])))?;
        let mut u = 0.0;
        for (k, &node) in self.mesh.elements[e].iter().enumerate() {
            if let Some(d) = self.dof[node] {
                u += coeffs[d] * b[k];
            }
        }
        if let Some(w) = self.enrichment_dof() {
            u += coeffs[w] * self.enrichment(p).value;
        }
        Ok(u)
    }
}

pub(crate) fn barycentric(t: [[f64; 2]; 3], p: [f64; 2]) -> [f64; 3] {
    let [a, b, c] = t;
    let det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    let l1 = ((p[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (p[1] - a[1])) / det;
    let l2 = ((b[0] - a[0]) * (p[1] - a[1]) - (p[0] - a[0]) * (b[1] - a[1])) / det;
    [1.0 - l1 - l2, l1, l2]
}
