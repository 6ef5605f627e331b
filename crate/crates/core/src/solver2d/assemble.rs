//! Assembly of the pencil (A, M) for −Δu + σu = λu with the Robin condition
//! ∂_ν u − r⁻¹ρ u = 0 on the surface.
//!
//! The enrichment row is assembled through Green's formula,
//! a(ŵ, v) = ∫(−Δŵ + σŵ)v + ∫_S (∂_ν ŵ − r⁻¹ρŵ)v, so only the cut-off
//! annulus and the surface mismatch contribute. The flux term vanishes
//! wherever the surface is exactly straight.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::{GaussLegendre, KahanSum, TriangleRule};

use super::mesh::{signed_area, BoundaryTag};
use super::space::EnrichedSpace;
use super::sparse::Csr;

/// σ(x, y).
pub type Potential<'a> = &'a (dyn Fn(f64, f64) -> f64 + Sync);
/// Robin coefficient as a function of the surface abscissa.
pub type RobinCoefficient<'a> = &'a (dyn Fn(f64) -> f64 + Sync);

#[derive(Debug, Clone)]
pub struct Assembled {
    pub a: Csr,
    pub m: Csr,
    /// Number of polynomial unknowns; the enrichment unknown, if any, is last.
    pub n_poly: usize,
    pub enriched: bool,
    /// Half bandwidth of the polynomial block.
    pub band: usize,
    /// Relative change of the enrichment self-coupling under quadrature refinement.
    pub quadrature_change: f64,
}

impl Assembled {
    pub fn n(&self) -> usize {
        self.a.n
    }

    pub fn asymmetry(&self) -> f64 {
        self.a.asymmetry().max(self.m.asymmetry())
    }
}

struct Local {
    idx: [Option<usize>; 3],
    k: [[f64; 3]; 3],
    m: [[f64; 3]; 3],
}

fn p1_element(space: &EnrichedSpace, e: usize, sigma: Potential) -> Local {
    let tri = space.mesh.elements[e];
    let [a, b, c] = space.mesh.element_points(e);
    let area = signed_area(a, b, c);
    // Gradients of the barycentric functions.
    let g = [
        [(b[1] - c[1]) / (2.0 * area), (c[0] - b[0]) / (2.0 * area)],
        [(c[1] - a[1]) / (2.0 * area), (a[0] - c[0]) / (2.0 * area)],
        [(a[1] - b[1]) / (2.0 * area), (b[0] - a[0]) / (2.0 * area)],
    ];
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    // σ-weighted mass with the degree-2 interior rule.
    const PTS: [[f64; 3]; 3] = [
        [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
        [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
    ];
    for l in PTS {
        let x = l[0] * a[0] + l[1] * b[0] + l[2] * c[0];
        let y = l[0] * a[1] + l[1] * b[1] + l[2] * c[1];
        let s = sigma(x, y) * area / 3.0;
        if s != 0.0 {
            for i in 0..3 {
                for j in 0..3 {
                    k[i][j] += s * l[i] * l[j];
                }
            }
        }
    }
    let idx = [space.dof(tri[0]), space.dof(tri[1]), space.dof(tri[2])];
    Local { idx, k, m }
}

/// Enrichment couplings of one element: (a_ww, m_ww, [a_wi], [m_wi]).
fn enrichment_element(
    space: &EnrichedSpace,
    e: usize,
    sigma: Potential,
    rule: &TriangleRule,
    levels: u32,
) -> (f64, f64, [f64; 3], [f64; 3]) {
    let cut = space.cutoff.expect("enriched space");
    let pts = space.mesh.element_points(e);
    let radii: Vec<f64> = pts.iter().map(|&p| space.polar(p).0).collect();
    let r_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let zero = (0.0, 0.0, [0.0; 3], [0.0; 3]);
    if r_min >= cut.r2 {
        return zero;
    }
    let crosses = r_max > cut.r1;
    let levels = if crosses { levels } else { 0 };
    // Put the crest (if it is a vertex) at the collapsed vertex of the rule.
    let rot = if r_min == 0.0 { radii.iter().position(|&r| r == 0.0).unwrap() } else { 2 };
    let order = [(rot + 1) % 3, (rot + 2) % 3, rot];
    let [a, b, c] = [pts[order[0]], pts[order[1]], pts[order[2]]];
    let area2 = 2.0 * signed_area(a, b, c).abs();
    let n_sub = 1usize << levels;
    let mut aww = KahanSum::default();
    let mut mww = KahanSum::default();
    let mut awi = [0.0; 3];
    let mut mwi = [0.0; 3];
    let sub_scale = 1.0 / (n_sub * n_sub) as f64;
    for si in 0..n_sub {
        for sj in 0..n_sub - si {
            for flip in 0..2 {
                if flip == 1 && si + sj + 1 >= n_sub {
                    continue;
                }
                // Sub-triangle vertices in reference (u, v).
                let h = 1.0 / n_sub as f64;
                let (u0, v0) = (si as f64 * h, sj as f64 * h);
                let verts = if flip == 0 {
                    [[u0, v0], [u0 + h, v0], [u0, v0 + h]]
                } else {
                    [[u0 + h, v0 + h], [u0, v0 + h], [u0 + h, v0]]
                };
                for (q, &w) in rule.points.iter().zip(&rule.weights) {
                    let u = verts[0][0] + q[0] * (verts[1][0] - verts[0][0]) + q[1] * (verts[2][0] - verts[0][0]);
                    let v = verts[0][1] + q[0] * (verts[1][1] - verts[0][1]) + q[1] * (verts[2][1] - verts[0][1]);
                    let lam = [1.0 - u - v, u, v];
                    let p = [
                        lam[0] * a[0] + lam[1] * b[0] + lam[2] * c[0],
                        lam[0] * a[1] + lam[1] * b[1] + lam[2] * c[1],
                    ];
                    let en = space.enrichment(p);
                    if en.value == 0.0 && en.minus_laplacian == 0.0 {
                        continue;
                    }
                    let wt = w * area2 * sub_scale;
                    let lw = en.minus_laplacian + sigma(p[0], p[1]) * en.value;
                    aww.add(wt * lw * en.value);
                    mww.add(wt * en.value * en.value);
                    for k in 0..3 {
                        awi[order[k]] += wt * lw * lam[k];
                        mwi[order[k]] += wt * en.value * lam[k];
                    }
                }
            }
        }
    }
    (aww.value(), mww.value(), awi, mwi)
}

/// Surface integrals on one edge: P1 Robin block, and the flux pairing of
/// the enrichment (g·ŵ, g·φ_a, g·φ_b).
fn surface_edge(
    space: &EnrichedSpace,
    nodes: [usize; 2],
    robin: RobinCoefficient,
    gl: &GaussLegendre,
) -> ([[f64; 2]; 2], f64, [f64; 2]) {
    let p = [space.mesh.nodes[nodes[0]], space.mesh.nodes[nodes[1]]];
    let len = (p[1][0] - p[0][0]).hypot(p[1][1] - p[0][1]);
    let t = [(p[1][0] - p[0][0]) / len, (p[1][1] - p[0][1]) / len];
    let nu = if t[0] >= 0.0 { [-t[1], t[0]] } else { [t[1], -t[0]] };
    let at = |s: f64| [p[0][0] + s * t[0], p[0][1] + s * t[1]];
    let mut rob = [[0.0; 2]; 2];
    for (s, w) in gl.on(0.0, len) {
        let q = at(s);
        let (r, _) = space.polar(q);
        let c = robin(q[0]) / r;
        let phi = [1.0 - s / len, s / len];
        for i in 0..2 {
            for j in 0..2 {
                rob[i][j] -= w * c * phi[i] * phi[j];
            }
        }
    }
    let mut gw = 0.0;
    let mut gphi = [0.0; 2];
    if let Some(cut) = space.cutoff {
        let c = space.mesh.corner;
        let r0 = space.polar(p[0]).0;
        let r1 = space.polar(p[1]).0;
        if r0.min(r1) < cut.r2 {
            // Panels graded toward an endpoint at the crest.
            let mut breaks = vec![0.0, len];
            let crest = if r0 == 0.0 { Some(0) } else if r1 == 0.0 { Some(1) } else { None };
            if let Some(end) = crest {
                breaks = (0..=40).map(|j| len * 10f64.powf(-(40 - j) as f64 * 0.4)).collect();
                breaks.insert(0, 0.0);
                if end == 1 {
                    breaks = breaks.iter().rev().map(|s| len - s).collect();
                }
            }
            let mut acc = KahanSum::default();
            for win in breaks.windows(2) {
                for (s, w) in gl.on(win[0], win[1]) {
                    // Offset from the crest, taken from the nearer endpoint.
                    let d = if r0 <= r1 {
                        [p[0][0] - c[0] + s * t[0], p[0][1] - c[1] + s * t[1]]
                    } else {
                        [p[1][0] - c[0] + (s - len) * t[0], p[1][1] - c[1] + (s - len) * t[1]]
                    };
                    let q = at(s);
                    let r = d[0].hypot(d[1]);
                    if r == 0.0 {
                        continue;
                    }
                    let en = space.enrichment_at_offset(d);
                    let g = en.grad[0] * nu[0] + en.grad[1] * nu[1] - robin(q[0]) / r * en.value;
                    let phi = [1.0 - s / len, s / len];
                    acc.add(w * g * en.value);
                    gphi[0] += w * g * phi[0];
                    gphi[1] += w * g * phi[1];
                }
            }
            gw = acc.value();
        }
    }
    (rob, gw, gphi)
}

#[derive(Debug, Clone, Copy)]
pub struct AssemblyOptions {
    /// Points per direction of the collapsed triangle rule.
    pub triangle_order: usize,
    /// Uniform subdivision levels for elements crossing the cut-off annulus.
    pub annulus_levels: u32,
    /// Tolerance on the enrichment self-coupling change under one more level.
    pub quadrature_tol: f64,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self { triangle_order: 6, annulus_levels: 2, quadrature_tol: 1e-7 }
    }
}

pub fn assemble(space: &EnrichedSpace, sigma: Potential, robin: RobinCoefficient) -> Result<Assembled> {
    assemble_with(space, sigma, robin, &AssemblyOptions::default())
}

pub fn assemble_with(
    space: &EnrichedSpace,
    sigma: Potential,
    robin: RobinCoefficient,
    opts: &AssemblyOptions,
) -> Result<Assembled> {
    let mesh = &space.mesh;
    let n = space.n_dofs();
    let locals: Vec<Local> = (0..mesh.elements.len())
        .into_par_iter()
        .map(|e| p1_element(space, e, sigma))
        .collect();
    let mut ta = Vec::with_capacity(9 * locals.len());
    let mut tm = Vec::with_capacity(9 * locals.len());
    for l in &locals {
        for i in 0..3 {
            let Some(gi) = l.idx[i] else { continue };
            for j in 0..3 {
                let Some(gj) = l.idx[j] else { continue };
                ta.push((gi, gj, l.k[i][j]));
                tm.push((gi, gj, l.m[i][j]));
            }
        }
    }
    let gl = GaussLegendre::new(8);
    let surface: Vec<[usize; 2]> = mesh
        .boundary
        .iter()
        .filter(|b| b.tag == BoundaryTag::Surface)
        .map(|b| b.nodes)
        .collect();
    let edges: Vec<_> = surface.par_iter().map(|&nd| (nd, surface_edge(space, nd, robin, &gl))).collect();
    let mut flux_ww = KahanSum::default();
    let mut flux_wi = vec![0.0; space.n_poly];
    for (nd, (rob, gw, gphi)) in &edges {
        for i in 0..2 {
            let Some(gi) = space.dof(nd[i]) else { continue };
            for j in 0..2 {
                if let Some(gj) = space.dof(nd[j]) {
                    ta.push((gi, gj, rob[i][j]));
                }
            }
            flux_wi[gi] += gphi[i];
        }
        flux_ww.add(*gw);
    }

    let mut quadrature_change = 0.0;
    if let Some(w) = space.enrichment_dof() {
        let rule = TriangleRule::collapsed(opts.triangle_order);
        let run = |levels: u32| -> Vec<(f64, f64, [f64; 3], [f64; 3])> {
            (0..mesh.elements.len())
                .into_par_iter()
                .map(|e| enrichment_element(space, e, sigma, &rule, levels))
                .collect()
        };
        let fine = run(opts.annulus_levels + 1);
        let coarse = run(opts.annulus_levels);
        let total = |v: &[(f64, f64, [f64; 3], [f64; 3])]| {
            let mut s = KahanSum::default();
            for x in v {
                s.add(x.0);
            }
            s.value()
        };
        let (tf, tc) = (total(&fine), total(&coarse));
        quadrature_change = (tf - tc).abs() / tf.abs().max(f64::MIN_POSITIVE);
        if !(quadrature_change <= opts.quadrature_tol) {
            return Err(Error::Assembly(format!(
                "enrichment self-coupling changed by {quadrature_change:.2e} under quadrature refinement"
            )));
        }
        let mut aww = KahanSum::default();
        let mut mww = KahanSum::default();
        let mut awi = flux_wi;
        let mut mwi = vec![0.0; space.n_poly];
        aww.add(flux_ww.value());
        for (e, (a_ee, m_ee, ai, mi)) in fine.iter().enumerate() {
            aww.add(*a_ee);
            mww.add(*m_ee);
            for k in 0..3 {
                if let Some(g) = space.dof(mesh.elements[e][k]) {
                    awi[g] += ai[k];
                    mwi[g] += mi[k];
                }
            }
        }
        for g in 0..space.n_poly {
            if awi[g] != 0.0 {
                ta.push((g, w, awi[g]));
                ta.push((w, g, awi[g]));
            }
            if mwi[g] != 0.0 {
                tm.push((g, w, mwi[g]));
                tm.push((w, g, mwi[g]));
            }
        }
        ta.push((w, w, aww.value()));
        tm.push((w, w, mww.value()));
    }
    let a = Csr::from_triplets(n, ta);
    let m = Csr::from_triplets(n, tm);
    let band = a.bandwidth(space.n_poly).max(m.bandwidth(space.n_poly));
    Ok(Assembled { a, m, n_poly: space.n_poly, enriched: space.is_enriched(), band, quadrature_change })
}
