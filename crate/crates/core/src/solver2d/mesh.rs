//! Corner-graded triangulation of the half-period domain.
//!
//! Around the crest the mesh is a stack of circular rings with geometrically
//! growing radii, each ring carrying `n` angular segments between the wall
//! (θ = 0) and the surface. Counts double across a layer when cells become
//! too wide. Beyond the polar zone the ring structure continues through a
//! transfinite (Coons) map onto the bottom and the right wall. Nodes are
//! numbered ring by ring, which keeps the matrix bandwidth near the largest
//! ring count.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::profile::SurfaceProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryTag {
    Surface,
    Bottom,
    Left,
    Right,
    /// Inner arc of an annular mesh.
    Arc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
}

/// One ring of nodes, φ = i/segments for i = 0..=segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ring {
    pub first: usize,
    pub segments: usize,
    /// Radius for rings inside the polar zone.
    pub radius: Option<f64>,
}

impl Ring {
    pub fn node(&self, i: usize) -> usize {
        self.first + i
    }

    pub fn last(&self) -> usize {
        self.first + self.segments
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    pub elements: Vec<[usize; 3]>,
    pub boundary: Vec<BoundaryEdge>,
    /// Radius ratio of consecutive inner rings; finer than the requested
    /// grading when coarse layers were split.
    pub grading: f64,
    pub r_inner: f64,
    /// Crest position (0, η0).
    pub corner: [f64; 2],
    /// Index of the crest vertex, absent for annular meshes.
    pub corner_node: Option<usize>,
    pub rings: Vec<Ring>,
    pub alpha_star: f64,
    pub half_period: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MeshParams {
    pub h_max: f64,
    /// Ratio r_j / r_{j+1} of consecutive inner rings, in (0, 1).
    pub grading: f64,
    pub n_layers: usize,
    /// Angular segments of the inner rings.
    pub n_theta: usize,
    /// Outer radius of the polar zone; defaults to 0.4·min(η0, Λ/2).
    pub polar_radius: Option<f64>,
}

impl Default for MeshParams {
    fn default() -> Self {
        Self { h_max: 0.05, grading: 0.95, n_layers: 280, n_theta: 16, polar_radius: None }
    }
}

impl MeshParams {
    fn check(&self) -> Result<()> {
        if !(self.h_max > 0.0 && self.grading > 0.0 && self.grading < 1.0) {
            return Err(Error::Mesh(format!(
                "need h_max > 0 and grading in (0, 1), got {} and {}",
                self.h_max, self.grading
            )));
        }
        if self.n_theta < 2 {
            return Err(Error::Mesh("need at least 2 angular segments".into()));
        }
        Ok(())
    }
}

/// Quality 2·inradius/circumradius (1 for an equilateral triangle).
pub fn triangle_quality(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let la = dist(b, c);
    let lb = dist(a, c);
    let lc = dist(a, b);
    let area = signed_area(a, b, c).abs();
    if area == 0.0 {
        return 0.0;
    }
    let s = 0.5 * (la + lb + lc);
    let r_in = area / s;
    let r_circ = la * lb * lc / (4.0 * area);
    2.0 * r_in / r_circ
}

pub fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Inner ring radii: geometric from h_max·g^n up to the point where the
/// spacing reaches h_max, then uniform up to `r_c`.
fn graded_radii(p: &MeshParams, r_c: f64) -> Vec<f64> {
    let g = p.grading;
    let r_inner = p.h_max * g.powi(p.n_layers as i32);
    let mut radii = vec![r_inner];
    let mut r = r_inner;
    loop {
        let next = r / g;
        if next - r > p.h_max || next >= r_c {
            break;
        }
        radii.push(next);
        r = next;
    }
    let last_gap = if radii.len() > 1 { r - radii[radii.len() - 2] } else { r };
    let rest = r_c - r;
    if rest < 0.5 * last_gap && radii.len() > 1 {
        radii.pop();
    } else {
        let n = ((rest / p.h_max).ceil() as usize).max(1);
        let step = rest / n as f64;
        for i in 1..n {
            radii.push(r + step * i as f64);
        }
    }
    radii.push(r_c);
    radii
}

struct Builder<'a> {
    profile: &'a SurfaceProfile,
    alpha_star: f64,
    corner: [f64; 2],
    nodes: Vec<[f64; 2]>,
    elements: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
    rings: Vec<Ring>,
}

impl<'a> Builder<'a> {
    fn polar_ring(&mut self, r: f64, segments: usize, pinned: bool) -> Result<Ring> {
        let top = if pinned { self.alpha_star } else { self.profile.angle_at_radius(r)? };
        let first = self.nodes.len();
        for i in 0..=segments {
            let th = top * i as f64 / segments as f64;
            self.nodes.push([r * th.sin(), self.corner[1] - r * th.cos()]);
        }
        let ring = Ring { first, segments, radius: Some(r) };
        self.rings.push(ring);
        Ok(ring)
    }

    fn push_ring(&mut self, pts: Vec<[f64; 2]>) -> Ring {
        let first = self.nodes.len();
        let segments = pts.len() - 1;
        self.nodes.extend(pts);
        let ring = Ring { first, segments, radius: None };
        self.rings.push(ring);
        ring
    }

    fn triangle(&mut self, t: [usize; 3]) -> Result<()> {
        let [a, b, c] = t;
        let area = signed_area(self.nodes[a], self.nodes[b], self.nodes[c]);
        let scale = dist(self.nodes[a], self.nodes[b]).max(dist(self.nodes[a], self.nodes[c]));
        if !(area.abs() > 1e-12 * scale * scale) {
            return Err(Error::Mesh(format!(
                "degenerate element at ({:.3e}, {:.3e})",
                self.nodes[a][0], self.nodes[a][1]
            )));
        }
        self.elements.push(if area > 0.0 { [a, b, c] } else { [a, c, b] });
        Ok(())
    }

    fn quad(&mut self, a0: usize, a1: usize, b0: usize, b1: usize) -> Result<()> {
        let d1 = dist(self.nodes[a0], self.nodes[b1]);
        let d2 = dist(self.nodes[a1], self.nodes[b0]);
        if d1 <= d2 {
            self.triangle([a0, a1, b1])?;
            self.triangle([a0, b1, b0])
        } else {
            self.triangle([a0, a1, b0])?;
            self.triangle([a1, b1, b0])
        }
    }

    /// Connect two rings whose counts are equal or double.
    fn connect(&mut self, a: Ring, b: Ring) -> Result<()> {
        if b.segments == a.segments {
            for i in 0..a.segments {
                self.quad(a.node(i), a.node(i + 1), b.node(i), b.node(i + 1))?;
            }
        } else if b.segments == 2 * a.segments {
            for i in 0..a.segments {
                let (p, q) = (a.node(i), a.node(i + 1));
                let (u, v, w) = (b.node(2 * i), b.node(2 * i + 1), b.node(2 * i + 2));
                self.triangle([p, u, v])?;
                self.triangle([p, v, q])?;
                self.triangle([q, v, w])?;
            }
        } else if 2 * b.segments == a.segments {
            for i in 0..b.segments {
                let (p, q) = (b.node(i), b.node(i + 1));
                let (u, v, w) = (a.node(2 * i), a.node(2 * i + 1), a.node(2 * i + 2));
                self.triangle([p, u, v])?;
                self.triangle([p, v, q])?;
                self.triangle([q, v, w])?;
            }
        } else {
            return Err(Error::Mesh(format!(
                "cannot connect rings with {} and {} segments",
                a.segments, b.segments
            )));
        }
        self.boundary.push(BoundaryEdge { nodes: [a.node(0), b.node(0)], tag: BoundaryTag::Left });
        self.boundary.push(BoundaryEdge { nodes: [a.last(), b.last()], tag: BoundaryTag::Surface });
        Ok(())
    }

    /// Rings of the polar zone at the given radii. Returns the outermost.
    fn polar_zone(&mut self, radii: &[f64], first: Ring, p: &MeshParams) -> Result<Ring> {
        let mut prev = first;
        for j in 1..radii.len() {
            let r = radii[j];
            let spacing = r - radii[j - 1];
            let top = self.profile.angle_at_radius(r)?;
            let width = r * top / prev.segments as f64;
            let segments = if prev.segments < p.n_theta || width > 1.8 * spacing {
                2 * prev.segments
            } else if prev.segments >= 2 * p.n_theta && width < 0.45 * spacing {
                prev.segments / 2
            } else {
                prev.segments
            };
            let ring = self.polar_ring(r, segments, false)?;
            self.connect(prev, ring)?;
            prev = ring;
        }
        Ok(prev)
    }

    /// Coons zone between the arc `arc` at radius r_c and the bottom/right walls.
    fn outer_zone(&mut self, arc: Ring, r_c: f64, h_max: f64, last_gap: f64) -> Result<()> {
        let prof = self.profile;
        let l = prof.half_period();
        let eta0 = self.corner[1];
        let x_c = prof.x_at_radius(r_c)?;
        let th_c = prof.angle_at_radius(r_c)?;
        let eta_l = prof.eta(l);
        let len_b = {
            let mut s = 0.0;
            let mut q = [x_c, prof.eta(x_c)];
            for i in 1..=64 {
                let x = x_c + (l - x_c) * i as f64 / 64.0;
                let p = [x, prof.eta(x)];
                s += dist(p, q);
                q = p;
            }
            s
        };
        let len_d = eta0 - r_c;
        if len_d <= 0.0 {
            return Err(Error::Mesh(format!("polar radius {r_c} reaches the bottom")));
        }
        let xs = outer_stations(0.5 * (len_b + len_d), (3.0 * last_gap).min(h_max), h_max);
        let n_out = xs.len() - 1;

        let arc_pt = |phi: f64| {
            let th = phi * th_c;
            [r_c * th.sin(), eta0 - r_c * th.cos()]
        };
        let surf = |xi: f64| {
            let x = x_c + (l - x_c) * xi;
            [x, if xi >= 1.0 { eta_l } else { prof.eta(x) }]
        };
        let wall = |xi: f64| [0.0, (eta0 - r_c) * (1.0 - xi)];
        let kink_raw = l / (l + eta_l);
        let far = |phi: f64, kink: f64| {
            if phi <= kink {
                [l * phi / kink, 0.0]
            } else {
                [l, eta_l * (phi - kink) / (1.0 - kink)]
            }
        };
        let coons = |xi: f64, phi: f64, kink: f64| {
            let a = arc_pt(phi);
            let c = far(phi, kink);
            let d = wall(xi);
            let b = surf(xi);
            let a0 = arc_pt(0.0);
            let a1 = arc_pt(1.0);
            let c0 = far(0.0, kink);
            let c1 = far(1.0, kink);
            let mut p = [0.0; 2];
            for k in 0..2 {
                p[k] = (1.0 - xi) * a[k] + xi * c[k] + (1.0 - phi) * d[k] + phi * b[k]
                    - ((1.0 - xi) * (1.0 - phi) * a0[k]
                        + (1.0 - xi) * phi * a1[k]
                        + xi * (1.0 - phi) * c0[k]
                        + xi * phi * c1[k]);
            }
            p
        };

        // First pass decides the segment counts.
        let mut counts = vec![arc.segments];
        for m in 1..=n_out {
            let (xi, xi_prev) = (xs[m], xs[m - 1]);
            let samples = 48;
            let mut len = 0.0;
            let mut gap = 0.0;
            let mut q = coons(xi, 0.0, kink_raw);
            for i in 0..=samples {
                let phi = i as f64 / samples as f64;
                let pt = coons(xi, phi, kink_raw);
                if i > 0 {
                    len += dist(pt, q);
                }
                gap += dist(pt, coons(xi_prev, phi, kink_raw)) / (samples + 1) as f64;
                q = pt;
            }
            let n = *counts.last().unwrap();
            // The far boundary keeps the count of its neighbour: a doubling
            // there meets the bottom at a skew.
            counts.push(if m == n_out {
                n
            } else if len / n as f64 > 1.8 * gap {
                2 * n
            } else if n % 2 == 0 && n >= 4 && len / (n as f64) < 0.45 * gap {
                n / 2
            } else {
                n
            });
        }
        let n_last = *counts.last().unwrap();
        let kink = ((kink_raw * n_last as f64).round() / n_last as f64).clamp(1.0 / n_last as f64, 1.0 - 1.0 / n_last as f64);

        let mut prev = arc;
        for m in 1..=n_out {
            let xi = xs[m];
            let n = counts[m];
            let pts: Vec<[f64; 2]> = (0..=n)
                .map(|i| {
                    let phi = i as f64 / n as f64;
                    if m == n_out {
                        far(phi, kink)
                    } else if i == n {
                        surf(xi)
                    } else if i == 0 {
                        wall(xi)
                    } else {
                        coons(xi, phi, kink)
                    }
                })
                .collect();
            let ring = self.push_ring(pts);
            self.connect(prev, ring)?;
            prev = ring;
        }
        for i in 0..prev.segments {
            let (a, b) = (prev.node(i), prev.node(i + 1));
            let tag = if self.nodes[a][1] == 0.0 && self.nodes[b][1] == 0.0 {
                BoundaryTag::Bottom
            } else {
                BoundaryTag::Right
            };
            self.boundary.push(BoundaryEdge { nodes: [a, b], tag });
        }
        let first_free = arc.last() + 1;
        let last_free = prev.first;
        self.smooth(first_free..last_free, 40);
        Ok(())
    }

    /// Laplacian smoothing of the interior nodes in `range`; wall and surface
    /// nodes stay fixed. A sweep is rejected if it would invert an element or
    /// push the worst quality below min(current, 0.3).
    fn smooth(&mut self, range: std::ops::Range<usize>, sweeps: usize) {
        let fixed: std::collections::HashSet<usize> =
            self.boundary.iter().flat_map(|e| e.nodes).collect();
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for t in &self.elements {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                nbrs[a].push(b);
                nbrs[b].push(a);
            }
        }
        for v in nbrs.iter_mut() {
            v.sort_unstable();
            v.dedup();
        }
        let free: Vec<usize> = range.filter(|i| !fixed.contains(i)).collect();
        let quality = |nodes: &[[f64; 2]]| {
            self.elements
                .iter()
                .map(|&[a, b, c]| triangle_quality(nodes[a], nodes[b], nodes[c]))
                .fold(f64::INFINITY, f64::min)
        };
        for _ in 0..sweeps {
            let q_min = quality(&self.nodes).min(0.3);
            let old = self.nodes.clone();
            for &i in &free {
                let n = nbrs[i].len() as f64;
                let mut p = [0.0; 2];
                for &j in &nbrs[i] {
                    p[0] += old[j][0] / n;
                    p[1] += old[j][1] / n;
                }
                self.nodes[i] = p;
            }
            let worse = self.elements.iter().any(|&[a, b, c]| {
                signed_area(self.nodes[a], self.nodes[b], self.nodes[c]) <= 0.0
                    || triangle_quality(self.nodes[a], self.nodes[b], self.nodes[c]) < q_min
            });
            if worse {
                self.nodes = old;
                break;
            }
        }
    }
}

/// Stations ξ ∈ [0, 1] across a zone of length `len`: steps grow by 1.5 from
/// `first` up to `h_max`, then the whole set is rescaled to end at 1.
fn outer_stations(len: f64, first: f64, h_max: f64) -> Vec<f64> {
    let mut s = vec![0.0];
    let mut d = first;
    while *s.last().unwrap() < len - 1e-9 * len {
        s.push(s.last().unwrap() + d);
        d = (1.5 * d).min(h_max);
    }
    if s.len() < 3 {
        s = vec![0.0, 0.5 * len, len];
    }
    let end = *s.last().unwrap();
    s.iter().map(|x| x / end).collect()
}

/// Radii of the transition rings below `r0`, innermost first. Ring j has
/// n_fan·2^j segments; each step outward shrinks the radial gap to about the
/// angular width of the finer ring, and never below the layer grading.
fn cap_radii(r0: f64, n_fan: usize, p: &MeshParams, alpha_star: f64) -> Vec<f64> {
    let mut counts = vec![n_fan];
    while *counts.last().unwrap() < p.n_theta {
        counts.push(2 * counts.last().unwrap());
    }
    // counts[m] belongs to r0 itself; walk inward.
    let mut radii = Vec::new();
    let mut r = r0;
    for j in (1..counts.len()).rev() {
        let width = alpha_star / counts[j] as f64;
        r *= (1.0 - width).min(p.grading).max(0.5);
        radii.push(r);
    }
    radii.reverse();
    radii
}

/// Ring ratio after `split_wide_gaps` has subdivided each graded layer.
fn effective_grading(g: f64, dtheta: f64) -> f64 {
    let m = ((1.0 / g - 1.0) / (3.0 * dtheta)).ceil().max(1.0);
    g.powf(1.0 / m)
}

/// Subdivides gaps wider than three angular cells (angle `dtheta` per cell)
/// geometrically, so coarse gradings keep the aspect ratio bounded.
fn split_wide_gaps(radii: &[f64], dtheta: f64) -> Vec<f64> {
    let mut out = vec![radii[0]];
    for w in radii.windows(2) {
        let (a, b) = (w[0], w[1]);
        let m = ((b - a) / (3.0 * a * dtheta)).ceil().max(1.0) as usize;
        let q = (b / a).powf(1.0 / m as f64);
        let mut r = a;
        for _ in 1..m {
            r *= q;
            out.push(r);
        }
        out.push(b);
    }
    out
}

fn polar_radius(profile: &SurfaceProfile, p: &MeshParams) -> Result<f64> {
    let r_c = p.polar_radius.unwrap_or(0.4 * profile.eta0.min(profile.half_period()));
    if !(r_c > 0.0 && r_c < 0.9 * profile.eta0.min(profile.half_period())) {
        return Err(Error::Mesh(format!("polar radius {r_c} does not fit the domain")));
    }
    Ok(r_c)
}

/// Corner-graded mesh of the half-period domain with the default angular
/// resolution.
pub fn generate_mesh(
    profile: &SurfaceProfile,
    alpha_star: f64,
    h_max: f64,
    grading: f64,
    n_layers: usize,
) -> Result<Mesh> {
    generate_mesh_with(
        profile,
        alpha_star,
        &MeshParams { h_max, grading, n_layers, ..MeshParams::default() },
    )
}

pub fn generate_mesh_with(profile: &SurfaceProfile, alpha_star: f64, p: &MeshParams) -> Result<Mesh> {
    p.check()?;
    let r_c = polar_radius(profile, p)?;
    let radii = graded_radii(p, r_c);
    let corner = [0.0, profile.eta0];
    let mut b = Builder {
        profile,
        alpha_star,
        corner,
        nodes: vec![corner],
        elements: Vec::new(),
        boundary: Vec::new(),
        rings: Vec::new(),
    };
    let mut n_fan = p.n_theta;
    while n_fan > 1 && alpha_star / (n_fan as f64) < 0.3 {
        n_fan /= 2;
    }
    let n_fan = n_fan.max(1);
    // Inside the first layer, a cap of rings doubles the angular count from
    // the fan up to n_theta with near-isotropic elements.
    let cap = cap_radii(radii[0], n_fan, p, alpha_star);
    let mut all = cap.clone();
    let dtheta = alpha_star / p.n_theta as f64;
    all.extend(split_wide_gaps(&radii, dtheta));
    // The innermost surface node sits exactly at angle α* so that the first
    // surface chord is straight along the limiting tangent.
    let ring0 = b.polar_ring(all[0], n_fan, true)?;
    for i in 0..n_fan {
        b.triangle([0, ring0.node(i), ring0.node(i + 1)])?;
    }
    b.boundary.push(BoundaryEdge { nodes: [0, ring0.node(0)], tag: BoundaryTag::Left });
    b.boundary.push(BoundaryEdge { nodes: [0, ring0.last()], tag: BoundaryTag::Surface });
    let arc = b.polar_zone(&all, ring0, p)?;
    let gap = r_c - b.rings[b.rings.len() - 2].radius.unwrap_or(0.0);
    b.outer_zone(arc, r_c, p.h_max, gap)?;
    let mesh = Mesh {
        nodes: b.nodes,
        elements: b.elements,
        boundary: b.boundary,
        grading: effective_grading(p.grading, dtheta),
        r_inner: radii[0],
        corner,
        corner_node: Some(0),
        rings: b.rings,
        alpha_star,
        half_period: profile.half_period(),
    };
    mesh.check_quality(0.2)?;
    Ok(mesh)
}

/// Mesh of the part of the domain outside the disc of radius `r_start`
/// around the crest. Ring spacing starts at `first_spacing` and grows by
/// 1/grading up to h_max.
pub fn generate_annular_mesh(
    profile: &SurfaceProfile,
    alpha_star: f64,
    r_start: f64,
    first_spacing: f64,
    p: &MeshParams,
) -> Result<Mesh> {
    p.check()?;
    let r_c = polar_radius(profile, p)?;
    if !(r_start > 0.0 && r_start < r_c) {
        return Err(Error::Mesh(format!("inner radius {r_start} outside (0, {r_c})")));
    }
    let mut radii = vec![r_start];
    let mut d = first_spacing.min(p.h_max);
    while *radii.last().unwrap() + d < r_c - 0.5 * d {
        radii.push(radii.last().unwrap() + d);
        d = (d / p.grading).min(p.h_max);
    }
    radii.push(r_c);
    let top = profile.angle_at_radius(r_start)?;
    let mut n0 = p.n_theta;
    while r_start * top / (n0 as f64) > 1.5 * first_spacing {
        n0 *= 2;
    }
    let corner = [0.0, profile.eta0];
    let mut b = Builder {
        profile,
        alpha_star,
        corner,
        nodes: Vec::new(),
        elements: Vec::new(),
        boundary: Vec::new(),
        rings: Vec::new(),
    };
    let ring0 = b.polar_ring(r_start, n0, false)?;
    for i in 0..n0 {
        b.boundary.push(BoundaryEdge { nodes: [ring0.node(i), ring0.node(i + 1)], tag: BoundaryTag::Arc });
    }
    let arc = b.polar_zone(&radii, ring0, p)?;
    let gap = r_c - b.rings[b.rings.len() - 2].radius.unwrap_or(0.0);
    b.outer_zone(arc, r_c, p.h_max, gap)?;
    let mesh = Mesh {
        nodes: b.nodes,
        elements: b.elements,
        boundary: b.boundary,
        grading: p.grading,
        r_inner: r_start,
        corner,
        corner_node: None,
        rings: b.rings,
        alpha_star,
        half_period: profile.half_period(),
    };
    mesh.check_quality(0.2)?;
    Ok(mesh)
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_points(&self, e: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.elements[e];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn min_quality(&self) -> f64 {
        (0..self.elements.len())
            .map(|e| {
                let [a, b, c] = self.element_points(e);
                triangle_quality(a, b, c)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_signed_area(&self) -> f64 {
        (0..self.elements.len())
            .map(|e| {
                let [a, b, c] = self.element_points(e);
                signed_area(a, b, c)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn check_quality(&self, q_min: f64) -> Result<()> {
        for e in 0..self.elements.len() {
            let [a, b, c] = self.element_points(e);
            let q = triangle_quality(a, b, c);
            if !(signed_area(a, b, c) > 0.0) || q < q_min {
                return Err(Error::Mesh(format!(
                    "element {e} near ({:.3e}, {:.3e}) has quality {q:.3}",
                    a[0], a[1]
                )));
            }
        }
        Ok(())
    }

    /// Radii of consecutive polar rings.
    pub fn ring_radii(&self) -> Vec<f64> {
        self.rings.iter().filter_map(|r| r.radius).collect()
    }

    /// Nodes lying on edges with the given tag.
    pub fn tagged_nodes(&self, tag: BoundaryTag) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .boundary
            .iter()
            .filter(|e| e.tag == tag)
            .flat_map(|e| e.nodes)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn count_edges(&self, tag: BoundaryTag) -> usize {
        self.boundary.iter().filter(|e| e.tag == tag).count()
    }

    pub fn area(&self) -> f64 {
        (0..self.elements.len())
            .map(|e| {
                let [a, b, c] = self.element_points(e);
                signed_area(a, b, c)
            })
            .sum()
    }

    /// Checks that every interior edge is shared by exactly two elements and
    /// every other edge carries exactly one boundary tag.
    pub fn check_conforming(&self) -> Result<()> {
        use std::collections::HashMap;
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.elements {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut tagged: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.boundary {
            let [a, b] = e.nodes;
            *tagged.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        for (edge, &c) in &count {
            let t = tagged.get(edge).copied().unwrap_or(0);
            let ok = (c == 2 && t == 0) || (c == 1 && t == 1);
            if !ok {
                return Err(Error::Mesh(format!(
                    "edge {edge:?} shared by {c} elements with {t} boundary tags"
                )));
            }
        }
        if tagged.len() != self.boundary.len() || tagged.keys().any(|e| !count.contains_key(e)) {
            return Err(Error::Mesh("boundary edge not part of any element".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waterwave::profile_from_expansion;
    use std::f64::consts::PI;

    #[test]
    fn default_mesh_is_valid() {
        let prof = profile_from_expansion(0.0, 0.0, 0.5).unwrap();
        let m = generate_mesh(&prof, PI / 3.0, 0.05, 0.85, 80).unwrap();
        m.check_conforming().unwrap();
        assert!(m.min_quality() >= 0.2);
        let pred = 0.05 * 0.85f64.powi(80);
        assert!((m.r_inner / pred - 1.0).abs() < 0.1);
        let exact = {
            let gl = crate::quad::GaussLegendre::new(20);
            let br: Vec<f64> = (0..=60).map(|i| 1.5 * i as f64 / 60.0).collect();
            gl.composite(&br, |x| prof.eta(x))
        };
        assert!((m.area() - exact).abs() < 1e-3, "{} vs {exact}", m.area());
    }

    #[test]
    fn annular_mesh_is_valid() {
        let prof = profile_from_expansion(0.3, -0.2, 0.5).unwrap();
        let m = generate_annular_mesh(&prof, PI / 3.0, 0.1, 0.004, &MeshParams::default()).unwrap();
        m.check_conforming().unwrap();
        assert!(m.count_edges(BoundaryTag::Arc) >= 8);
    }
}
