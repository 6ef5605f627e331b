//! Banded factorizations of shifted pencils A − sM, with an optional dense
//! border row/column for the enrichment unknown.

use crate::error::{Error, Result};

use super::sparse::Csr;

/// LU with partial pivoting of a general band matrix (LAPACK gbtf2 layout).
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    /// Factorizes the leading n×n block of `a` (entries outside the band of
    /// half width `b` must vanish).
    pub fn factor(a: &Csr, n: usize, b: usize) -> Result<Self> {
        let (kl, ku) = (b, b);
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![0.0; ldab * n];
        let idx = |r: usize, c: usize| c * ldab + (kl + ku + r - c);
        for r in 0..n {
            for (c, v) in a.row(r) {
                if c < n {
                    if r.abs_diff(c) > b {
                        return Err(Error::Solver(format!("entry ({r}, {c}) outside band {b}")));
                    }
                    ab[idx(r, c)] += v;
                }
            }
        }
        let mut piv = vec![0; n];
        let mut ju = 0usize;
        let scale = ab.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut p = 0;
            let mut best = ab[idx(j, j)].abs();
            for i in 1..=km {
                let v = ab[idx(j + i, j)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[j] = j + p;
            if !(best > 1e-300 * scale.max(1e-300)) {
                return Err(Error::Solver(format!("singular band matrix at column {j}")));
            }
            ju = ju.max((j + ku + p).min(n - 1));
            if p != 0 {
                for c in j..=ju {
                    ab.swap(idx(j, c), idx(j + p, c));
                }
            }
            let d = ab[idx(j, j)];
            for i in 1..=km {
                ab[idx(j + i, j)] /= d;
            }
            for c in j + 1..=ju {
                let u = ab[idx(j, c)];
                if u != 0.0 {
                    for i in 1..=km {
                        ab[idx(j + i, c)] -= ab[idx(j + i, j)] * u;
                    }
                }
            }
        }
        Ok(Self { n, kl, ku, ldab, ab, piv })
    }

    fn at(&self, r: usize, c: usize) -> f64 {
        self.ab[c * self.ldab + (self.kl + self.ku + r - c)]
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        for j in 0..n {
            let p = self.piv[j];
            if p != j {
                x.swap(j, p);
            }
            let km = self.kl.min(n - 1 - j);
            let xj = x[j];
            for i in 1..=km {
                x[j + i] -= self.at(j + i, j) * xj;
            }
        }
        let w = self.kl + self.ku;
        for j in (0..n).rev() {
            x[j] /= self.at(j, j);
            let xj = x[j];
            for i in j.saturating_sub(w)..j {
                x[i] -= self.at(i, j) * xj;
            }
        }
    }
}

/// LDLᵀ without pivoting of a symmetric band matrix; used for inertia.
#[derive(Debug, Clone)]
pub struct BandLdl {
    n: usize,
    b: usize,
    /// low[i·(b+1) + t] = L[i][i − b + t]; diagonal slot holds D.
    low: Vec<f64>,
    pub negative: usize,
}

impl BandLdl {
    pub fn factor(a: &Csr, n: usize, b: usize) -> Result<Self> {
        let w = b + 1;
        let mut low = vec![0.0; n * w];
        for r in 0..n {
            for (c, v) in a.row(r) {
                if c <= r && r - c <= b {
                    low[r * w + (b + c - r)] += v;
                }
            }
        }
        let mut negative = 0;
        let mut col = vec![0.0; b + 1];
        for j in 0..n {
            let d = low[j * w + b];
            if !(d.abs() > 0.0) || !d.is_finite() {
                return Err(Error::Solver(format!("zero pivot at {j} in LDLᵀ")));
            }
            if d < 0.0 {
                negative += 1;
            }
            let last = (j + b).min(n - 1);
            for i in j + 1..=last {
                col[i - j] = low[i * w + (b + j - i)];
            }
            for i in j + 1..=last {
                let li = col[i - j] / d;
                if li == 0.0 {
                    continue;
                }
                for c in j + 1..=i {
                    low[i * w + (b + c - i)] -= li * col[c - j];
                }
                low[i * w + (b + j - i)] = li;
            }
        }
        Ok(Self { n, b, low, negative })
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, b, w) = (self.n, self.b, self.b + 1);
        for i in 0..n {
            let mut s = x[i];
            for c in i.saturating_sub(b)..i {
                s -= self.low[i * w + (b + c - i)] * x[c];
            }
            x[i] = s;
        }
        for i in 0..n {
            x[i] /= self.low[i * w + b];
        }
        for i in (0..n).rev() {
            let xi = x[i];
            for c in i.saturating_sub(b)..i {
                x[c] -= self.low[i * w + (b + c - i)] * xi;
            }
        }
    }
}

/// Extracts the border column (rows 0..n) and corner value of a bordered matrix.
fn border(a: &Csr, n: usize) -> (Vec<f64>, f64) {
    let mut c = vec![0.0; n];
    let mut d = 0.0;
    for (j, v) in a.row(n) {
        if j < n {
            c[j] = v;
        } else {
            d = v;
        }
    }
    (c, d)
}

/// Solver for a symmetric matrix whose first `n_band` unknowns are banded
/// and whose last unknown (if present) couples densely.
#[derive(Debug, Clone)]
pub struct BorderedLu {
    lu: BandLu,
    n_band: usize,
    /// (B⁻¹c, Schur complement d − cᵀB⁻¹c, c)
    border: Option<(Vec<f64>, f64, Vec<f64>)>,
}

impl BorderedLu {
    pub fn factor(a: &Csr, n_band: usize, b: usize) -> Result<Self> {
        let lu = BandLu::factor(a, n_band, b)?;
        let border = if a.n > n_band {
            let (c, d) = border(a, n_band);
            let mut z = c.clone();
            lu.solve_in_place(&mut z);
            let schur = d - Csr::dot(&c, &z);
            if !(schur.abs() > 0.0) {
                return Err(Error::Solver("singular Schur complement".into()));
            }
            Some((z, schur, c))
        } else {
            None
        };
        Ok(Self { lu, n_band, border })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n_band;
        let mut x = rhs[..n].to_vec();
        self.lu.solve_in_place(&mut x);
        if let Some((z, schur, c)) = &self.border {
            let y = (rhs[n] - Csr::dot(c, &x)) / schur;
            for (xi, zi) in x.iter_mut().zip(z) {
                *xi -= y * zi;
            }
            x.push(y);
        }
        x
    }
}

/// Number of negative eigenvalues of a symmetric bordered matrix.
pub fn inertia_negative(a: &Csr, n_band: usize, b: usize) -> Result<usize> {
    let ldl = BandLdl::factor(a, n_band, b)?;
    let mut neg = ldl.negative;
    if a.n > n_band {
        let (c, d) = border(a, n_band);
        let mut z = c.clone();
        ldl.solve_in_place(&mut z);
        if d - Csr::dot(&c, &z) < 0.0 {
            neg += 1;
        }
    }
    Ok(neg)
}
