use std::fmt;

use crate::complex::BigComplex;
use crate::error::{Error, Result};

/// A square matrix acting on `C^2` or `C^3`, with its determinant cached.
#[derive(Clone, PartialEq)]
pub struct LinearSubstitution {
    dim: usize,
    entries: Vec<BigComplex>,
    det: BigComplex,
}

impl fmt::Debug for LinearSubstitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<(f64, f64)>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_c64()).collect())
            .collect();
        f.debug_struct("LinearSubstitution")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

impl LinearSubstitution {
    /// Row-major entries.
    pub fn new(dim: usize, entries: Vec<BigComplex>) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidConfig(format!("dimension {dim} is not 2 or 3")));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let det = determinant(dim, &entries);
        Ok(Self { dim, entries, det })
    }

    pub fn from_rows(rows: Vec<Vec<BigComplex>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.len(),
                });
            }
            entries.extend(r);
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize, prec: u32) -> Self {
        Self::scalar(dim, BigComplex::one(prec))
    }

    pub fn scalar(dim: usize, c: BigComplex) -> Self {
        let prec = c.prec();
        let mut entries = vec![BigComplex::zero(prec); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c.clone();
        }
        Self::new(dim, entries).expect("square scalar matrix")
    }

    pub fn diagonal(diag: Vec<BigComplex>) -> Result<Self> {
        let dim = diag.len();
        let prec = diag.first().map_or(64, BigComplex::prec);
        let mut entries = vec![BigComplex::zero(prec); dim * dim];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * dim + i] = d;
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prec(&self) -> u32 {
        self.entries[0].prec()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[BigComplex] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigComplex] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn determinant(&self) -> &BigComplex {
        &self.det
    }

    /// Recomputes the determinant and compares it with the cached value.
    pub fn determinant_drift(&self) -> f64 {
        determinant(self.dim, &self.entries).dist_f64(&self.det)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(
            self.dim,
            self.entries.iter().map(|e| e.with_prec(prec)).collect(),
        )
        .expect("same shape")
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let n = self.dim;
        let prec = self.prec().max(other.prec());
        let mut out = vec![BigComplex::zero(prec); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out[i * n + j].add_mul(a, other.get(k, j));
                }
            }
        }
        Self::new(n, out)
    }

    /// `self * point`.
    pub fn apply(&self, point: &[BigComplex]) -> Result<Vec<BigComplex>> {
        self.check_dim(point.len())?;
        Ok((0..self.dim)
            .map(|i| {
                let mut acc = BigComplex::zero(self.prec());
                for (a, x) in self.row(i).iter().zip(point) {
                    acc.add_mul(a, x);
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, c: &BigComplex) -> Self {
        Self::new(self.dim, self.entries.iter().map(|e| e * c).collect()).expect("same shape")
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        Self::new(n, entries).expect("same shape")
    }

    /// Inverse by the adjugate.
    pub fn inverse(&self) -> Result<Self> {
        if self.det.abs_f64() == 0.0 {
            return Err(Error::degenerate("matrix inverse", "singular matrix"));
        }
        let n = self.dim;
        let inv_det = self.det.recip();
        let adj: Vec<BigComplex> = match n {
            2 => vec![
                self.get(1, 1).clone(),
                -self.get(0, 1),
                -self.get(1, 0),
                self.get(0, 0).clone(),
            ],
            _ => {
                let mut out = Vec::with_capacity(9);
                for i in 0..3 {
                    for j in 0..3 {
                        // adj[i][j] = cofactor[j][i]
                        let (r0, r1) = other_two(j);
                        let (c0, c1) = other_two(i);
                        let m = self.get(r0, c0) * self.get(r1, c1)
                            - self.get(r0, c1) * self.get(r1, c0);
                        out.push(if (i + j) % 2 == 0 { m } else { -m });
                    }
                }
                out
            }
        };
        Self::new(n, adj.into_iter().map(|e| &e * &inv_det).collect())
    }

    /// Rescales by a principal `dim`-th root of the determinant so the result
    /// has determinant 1.
    pub fn normalized_unimodular(&self) -> Result<Self> {
        if self.det.abs_f64() == 0.0 {
            return Err(Error::degenerate("normalize", "singular matrix"));
        }
        let root = match self.dim {
            2 => self.det.sqrt(),
            _ => self.det.cbrt(),
        };
        Ok(self.scale(&root.recip()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_entry_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.dist_f64(b))
            .fold(0.0, f64::max)
    }

    pub fn max_entry_abs(&self) -> f64 {
        self.entries.iter().map(BigComplex::abs_f64).fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> Vec<(f64, f64)> {
        self.entries.iter().map(BigComplex::to_c64).collect()
    }

    /// `Some(c)` when `self = c * Id` to the given absolute tolerance.
    pub fn as_scalar(&self, tol: f64) -> Option<BigComplex> {
        let c = self.get(0, 0);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self.get(i, j);
                let off = if i == j { e.dist_f64(c) } else { e.abs_f64() };
                if off > tol {
                    return None;
                }
            }
        }
        Some(c.clone())
    }

    /// Index of the first entry of largest modulus, ties resolved within
    /// `1e-9` relative toward the earliest index.
    pub fn pivot_index(&self) -> usize {
        let mods: Vec<f64> = self.entries.iter().map(BigComplex::abs_f64).collect();
        let m = mods.iter().cloned().fold(0.0, f64::max);
        mods.iter()
            .position(|&x| x >= m * (1.0 - 1e-9))
            .unwrap_or(0)
    }

    /// The matrix divided by its pivot entry, a representative that is the
    /// same for every scalar multiple.
    pub fn phase_normalized(&self) -> Self {
        let p = self.entries[self.pivot_index()].recip();
        self.scale(&p)
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: d,
            });
        }
        Ok(())
    }
}

fn other_two(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

fn determinant(dim: usize, e: &[BigComplex]) -> BigComplex {
    match dim {
        2 => &e[0] * &e[3] - &e[1] * &e[2],
        _ => {
            let m0 = &e[4] * &e[8] - &e[5] * &e[7];
            let m1 = &e[3] * &e[8] - &e[5] * &e[6];
            let m2 = &e[3] * &e[7] - &e[4] * &e[6];
            &e[0] * &m0 - &e[1] * &m1 + &e[2] * &m2
        }
    }
}

/// Determinant of an arbitrary square matrix by Gaussian elimination with
/// partial pivoting. Consumes the matrix.
pub fn det_gauss(n: usize, mut a: Vec<BigComplex>) -> BigComplex {
    let prec = a.first().map_or(64, BigComplex::prec);
    let mut det = BigComplex::one(prec);
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col * n + col].norm_sqr();
        for r in col + 1..n {
            let v = a[r * n + col].norm_sqr();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best.is_zero() {
            return BigComplex::zero(prec);
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = -det;
        }
        let inv = a[col * n + col].recip();
        det = &det * &a[col * n + col];
        for r in col + 1..n {
            if a[r * n + col].is_zero() {
                continue;
            }
            let factor = &a[r * n + col] * &inv;
            for c in col + 1..n {
                let (top, bottom) = a.split_at_mut(r * n);
                bottom[c].sub_mul(&factor, &top[col * n + c]);
            }
        }
    }
    det
}
