//! Small dense complex matrices. Sizes here never exceed a few qubits, so
//! everything is plain row-major storage and O(n^3) loops.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
// unused once a dependency pulls std (and its inherent float methods) into the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        m
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.mul(self).mul(&u.adjoint())
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * rhs[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// `Tr[self · rhs]` without forming the product.
    pub fn trace_product(&self, rhs: &Self) -> C64 {
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * rhs.data[k * n + i];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    ///
    /// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`,
    /// whose spectrum is that of `H` with every eigenvalue doubled.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let m = 2 * n;
        let mut s = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                // symmetrise to absorb tiny Hermiticity defects
                let h = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                s[i * m + j] = h.re;
                s[(i + n) * m + (j + n)] = h.re;
                s[i * m + (j + n)] = -h.im;
                s[(i + n) * m + j] = h.im;
            }
        }
        let mut ev = jacobi_eigenvalues(&mut s, m);
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        ev.into_iter().step_by(2).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Cyclic Jacobi rotations on a real symmetric matrix; destroys `a`.
fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Least-squares solve of a real `rows x cols` system (cols <= rows) via the
/// normal equations with partial-pivot elimination. Returns `None` when the
/// columns are numerically dependent.
pub fn least_squares(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let rows = b.len();
    let cols = a.len();
    if cols == 0 {
        return Some(Vec::new());
    }
    // a is column-major: a[j][i] is row i of column j
    let mut g = vec![vec![0.0; cols + 1]; cols];
    for r in 0..cols {
        for c in 0..cols {
            g[r][c] = (0..rows).map(|i| a[r][i] * a[c][i]).sum();
        }
        g[r][cols] = (0..rows).map(|i| a[r][i] * b[i]).sum();
    }
    let norm = g
        .iter()
        .flat_map(|r| r[..cols].iter())
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    for col in 0..cols {
        let piv = (col..cols).max_by(|&x, &y| {
            g[x][col]
                .abs()
                .partial_cmp(&g[y][col].abs())
                .unwrap_or(core::cmp::Ordering::Equal)
        })?;
        if g[piv][col].abs() <= 1e-13 * norm.max(1e-300) {
            return None;
        }
        g.swap(col, piv);
        for r in 0..cols {
            if r != col {
                let f = g[r][col] / g[col][col];
                for c in col..=cols {
                    g[r][c] -= f * g[col][c];
                }
            }
        }
    }
    Some((0..cols).map(|r| g[r][cols] / g[r][r]).collect())
}

/// Kahan-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_pauli_y() {
        let y = CMatrix::from_rows(&[&[ZERO, -I], &[I, ZERO]]).unwrap();
        let ev = y.hermitian_eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_bell_projector() {
        let h = 0.5f64.sqrt();
        let v = [C64::new(h, 0.0), ZERO, ZERO, C64::new(0.0, h)];
        let ev = CMatrix::outer(&v).hermitian_eigenvalues();
        assert!(ev[..3].iter().all(|x| x.abs() < 1e-14));
        assert!((ev[3] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn least_squares_recovers_exact_solution() {
        let a = vec![vec![1.0, 0.0, 1.0], vec![0.0, 2.0, 1.0]];
        let b = [3.0, 4.0, 5.0];
        let x = least_squares(&a, &b).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
        assert!(least_squares(&[vec![1.0, 1.0], vec![2.0, 2.0]], &[1.0, 1.0]).is_none());
    }
}
