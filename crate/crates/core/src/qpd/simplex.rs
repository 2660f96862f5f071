//! Dense two-phase simplex for `min ‖x‖₁ s.t. A x = b`.
//!
//! `x` is split as `x⁺ − x⁻` with both parts nonnegative, giving a standard
//! form LP with unit costs. Bland's rule (lowest index enters, lowest basic
//! index leaves on ties) rules out cycling. Problem sizes here are a handful
//! of rows and at most a few hundred columns.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::tol;

const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct L1Solution {
    pub x: Vec<f64>,
    pub l1_norm: f64,
    /// `max_r |(A x − b)_r|`.
    pub residual: f64,
}

struct Tableau {
    rows: usize,
    cols: usize, // structural + artificial, rhs stored separately
    a: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    obj: Vec<f64>,
    obj_rhs: f64,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        self.rhs[r] /= p;
        let pivot_row = self.a[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.rows {
            if i != r {
                let f = self.a[i][c];
                if f != 0.0 {
                    for (v, pv) in self.a[i].iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                    self.rhs[i] -= f * pivot_rhs;
                }
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.obj_rhs -= f * pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Iterate to optimality over columns `< enter_limit`.
    fn optimise(&mut self, enter_limit: usize) {
        // Bland's rule terminates; the cap only guards against NaN input.
        for _ in 0..10_000 {
            let Some(c) = (0..enter_limit).find(|&j| self.obj[j] < -PIVOT_EPS) else {
                return;
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let arc = self.a[r][c];
                if arc > PIVOT_EPS {
                    let ratio = self.rhs[r] / arc;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < bratio - 1e-15
                                || (ratio <= bratio + 1e-15 && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                // unbounded direction: impossible with nonnegative costs
                None => return,
            }
        }
    }
}

/// Minimum-L1 solution of `columns · x = b`. `columns[j]` is column `j` of `A`.
pub fn solve_l1(columns: &[Vec<f64>], b: &[f64]) -> Result<L1Solution> {
    let m = b.len();
    let k = columns.len();
    if columns.iter().any(|c| c.len() != m) {
        return Err(Error::Dimension {
            expected: m,
            got: columns.iter().map(|c| c.len()).find(|&l| l != m).unwrap_or(0),
        });
    }
    if b.iter().chain(columns.iter().flatten()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("LP data"));
    }
    let structural = 2 * k;
    let cols = structural + m;
    let mut a = vec![vec![0.0; cols]; m];
    let mut rhs = vec![0.0; m];
    for r in 0..m {
        let s = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..k {
            a[r][j] = s * columns[j][r];
            a[r][j + k] = -s * columns[j][r];
        }
        a[r][structural + r] = 1.0;
        rhs[r] = s * b[r];
    }
    // phase I: minimise the sum of artificials
    let mut obj = vec![0.0; cols];
    let mut obj_rhs = 0.0;
    for r in 0..m {
        for j in 0..structural {
            obj[j] -= a[r][j];
        }
        obj_rhs -= rhs[r];
    }
    let mut t = Tableau {
        rows: m,
        cols,
        a,
        rhs,
        obj,
        obj_rhs,
        basis: (structural..cols).collect(),
    };
    t.optimise(structural);
    let phase1 = -t.obj_rhs;
    let scale = b.iter().map(|v| v.abs()).fold(1.0, f64::max);
    if phase1 > 1e-9 * scale {
        return Err(Error::Infeasible { residual: phase1 });
    }
    // drive zero-level artificials out where possible
    for r in 0..m {
        if t.basis[r] >= structural {
            if let Some(c) = (0..structural).find(|&j| t.a[r][j].abs() > 1e-9) {
                t.pivot(r, c);
            }
        }
    }
    // phase II: unit costs on structural columns
    let mut obj = vec![0.0; t.cols];
    obj[..structural].iter_mut().for_each(|v| *v = 1.0);
    let mut obj_rhs = 0.0;
    for r in 0..m {
        let bc = t.basis[r];
        if bc < structural {
            for j in 0..t.cols {
                obj[j] -= t.a[r][j];
            }
            obj_rhs -= t.rhs[r];
        }
    }
    t.obj = obj;
    t.obj_rhs = obj_rhs;
    t.optimise(structural);

    let mut y = vec![0.0; structural];
    for r in 0..m {
        if t.basis[r] < structural {
            y[t.basis[r]] = t.rhs[r];
        }
    }
    let mut x: Vec<f64> = (0..k).map(|j| y[j] - y[j + k]).collect();
    polish(columns, b, &mut x);
    let residual = residual(columns, b, &x);
    if residual > tol::LP_FEAS * scale {
        return Err(Error::Infeasible { residual });
    }
    Ok(L1Solution {
        l1_norm: x.iter().map(|v| v.abs()).sum(),
        x,
        residual,
    })
}

/// Zero tiny entries and re-solve exactly on the remaining support.
fn polish(columns: &[Vec<f64>], b: &[f64], x: &mut [f64]) {
    for v in x.iter_mut() {
        if v.abs() < tol::ZERO_COEFF {
            *v = 0.0;
        }
    }
    let support: Vec<usize> = (0..x.len()).filter(|&j| x[j] != 0.0).collect();
    let sub: Vec<Vec<f64>> = support.iter().map(|&j| columns[j].clone()).collect();
    if let Some(sol) = least_squares(&sub, b) {
        let mut candidate = x.to_vec();
        for (&j, &v) in support.iter().zip(&sol) {
            candidate[j] = v;
        }
        if residual(columns, b, &candidate) <= residual(columns, b, x) {
            x.copy_from_slice(&candidate);
        }
    }
}

pub(crate) fn residual(columns: &[Vec<f64>], b: &[f64], x: &[f64]) -> f64 {
    (0..b.len())
        .map(|r| {
            let ax: f64 = columns.iter().zip(x).map(|(c, v)| c[r] * v).sum();
            (ax - b[r]).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn picks_the_sparse_cheap_solution() {
        // x0 + x1 = 1, x1 + x2 = 1 → best is x1 = 1
        let cols = vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        let sol = solve_l1(&cols, &[1.0, 1.0]).unwrap();
        assert!((sol.x[1] - 1.0).abs() < 1e-14);
        assert!((sol.l1_norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn handles_negative_coefficients() {
        // only way to reach (1, -1) is with a negative weight
        let cols = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let sol = solve_l1(&cols, &[1.0, -1.0]).unwrap();
        assert_eq!(sol.x, vec![1.0, -1.0]);
        assert_eq!(sol.l1_norm, 2.0);
    }

    #[test]
    fn reports_infeasibility() {
        let cols = vec![vec![1.0, 1.0]];
        assert!(matches!(
            solve_l1(&cols, &[1.0, 2.0]),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn redundant_rows_are_fine() {
        let cols = vec![vec![1.0, 2.0], vec![1.0, 2.0], vec![2.0, 4.0]];
        let sol = solve_l1(&cols, &[2.0, 4.0]).unwrap();
        assert!((sol.l1_norm - 1.0).abs() < 1e-12);
        assert!(sol.residual < 1e-14);
    }
}
