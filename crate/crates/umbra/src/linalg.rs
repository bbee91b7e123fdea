//! Small dense linear algebra: LU with partial pivoting, determinants, and
//! hyperplane normals. Everything here works on row-major buffers and is only
//! ever used for systems of dimension <= 8.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-13;

/// LU factorization with partial pivoting of a square matrix.
///
/// Factor once, solve many times; the simplex estimators reuse one
/// factorization across millions of right-hand sides.
#[derive(Clone, Debug)]
pub(crate) struct LuFactor {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    det_sign: f64,
}

impl LuFactor {
    /// Factor a row-major `n x n` matrix. Fails on (near-)singular input.
    pub fn new(matrix: &[f64], n: usize) -> Result<Self> {
        debug_assert_eq!(matrix.len(), n * n);
        let mut lu = matrix.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut det_sign = 1.0;
        let scale = lu.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);

        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_val = lu[col * n + col].abs();
            for row in col + 1..n {
                let v = lu[row * n + col].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = row;
                }
            }
            if pivot_val <= PIVOT_EPS * scale {
                return Err(Error::SingularSystem);
            }
            if pivot_row != col {
                for k in 0..n {
                    lu.swap(col * n + k, pivot_row * n + k);
                }
                perm.swap(col, pivot_row);
                det_sign = -det_sign;
            }
            let inv = 1.0 / lu[col * n + col];
            for row in col + 1..n {
                let factor = lu[row * n + col] * inv;
                lu[row * n + col] = factor;
                for k in col + 1..n {
                    lu[row * n + k] -= factor * lu[col * n + k];
                }
            }
        }
        Ok(Self { n, lu, perm, det_sign })
    }

    pub fn det(&self) -> f64 {
        let mut d = self.det_sign;
        for i in 0..self.n {
            d *= self.lu[i * self.n + i];
        }
        d
    }

    /// Solve `A x = b` using the stored factorization.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        debug_assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for row in 1..n {
            let mut acc = x[row];
            for col in 0..row {
                acc -= self.lu[row * n + col] * x[col];
            }
            x[row] = acc;
        }
        for row in (0..n).rev() {
            let mut acc = x[row];
            for col in row + 1..n {
                acc -= self.lu[row * n + col] * x[col];
            }
            x[row] = acc / self.lu[row * n + row];
        }
        x
    }
}

/// Determinant of a row-major `n x n` matrix; 0.0 when numerically singular.
pub(crate) fn det(matrix: &[f64], n: usize) -> f64 {
    match n {
        1 => matrix[0],
        2 => matrix[0] * matrix[3] - matrix[1] * matrix[2],
        3 => det3(matrix),
        _ => LuFactor::new(matrix, n).map(|f| f.det()).unwrap_or(0.0),
    }
}

fn det3(m: &[f64]) -> f64 {
    m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
        + m[2] * (m[3] * m[7] - m[4] * m[6])
}

/// Solve a 3x3 system by Cramer's rule. Columns are `c0, c1, c2`.
pub(crate) fn solve3_columns(
    c0: &[f64; 3],
    c1: &[f64; 3],
    c2: &[f64; 3],
    b: &[f64; 3],
) -> Option<[f64; 3]> {
    let full = [c0[0], c1[0], c2[0], c0[1], c1[1], c2[1], c0[2], c1[2], c2[2]];
    let d = det3(&full);
    if d.abs() < 1e-300 {
        return None;
    }
    let rep = |col: usize| {
        let mut m = full;
        for row in 0..3 {
            m[row * 3 + col] = b[row];
        }
        det3(&m)
    };
    Some([rep(0) / d, rep(1) / d, rep(2) / d])
}

/// Vector orthogonal to `n - 1` row vectors in `n`-space, by cofactor
/// expansion of the (n-1) x n matrix `rows`. Returns the zero vector when the
/// rows are linearly dependent.
pub(crate) fn orthogonal_complement(rows: &[Vec<f64>], n: usize) -> Vec<f64> {
    debug_assert_eq!(rows.len(), n - 1);
    let mut normal = vec![0.0; n];
    let m = n - 1;
    let mut minor = vec![0.0; m * m];
    for (j, slot) in normal.iter_mut().enumerate() {
        for (r, row) in rows.iter().enumerate() {
            let mut c = 0;
            for (k, &v) in row.iter().enumerate() {
                if k != j {
                    minor[r * m + c] = v;
                    c += 1;
                }
            }
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * det(&minor, m);
    }
    normal
}
