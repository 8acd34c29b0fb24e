//! Small dense-matrix support: storage, symmetric eigendecomposition, and
//! the symmetric PSD square root used to correlate Gaussian vectors.
//!
//! Dimensions here top out around 1000, so a plain row-major `Vec<f64>` and
//! a cyclic Jacobi sweep are entirely adequate and keep the numerical
//! behavior easy to audit.

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            data: vec![0.0; rows * cols],
            rows,
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row slices; all rows must share one length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "Matrix::from_rows",
                    expected: c,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            data,
            rows: r,
            cols: c,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product `A v`.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "Matrix::matvec",
                expected: self.cols,
                actual: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
            .collect())
    }

    /// Matrix product `A B`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "Matrix::matmul",
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest symmetry defect, as `(i, j, |a_ij - a_ji|)`, or `None` for
    /// a non-square matrix.
    fn worst_asymmetry(&self) -> Option<(usize, usize, f64)> {
        if self.rows != self.cols {
            return None;
        }
        let mut worst = (0, 0, 0.0);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let d = (self.get(i, j) - self.get(j, i)).abs();
                if d > worst.2 {
                    worst = (i, j, d);
                }
            }
        }
        Some(worst)
    }
}

/// Maximum number of cyclic Jacobi sweeps before giving up.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius norm of a square matrix.
fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j) * a.get(i, j);
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors stored as the
/// columns of the returned matrix, so `A = V diag(lambda) V^T`. Iteration
/// stops once the off-diagonal Frobenius norm falls below `1e-12` relative
/// to the scale of the input.
pub fn jacobi_eigen_sym(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch {
            context: "jacobi_eigen_sym",
            expected: a.rows(),
            actual: a.cols(),
        });
    }
    let n = a.rows();
    let (wi, wj, delta) = a.worst_asymmetry().unwrap();
    let scale = a.frobenius_norm().max(1.0);
    if delta > 1e-9 * scale {
        return Err(Error::NotSymmetric {
            i: wi,
            j: wj,
            delta,
        });
    }

    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    let tol = 1e-12 * scale;

    for sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&w) <= tol {
            let eigenvalues = (0..n).map(|i| w.get(i, i)).collect();
            return Ok((eigenvalues, v));
        }
        let _ = sweep;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                // Rotation angle that annihilates w[p][q].
                let theta = (w.get(q, q) - w.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = w.get(p, p);
                let aqq = w.get(q, q);
                w.set(p, p, app - t * apq);
                w.set(q, q, aqq + t * apq);
                w.set(p, q, 0.0);
                w.set(q, p, 0.0);
                for k in 0..n {
                    if k != p && k != q {
                        let akp = w.get(k, p);
                        let akq = w.get(k, q);
                        w.set(k, p, c * akp - s * akq);
                        w.set(p, k, c * akp - s * akq);
                        w.set(k, q, s * akp + c * akq);
                        w.set(q, k, s * akp + c * akq);
                    }
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if off_diagonal_norm(&w) <= tol {
        let eigenvalues = (0..n).map(|i| w.get(i, i)).collect();
        return Ok((eigenvalues, v));
    }
    Err(Error::NoConvergence {
        sweeps: JACOBI_MAX_SWEEPS,
    })
}

/// Eigenvalues this far below zero are treated as round-off and clamped.
const PSD_CLAMP: f64 = 1e-10;

/// Symmetric square root `S` of a symmetric PSD matrix, with `S S = A`.
///
/// Eigenvalues in `[-1e-10, 0)` are clamped to zero; anything lower is an
/// error rather than silently producing a complex root.
pub fn matrix_sqrt(a: &Matrix) -> Result<Matrix> {
    let (eigenvalues, v) = jacobi_eigen_sym(a)?;
    let n = a.rows();
    let mut roots = Vec::with_capacity(n);
    for &lambda in &eigenvalues {
        if lambda < -PSD_CLAMP {
            return Err(Error::NotPositiveSemidefinite { value: lambda });
        }
        roots.push(lambda.max(0.0).sqrt());
    }
    // S = V diag(sqrt(lambda)) V^T, then symmetrized to remove round-off.
    let mut s = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut sum = 0.0;
            for (k, &root) in roots.iter().enumerate() {
                sum += v.get(i, k) * root * v.get(j, k);
            }
            s.set(i, j, sum);
            s.set(j, i, sum);
        }
    }
    Ok(s)
}
