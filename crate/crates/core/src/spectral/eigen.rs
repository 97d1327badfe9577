//! Cyclic Jacobi eigendecomposition of dense symmetric matrices.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on the off-diagonal Frobenius norm, relative to `‖A‖_F`.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-11;

/// Inputs further than this (relative to the largest entry) from symmetry are rejected.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Eigenvalues in descending order with unit eigenvectors as matching columns.
///
/// Each eigenvector is signed so that its largest-magnitude entry (first one
/// on ties) is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Matrix,
    pub sweeps: usize,
}

impl EigenPairs {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Column `p`.
    pub fn vector(&self, p: usize) -> Vec<f64> {
        self.vectors.column(p)
    }

    /// `U Λ Uᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.values.len();
        let mut out = Matrix::zeros(n, n);
        for p in 0..n {
            let lam = self.values[p];
            for i in 0..n {
                let ui = lam * self.vectors[(i, p)];
                for j in 0..n {
                    out[(i, j)] += ui * self.vectors[(j, p)];
                }
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Applies the rotation annihilating `a[p][q]`; `vt` holds eigenvectors as rows.
fn rotate(a: &mut Matrix, vt: &mut Matrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let (app, aqq) = (a[(p, p)], a[(q, q)]);
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    let data = vt.as_mut_slice();
    let (lo, hi) = data.split_at_mut(q * n);
    let row_p = &mut lo[p * n..(p + 1) * n];
    let row_q = &mut hi[..n];
    for (vp, vq) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (x, y) = (*vp, *vq);
        *vp = c * x - s * y;
        *vq = s * x + c * y;
    }
}

pub fn jacobi_eigen(input: &Matrix) -> Result<EigenPairs> {
    let n = input.rows();
    if input.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: input.cols() });
    }
    if let Some(pos) = input.as_slice().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: pos / n.max(1), col: pos % n.max(1) });
    }
    let scale = input.as_slice().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let asym = input.asymmetry().unwrap_or(0.0);
    if asym > SYMMETRY_TOLERANCE * scale {
        return Err(Error::InvalidArgument(format!("matrix is not symmetric (max deviation {asym:e})")));
    }

    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (input[(i, j)] + input[(j, i)]));
    let mut vt = Matrix::identity(n);
    let tol = OFF_DIAGONAL_TOLERANCE * a.frobenius_norm();

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // negligible next to both diagonal entries: drop instead of rotating
                if sweeps > 4 {
                    let g = 100.0 * apq.abs();
                    if a[(p, p)].abs() + g == a[(p, p)].abs() && a[(q, q)].abs() + g == a[(q, q)].abs() {
                        a[(p, q)] = 0.0;
                        a[(q, p)] = 0.0;
                        continue;
                    }
                }
                rotate(&mut a, &mut vt, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (p, &src) in order.iter().enumerate() {
        let row = vt.row(src);
        let mut pivot = 0;
        for (i, v) in row.iter().enumerate() {
            if v.abs() > row[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if row[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (i, v) in row.iter().enumerate() {
            vectors[(i, p)] = sign * v;
        }
    }
    Ok(EigenPairs { values, vectors, sweeps })
}
