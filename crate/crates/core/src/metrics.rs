//! Embedding quality measures.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::dataset::{LabelSet, PointCloud};
use crate::error::{Error, Result};
use crate::matrix::{dist, dot, sq_dist, Matrix};
use crate::spectral::{jacobi_eigen, sammon_stress_of};

/// Least-squares alignment of `B` onto `A`: `A ≈ s·B·R + t` with rows as points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcrustesReport {
    pub rmse: f64,
    pub rotation: Matrix,
    pub scale: f64,
    pub translation: Vec<f64>,
}

impl ProcrustesReport {
    /// `s·B·R + t`.
    pub fn apply(&self, b: &Matrix) -> Matrix {
        let mut out = b.matmul(&self.rotation).scale(self.scale);
        for i in 0..out.rows() {
            for (v, t) in out.row_mut(i).iter_mut().zip(&self.translation) {
                *v += t;
            }
        }
        out
    }
}

fn column_means(m: &Matrix) -> Vec<f64> {
    let n = m.rows() as f64;
    (0..m.cols()).map(|j| m.column(j).iter().sum::<f64>() / n).collect()
}

fn centered(m: &Matrix, mean: &[f64]) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)] - mean[j])
}

/// Orthogonal `R` maximizing `tr(Rᵀ M)` and the singular values of `M`.
fn orthogonal_factor(m: &Matrix) -> Result<(Matrix, Vec<f64>)> {
    let d = m.rows();
    let eig = jacobi_eigen(&m.transpose().matmul(m))?;
    let sigma: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let floor = 1e-12 * sigma.first().copied().unwrap_or(0.0);

    // left singular vectors as columns; weak directions are completed by Gram-Schmidt
    let mut u: Vec<Vec<f64>> = Vec::with_capacity(d);
    for p in 0..d {
        let v = eig.vector(p);
        let candidate: Vec<f64> = if sigma[p] > floor && sigma[p] > 0.0 {
            (0..d).map(|i| dot(m.row(i), &v) / sigma[p]).collect()
        } else {
            let mut best = vec![0.0; d];
            let mut best_norm = -1.0;
            for e in 0..d {
                let mut w = vec![0.0; d];
                w[e] = 1.0;
                for q in &u {
                    let c = dot(&w, q);
                    w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                }
                let nw = dot(&w, &w).sqrt();
                if nw > best_norm {
                    best_norm = nw;
                    best = w;
                }
            }
            best
        };
        let mut w = candidate;
        for q in &u {
            let c = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let nw = dot(&w, &w).sqrt();
        w.iter_mut().for_each(|a| *a /= nw);
        u.push(w);
    }
    let r = Matrix::from_fn(d, d, |i, j| (0..d).map(|p| u[p][i] * eig.vectors[(j, p)]).sum());
    Ok((r, sigma))
}

pub fn procrustes(a: &Matrix, b: &Matrix, allow_scale: bool) -> Result<ProcrustesReport> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch { expected: a.rows() * a.cols(), actual: b.rows() * b.cols() });
    }
    let (n, d) = a.shape();
    if d == 0 || n < d {
        return Err(Error::InvalidArgument(format!("procrustes needs n >= d >= 1, got n={n}, d={d}")));
    }
    let mean_a = column_means(a);
    let mean_b = column_means(b);
    let ac = centered(a, &mean_a);
    let bc = centered(b, &mean_b);
    let (rotation, sigma) = orthogonal_factor(&bc.transpose().matmul(&ac))?;
    let b_norm2: f64 = bc.as_slice().iter().map(|v| v * v).sum();
    let scale = if allow_scale && b_norm2 > 0.0 { sigma.iter().sum::<f64>() / b_norm2 } else { 1.0 };
    let rotated_mean: Vec<f64> = (0..d).map(|j| (0..d).map(|k| mean_b[k] * rotation[(k, j)]).sum()).collect();
    let translation: Vec<f64> = (0..d).map(|j| mean_a[j] - scale * rotated_mean[j]).collect();
    let mut report = ProcrustesReport { rmse: 0.0, rotation, scale, translation };
    let fitted = report.apply(b);
    let residual: f64 = (0..n).map(|i| sq_dist(a.row(i), fitted.row(i))).sum();
    report.rmse = (residual / n as f64).sqrt();
    Ok(report)
}

/// Net turns of an ordered planar path about `center`; positive is counter-clockwise.
///
/// Each step contributes its polar-angle increment wrapped to `(-π, π]`, so
/// consecutive samples must subtend less than half a turn.
pub fn winding_count(path: &Matrix, center: [f64; 2]) -> Result<f64> {
    if path.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: path.cols() });
    }
    if path.rows() < 3 {
        return Err(Error::InvalidArgument(format!("winding count needs at least 3 points, got {}", path.rows())));
    }
    let rel: Vec<[f64; 2]> = path.row_iter().map(|p| [p[0] - center[0], p[1] - center[1]]).collect();
    let at_center: Vec<usize> = rel.iter().enumerate().filter(|(_, r)| r[0] == 0.0 && r[1] == 0.0).map(|(i, _)| i).collect();
    if !at_center.is_empty() {
        return Err(Error::DegenerateReference { indices: at_center });
    }
    let mut total = 0.0;
    for w in rel.windows(2) {
        let [a, b] = [w[0], w[1]];
        let mut step = (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
        if step == -PI {
            step = PI;
        }
        total += step;
    }
    Ok(total / (2.0 * PI))
}

/// Index of the nearest other row, lower index on ties.
fn nearest_other(coords: &Matrix, i: usize) -> usize {
    let yi = coords.row(i);
    let mut best = usize::MAX;
    let mut best_d = f64::INFINITY;
    for j in 0..coords.rows() {
        if j == i {
            continue;
        }
        let dj = sq_dist(yi, coords.row(j));
        if dj < best_d {
            best_d = dj;
            best = j;
        }
    }
    best
}

/// Leave-one-out 1-nearest-neighbour label agreement.
pub fn nn_label_accuracy(coords: &Matrix, labels: &LabelSet) -> Result<f64> {
    let n = coords.rows();
    if labels.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: labels.len() });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("nearest-neighbour accuracy needs at least 2 points".into()));
    }
    let hits = (0..n).into_par_iter().filter(|&i| labels.get(nearest_other(coords, i)) == labels.get(i)).count();
    Ok(hits as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub min_cross: f64,
    pub hausdorff: f64,
}

/// Closest approach between two point sets and their symmetric Hausdorff distance.
pub fn set_separation(a: &Matrix, b: &Matrix) -> Result<Separation> {
    if a.rows() == 0 || b.rows() == 0 {
        return Err(Error::InvalidArgument("point sets must be non-empty".into()));
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch { expected: a.cols(), actual: b.cols() });
    }
    let directed = |x: &Matrix, y: &Matrix| -> Vec<f64> {
        (0..x.rows())
            .into_par_iter()
            .map(|i| y.row_iter().map(|q| dist(x.row(i), q)).fold(f64::INFINITY, f64::min))
            .collect()
    };
    let ab = directed(a, b);
    let ba = directed(b, a);
    let min_cross = ab.iter().copied().fold(f64::INFINITY, f64::min);
    let hausdorff = ab.iter().chain(&ba).copied().fold(0.0, f64::max);
    Ok(Separation { min_cross, hausdorff })
}

/// Largest pairwise distance.
pub fn diameter(coords: &Matrix) -> f64 {
    let n = coords.rows();
    (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| dist(coords.row(i), coords.row(j))).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max)
}

/// `λ₂/λ₁` of a descending spectrum.
pub fn spectral_ratio(spectrum: &[f64]) -> Result<f64> {
    if spectrum.len() < 2 {
        return Err(Error::InvalidArgument(format!("spectral ratio needs 2 eigenvalues, got {}", spectrum.len())));
    }
    if spectrum[0] <= 0.0 {
        return Err(Error::SpectralDeficiency { index: 0, value: spectrum[0] });
    }
    Ok(spectrum[1] / spectrum[0])
}

/// Sammon stress of `low` as a map of `high`.
pub fn sammon_stress(high: &PointCloud, low: &Matrix) -> Result<f64> {
    sammon_stress_of(high, low)
}
