//! Sammon mapping by backtracking gradient descent on the stress.

use rayon::prelude::*;

use super::{classical_mds, Embedding, Method};
use crate::dataset::PointCloud;
use crate::error::{Error, Result};
use crate::matrix::{dist, Matrix};

/// Relative stress improvement below which iteration stops.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

pub const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SammonOptions {
    pub max_iters: usize,
    /// First trial step, in units of `n · mean(δ)²` (the inverse curvature scale
    /// of the stress). Later iterations start from twice the last accepted step.
    pub step_size: f64,
}

impl Default for SammonOptions {
    fn default() -> Self {
        SammonOptions { max_iters: 500, step_size: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SammonTrace {
    pub initial_stress: f64,
    pub final_stress: f64,
    /// Stress after initialization and after every accepted step.
    pub history: Vec<f64>,
    pub iterations: usize,
    /// False when `max_iters` ran out before the tolerance was met.
    pub converged: bool,
}

/// Pairwise Euclidean distances of the input; fails on coincident points.
fn high_distances(cloud: &PointCloud) -> Result<Matrix> {
    let n = cloud.n();
    let rows: Vec<Vec<f64>> =
        (0..n).into_par_iter().map(|i| (0..n).map(|j| dist(cloud.point(i), cloud.point(j))).collect()).collect();
    let mut dups = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate().skip(i + 1) {
            if v == 0.0 {
                dups.push((i, j));
            }
        }
    }
    if !dups.is_empty() {
        return Err(Error::DuplicatePoints(dups));
    }
    Ok(Matrix::from_vec(n, n, rows.concat()))
}

fn pair_sum(delta: &Matrix) -> f64 {
    let n = delta.rows();
    (0..n).map(|i| delta.row(i)[i + 1..].iter().sum::<f64>()).sum()
}

fn stress_with(delta: &Matrix, total: f64, y: &Matrix) -> f64 {
    let n = delta.rows();
    let partial: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let yi = y.row(i);
            let mut s = 0.0;
            for j in i + 1..n {
                let dl = delta[(i, j)];
                let e = dl - dist(yi, y.row(j));
                s += e * e / dl;
            }
            s
        })
        .collect();
    partial.iter().sum::<f64>() / total
}

fn gradient_with(delta: &Matrix, total: f64, y: &Matrix) -> Matrix {
    let (n, d) = y.shape();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let yi = y.row(i);
            let mut g = vec![0.0; d];
            for j in 0..n {
                if j == i {
                    continue;
                }
                let yj = y.row(j);
                let dl = dist(yi, yj);
                // coincident low-dimensional points: the stress is not differentiable there
                if dl == 0.0 {
                    continue;
                }
                let w = (delta[(i, j)] - dl) / (delta[(i, j)] * dl);
                for (gk, (a, b)) in g.iter_mut().zip(yi.iter().zip(yj)) {
                    *gk += w * (a - b);
                }
            }
            g.iter_mut().for_each(|v| *v *= -2.0 / total);
            g
        })
        .collect();
    Matrix::from_vec(n, d, rows.concat())
}

/// Stress of `low` against the input distances; rejects duplicate input points.
pub fn sammon_stress_of(high: &PointCloud, low: &Matrix) -> Result<f64> {
    if low.rows() != high.n() {
        return Err(Error::DimensionMismatch { expected: high.n(), actual: low.rows() });
    }
    let delta = high_distances(high)?;
    let total = pair_sum(&delta);
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(stress_with(&delta, total, low))
}

/// Analytic stress gradient at `low`, one row per point.
pub fn sammon_gradient(high: &PointCloud, low: &Matrix) -> Result<Matrix> {
    if low.rows() != high.n() {
        return Err(Error::DimensionMismatch { expected: high.n(), actual: low.rows() });
    }
    let delta = high_distances(high)?;
    let total = pair_sum(&delta);
    if total == 0.0 {
        return Ok(Matrix::zeros(low.rows(), low.cols()));
    }
    Ok(gradient_with(&delta, total, low))
}

pub fn sammon_embed(cloud: &PointCloud, d: usize, opts: &SammonOptions) -> Result<Embedding> {
    if d == 0 {
        return Err(Error::InvalidArgument("target dimension must be at least 1".into()));
    }
    if !(opts.step_size > 0.0 && opts.step_size.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {}", opts.step_size)));
    }
    let n = cloud.n();
    let delta = high_distances(cloud)?;
    let (mut y, spectrum) = classical_mds(&delta, d, true)?;
    let kept: Vec<usize> = (0..n).collect();
    let total = pair_sum(&delta);
    if n < 2 {
        let trace =
            SammonTrace { initial_stress: 0.0, final_stress: 0.0, history: vec![0.0], iterations: 0, converged: true };
        return Ok(Embedding { coords: y, spectrum, method: Method::Sammon, kept, sammon: Some(trace) });
    }

    let pairs = (n * (n - 1) / 2) as f64;
    let mean = total / pairs;
    let mut step = opts.step_size * n as f64 * mean * mean;
    let mut stress = stress_with(&delta, total, &y);
    let initial_stress = stress;
    let mut history = vec![stress];
    let mut converged = stress == 0.0;
    let mut iterations = 0;

    while !converged && iterations < opts.max_iters {
        iterations += 1;
        let g = gradient_with(&delta, total, &y);
        let mut trial_step = step;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = Matrix::from_vec(
                n,
                d,
                y.as_slice().iter().zip(g.as_slice()).map(|(a, b)| a - trial_step * b).collect(),
            );
            let s = stress_with(&delta, total, &trial);
            if s < stress {
                accepted = Some((trial, s));
                break;
            }
            trial_step *= 0.5;
        }
        let Some((next, s)) = accepted else {
            // no descent along the gradient at any tried step: a stationary point to working precision
            converged = true;
            break;
        };
        let improvement = (stress - s) / stress;
        y = next;
        stress = s;
        history.push(s);
        step = 2.0 * trial_step;
        if improvement < RELATIVE_TOLERANCE || s == 0.0 {
            converged = true;
        }
    }

    let trace = SammonTrace { initial_stress, final_stress: stress, history, iterations, converged };
    Ok(Embedding { coords: y, spectrum, method: Method::Sammon, kept, sammon: Some(trace) })
}
