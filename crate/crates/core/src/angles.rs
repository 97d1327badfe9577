//! The shape metric: the angle each edge subtends at the reference point, and
//! those angles accumulated along geodesic paths.
//!
//! For neighbours `i`, `j` and reference `c`,
//! `cos θ_ij = (x_i - c)·(x_j - c) / (‖x_i - c‖ ‖x_j - c‖)`. The accumulated angle
//! between any two samples is the sum of these increments over the recorded
//! shortest path joining them, and `C_mn = cos θ_mn`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dataset::PointCloud;
use crate::error::{Error, Result};
use crate::graph::{EdgeAngles, GeodesicResult, NeighborGraph};
use crate::matrix::Matrix;

/// Points closer than this to the reference make the angle undefined.
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Cosines beyond ±(1 + this) are treated as an internal error rather than rounding.
pub const COSINE_SLACK: f64 = 1e-9;

/// Accumulated angles `θ_mn` in radians. Symmetric, zero diagonal, non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleMatrix {
    theta: Matrix,
}

impl AngleMatrix {
    pub fn n(&self) -> usize {
        self.theta.rows()
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.theta[(m, n)]
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.theta
    }
}

/// `C_mn = cos θ_mn`. Symmetric with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineMatrix {
    c: Matrix,
}

impl CosineMatrix {
    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn get(&self, m: usize, n: usize) -> f64 {
        self.c[(m, n)]
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.c
    }

    pub fn into_matrix(self) -> Matrix {
        self.c
    }
}

/// Angle between `a` and `b` given their norms.
///
/// Evaluated as `2·atan2(‖â − b̂‖, ‖â + b̂‖)`, which equals the arccosine of the
/// normalized dot product but keeps full precision near 0 and π where `acos`
/// loses half the digits.
fn angle_between(a: impl Iterator<Item = f64> + Clone, b: impl Iterator<Item = f64> + Clone, na: f64, nb: f64) -> Result<f64> {
    let (mut diff, mut sum, mut dot) = (0.0, 0.0, 0.0);
    for (x, y) in a.zip(b) {
        let (u, v) = (x / na, y / nb);
        diff += (u - v) * (u - v);
        sum += (u + v) * (u + v);
        dot += x * y;
    }
    let cos = dot / (na * nb);
    if !(cos.abs() <= 1.0 + COSINE_SLACK) {
        return Err(Error::CosineOutOfRange(cos));
    }
    Ok(2.0 * diff.sqrt().atan2(sum.sqrt()))
}

/// Angle subtended at `c` by `x_i` and `x_j`, in `[0, π]`.
pub fn edge_angle(xi: &[f64], xj: &[f64], c: &[f64]) -> Result<f64> {
    let a = xi.iter().zip(c).map(|(x, c)| x - c);
    let b = xj.iter().zip(c).map(|(x, c)| x - c);
    let na = a.clone().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.clone().map(|v| v * v).sum::<f64>().sqrt();
    if na <= DEGENERATE_NORM || nb <= DEGENERATE_NORM {
        return Err(Error::DegenerateReference { indices: Vec::new() });
    }
    angle_between(a, b, na, nb)
}

/// `‖x_i - c‖` for every sample; fails listing every sample sitting on `c`.
pub fn reference_norms(cloud: &PointCloud, c: &[f64]) -> Result<Vec<f64>> {
    if c.len() != cloud.dim() {
        return Err(Error::DimensionMismatch { expected: cloud.dim(), actual: c.len() });
    }
    let norms: Vec<f64> =
        cloud.iter().map(|x| x.iter().zip(c).map(|(x, c)| (x - c) * (x - c)).sum::<f64>().sqrt()).collect();
    let bad: Vec<usize> = norms.iter().enumerate().filter(|(_, &r)| r <= DEGENERATE_NORM).map(|(i, _)| i).collect();
    if !bad.is_empty() {
        return Err(Error::DegenerateReference { indices: bad });
    }
    Ok(norms)
}

fn pair_angle(cloud: &PointCloud, c: &[f64], norms: &[f64], i: usize, j: usize) -> Result<f64> {
    let a = cloud.point(i).iter().zip(c).map(|(x, c)| x - c);
    let b = cloud.point(j).iter().zip(c).map(|(x, c)| x - c);
    angle_between(a, b, norms[i], norms[j])
}

/// Edge angles for every edge of `g`, for shortest paths in angular weight mode.
pub fn edge_angles(cloud: &PointCloud, c: &[f64], g: &NeighborGraph) -> Result<EdgeAngles> {
    let norms = reference_norms(cloud, c)?;
    let pairs: Vec<(usize, usize)> = g.edges().map(|(i, j, _)| (i, j)).collect();
    let values: Vec<f64> =
        pairs.par_iter().map(|&(i, j)| pair_angle(cloud, c, &norms, i, j)).collect::<Result<_>>()?;
    let table: HashMap<(usize, usize), f64> = pairs.into_iter().zip(values).collect();
    Ok(EdgeAngles::from_fn(g, |i, j| table[&(i, j)]))
}

/// Sums edge angles along the recorded shortest path of every pair.
///
/// The path for an unordered pair `{m, n}` with `m < n` is the `next_hop` walk
/// from `m` to `n`; `θ_nm` copies `θ_mn`.
pub fn accumulated_angles(cloud: &PointCloud, c: &[f64], geo: &GeodesicResult) -> Result<AngleMatrix> {
    let n = cloud.n();
    if geo.n() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: geo.n() });
    }
    let norms = reference_norms(cloud, c)?;

    let mut unreachable = Vec::new();
    for m in 0..n {
        for q in m + 1..n {
            if !geo.dist(m, q).is_finite() {
                unreachable.push((m, q));
                if unreachable.len() == 10 {
                    return Err(Error::Unreachable(unreachable));
                }
            }
        }
    }
    if !unreachable.is_empty() {
        return Err(Error::Unreachable(unreachable));
    }

    // every edge a path can use appears as some (v, next_hop(v, target))
    let mut used: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| (0..n).filter_map(move |t| geo.next_hop(v, t).map(|h| (v.min(h), v.max(h)))))
        .collect();
    used.sort_unstable();
    used.dedup();
    let values: Vec<f64> =
        used.par_iter().map(|&(i, j)| pair_angle(cloud, c, &norms, i, j)).collect::<Result<_>>()?;
    let table: HashMap<(usize, usize), f64> = used.into_iter().zip(values).collect();
    let angle = |a: usize, b: usize| table[&(a.min(b), a.max(b))];

    // column `target` holds the sum along each v -> target walk
    let columns: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|target| {
            let mut acc = vec![f64::NAN; n];
            acc[target] = 0.0;
            let mut stack = Vec::new();
            for start in 0..target {
                let mut v = start;
                while acc[v].is_nan() {
                    stack.push(v);
                    v = geo.next_hop(v, target).expect("reachable pairs have a next hop");
                }
                while let Some(u) = stack.pop() {
                    let h = geo.next_hop(u, target).unwrap();
                    acc[u] = angle(u, h) + acc[h];
                }
            }
            acc
        })
        .collect();

    let mut theta = Matrix::zeros(n, n);
    for (target, col) in columns.iter().enumerate() {
        for m in 0..target {
            theta[(m, target)] = col[m];
            theta[(target, m)] = col[m];
        }
    }
    Ok(AngleMatrix { theta })
}

pub fn cosine_matrix(theta: &AngleMatrix) -> CosineMatrix {
    let n = theta.n();
    let mut c = theta.theta.map(f64::cos);
    for i in 0..n {
        c[(i, i)] = 1.0;
    }
    CosineMatrix { c }
}

/// Wraps an arbitrary angle table; used for fixtures and tests.
pub fn angle_matrix_from(theta: Matrix) -> Result<AngleMatrix> {
    let n = theta.rows();
    if theta.cols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: theta.cols() });
    }
    for i in 0..n {
        if theta[(i, i)] != 0.0 {
            return Err(Error::InvalidArgument(format!("θ[{i}][{i}] must be zero")));
        }
        for j in 0..n {
            let v = theta[(i, j)];
            if !(v.is_finite() && v >= 0.0) || v != theta[(j, i)] {
                return Err(Error::InvalidArgument(format!("θ[{i}][{j}] = {v} breaks symmetry or range")));
            }
        }
    }
    Ok(AngleMatrix { theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_shortest, knn_graph, NeighborRule, WeightMode};
    use std::f64::consts::PI;

    #[test]
    fn edge_angle_examples() {
        let o = [0.0, 0.0];
        assert!((edge_angle(&[1.0, 0.0], &[0.0, 1.0], &o).unwrap() - PI / 2.0).abs() < 1e-15);
        assert_eq!(edge_angle(&[3.0, 4.0], &[3.0, 4.0], &o).unwrap(), 0.0);
        assert!((edge_angle(&[1.0, 0.0], &[-1.0, 0.0], &o).unwrap() - PI).abs() < 1e-15);
        assert!((edge_angle(&[2.0, 0.0], &[1.0, 1.0], &[1.0, 0.0]).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn edge_angle_rejects_reference_point() {
        let err = edge_angle(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateReference { .. }));
    }

    #[test]
    fn reference_norms_list_offenders() {
        let c = PointCloud::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]]).unwrap();
        match reference_norms(&c, &[0.0, 0.0]) {
            Err(Error::DegenerateReference { indices }) => assert_eq!(indices, vec![0, 2]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn scale_invariance_is_exact_for_powers_of_two() {
        let (a, b, c) = ([1.3, -0.2, 4.0], [0.7, 2.2, -1.0], [0.1, 0.1, 0.3]);
        let s = 8.0;
        let sc = |v: [f64; 3]| v.map(|x| x * s);
        assert_eq!(edge_angle(&a, &b, &c).unwrap(), edge_angle(&sc(a), &sc(b), &sc(c)).unwrap());
    }

    #[test]
    fn arc_additivity_on_circle() {
        let pts: Vec<[f64; 2]> = [0.0, 0.05 * PI, 0.10 * PI].iter().map(|&t: &f64| [t.cos(), t.sin()]).collect();
        let cloud = PointCloud::from_rows(&pts).unwrap();
        let g = NeighborGraph::from_edges(
            3,
            &[(0, 1, crate::matrix::dist(&pts[0], &pts[1])), (1, 2, crate::matrix::dist(&pts[1], &pts[2]))],
            NeighborRule::Knn(1),
        )
        .unwrap();
        let geo = all_pairs_shortest(&g, WeightMode::Euclidean, None).unwrap();
        let th = accumulated_angles(&cloud, &[0.0, 0.0], &geo).unwrap();
        assert!((th.get(0, 2) - 0.10 * PI).abs() < 1e-14);
        assert_eq!(th.get(0, 2), th.get(2, 0));
        // adjacent pairs equal the edge angle
        let e = edge_angle(cloud.point(0), cloud.point(1), &[0.0, 0.0]).unwrap();
        assert_eq!(th.get(0, 1), e);
    }

    #[test]
    fn unreachable_pairs_error() {
        let cloud = PointCloud::from_rows(&[[1.0, 0.0], [0.0, 1.0], [5.0, 5.0]]).unwrap();
        let g = NeighborGraph::from_edges(3, &[(0, 1, 1.0)], NeighborRule::Eps(1.0)).unwrap();
        let geo = all_pairs_shortest(&g, WeightMode::Euclidean, None).unwrap();
        assert!(matches!(accumulated_angles(&cloud, &[0.0, 0.0], &geo), Err(Error::Unreachable(_))));
    }

    #[test]
    fn cosine_examples() {
        let th = Matrix::from_rows(&[
            [0.0, 0.0, PI / 2.0, PI],
            [0.0, 0.0, 1.5 * PI, 1.0],
            [PI / 2.0, 1.5 * PI, 0.0, 2.0],
            [PI, 1.0, 2.0, 0.0],
        ]);
        let c = cosine_matrix(&angle_matrix_from(th).unwrap());
        assert_eq!(c.get(0, 1), 1.0);
        assert!(c.get(0, 2).abs() < 1e-15);
        assert_eq!(c.get(0, 3), -1.0);
        assert!(c.get(1, 2).abs() < 1e-15);
        assert_eq!(c.as_matrix().asymmetry(), Some(0.0));
        for i in 0..4 {
            assert_eq!(c.get(i, i), 1.0);
        }
    }

    #[test]
    fn angle_matrix_validation() {
        assert!(angle_matrix_from(Matrix::from_rows(&[[0.0, 1.0], [2.0, 0.0]])).is_err());
        assert!(angle_matrix_from(Matrix::from_rows(&[[0.1, 1.0], [1.0, 0.0]])).is_err());
        assert!(angle_matrix_from(Matrix::from_rows(&[[0.0, -1.0], [-1.0, 0.0]])).is_err());
    }

    #[test]
    fn angles_bounded_by_path_length() {
        let cloud = crate::synth::gen_helix(&crate::synth::HelixSpec::default()).unwrap();
        let g = knn_graph(&cloud, 2).unwrap();
        let geo = all_pairs_shortest(&g, WeightMode::Euclidean, None).unwrap();
        let th = accumulated_angles(&cloud, &[0.0; 3], &geo).unwrap();
        for m in 0..cloud.n() {
            for q in 0..cloud.n() {
                let hops = geo.path(m.min(q), m.max(q)).unwrap().len().saturating_sub(1);
                assert!(th.get(m, q) <= hops as f64 * PI);
                assert!(th.get(m, q) >= 0.0);
            }
        }
    }
}
