//! Point clouds, labels and the reference point angles are measured from.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `n` samples in `D` ambient dimensions, one sample per row.
///
/// Construction validates that the cloud is non-empty and every coordinate is finite;
/// afterwards the cloud is immutable and row indices are stable.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Matrix,
}

impl PointCloud {
    pub fn new(points: Matrix) -> Result<Self> {
        if points.rows() == 0 {
            return Err(Error::InvalidArgument("point cloud needs at least one sample".into()));
        }
        if points.cols() == 0 {
            return Err(Error::InvalidArgument("point cloud needs at least one dimension".into()));
        }
        if let Some(pos) = points.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: pos / points.cols(), col: pos % points.cols() });
        }
        Ok(Self { points })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        if let Some(first) = rows.first() {
            let d = first.as_ref().len();
            if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != d) {
                return Err(Error::DimensionMismatch { expected: d, actual: bad.as_ref().len() });
            }
        }
        Self::new(Matrix::from_rows(rows))
    }

    /// Sample count.
    pub fn n(&self) -> usize {
        self.points.rows()
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn into_matrix(self) -> Matrix {
        self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.points.row_iter()
    }

    /// Rows `indices`, in that order. Fails when the selection is empty.
    pub fn subset(&self, indices: &[usize]) -> Result<PointCloud> {
        PointCloud::new(self.points.select_rows(indices))
    }

    pub fn scaled(&self, s: f64) -> Result<PointCloud> {
        PointCloud::new(self.points.scale(s))
    }
}

/// Integer class ids paired with a point cloud.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    labels: Vec<u32>,
}

impl LabelSet {
    pub fn new(labels: Vec<u32>) -> Self {
        Self { labels }
    }

    /// Checks the length against the cloud this label set describes.
    pub fn for_cloud(labels: Vec<u32>, cloud: &PointCloud) -> Result<Self> {
        if labels.len() != cloud.n() {
            return Err(Error::DimensionMismatch { expected: cloud.n(), actual: labels.len() });
        }
        Ok(Self { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.labels
    }

    pub fn get(&self, i: usize) -> u32 {
        self.labels[i]
    }

    pub fn subset(&self, indices: &[usize]) -> LabelSet {
        LabelSet { labels: indices.iter().map(|&i| self.labels[i]).collect() }
    }
}

/// The global reference `c` all angles are measured from.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferencePoint {
    Origin,
    Centroid,
    Explicit(Vec<f64>),
}

impl ReferencePoint {
    pub fn resolve(&self, cloud: &PointCloud) -> Result<Vec<f64>> {
        resolve_reference(self, cloud)
    }
}

pub fn centroid(cloud: &PointCloud) -> Vec<f64> {
    let mut sum = vec![0.0; cloud.dim()];
    for row in cloud.iter() {
        for (s, v) in sum.iter_mut().zip(row) {
            *s += v;
        }
    }
    let n = cloud.n() as f64;
    sum.iter().map(|s| s / n).collect()
}

pub fn resolve_reference(reference: &ReferencePoint, cloud: &PointCloud) -> Result<Vec<f64>> {
    match reference {
        ReferencePoint::Origin => Ok(vec![0.0; cloud.dim()]),
        ReferencePoint::Centroid => Ok(centroid(cloud)),
        ReferencePoint::Explicit(c) => {
            if c.len() != cloud.dim() {
                return Err(Error::DimensionMismatch { expected: cloud.dim(), actual: c.len() });
            }
            if let Some(col) = c.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: 0, col });
            }
            Ok(c.clone())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cloud(rows: &[&[f64]]) -> PointCloud {
        PointCloud::from_rows(rows).unwrap()
    }

    #[test]
    fn centroid_examples() {
        assert_eq!(centroid(&cloud(&[&[0.0, 0.0], &[2.0, 2.0]])), vec![1.0, 1.0]);
        assert_eq!(centroid(&cloud(&[&[3.0, 4.0, 5.0]])), vec![3.0, 4.0, 5.0]);
        let diamond = cloud(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]]);
        assert_eq!(centroid(&diamond), vec![0.0, 0.0]);
    }

    #[test]
    fn resolve_examples() {
        let c3 = cloud(&[&[1.0, 2.0, 3.0]]);
        assert_eq!(resolve_reference(&ReferencePoint::Origin, &c3).unwrap(), vec![0.0; 3]);
        let c2 = cloud(&[&[2.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(resolve_reference(&ReferencePoint::Centroid, &c2).unwrap(), vec![1.0, 1.0]);
        let err = resolve_reference(&ReferencePoint::Explicit(vec![1.0, 2.0]), &c3).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 3, actual: 2 }));
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(PointCloud::new(Matrix::zeros(0, 3)).is_err());
        assert!(PointCloud::new(Matrix::zeros(3, 0)).is_err());
        let err = PointCloud::from_rows(&[[0.0, f64::NAN]]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 1 }));
        assert!(PointCloud::from_rows(&[vec![0.0, 1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn label_length_checked() {
        let c = cloud(&[&[0.0], &[1.0]]);
        assert!(LabelSet::for_cloud(vec![0], &c).is_err());
        assert_eq!(LabelSet::for_cloud(vec![0, 1], &c).unwrap().len(), 2);
    }

    proptest! {
        #[test]
        fn centroid_is_permutation_invariant(
            rows in prop::collection::vec(prop::collection::vec(-1e3f64..1e3, 3), 1..20),
            seed in any::<u64>(),
        ) {
            let original = PointCloud::from_rows(&rows).unwrap();
            let mut order: Vec<usize> = (0..rows.len()).collect();
            // deterministic shuffle from the seed
            let mut s = seed;
            for i in (1..order.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (s >> 33) as usize % (i + 1));
            }
            let permuted = original.subset(&order).unwrap();
            let a = centroid(&original);
            let b = centroid(&permuted);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
            }
        }

        #[test]
        fn explicit_reference_resolves_bit_identically(c in prop::collection::vec(-1e6f64..1e6, 2)) {
            let cl = PointCloud::from_rows(&[[0.0, 0.0]]).unwrap();
            let r = ReferencePoint::Explicit(c.clone());
            let once = r.resolve(&cl).unwrap();
            let twice = ReferencePoint::Explicit(once.clone()).resolve(&cl).unwrap();
            prop_assert_eq!(once.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                            twice.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
            prop_assert_eq!(once, c);
        }
    }
}
