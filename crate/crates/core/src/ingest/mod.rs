//! Dataset ingestion: MNIST IDX, COIL-20 PGM, and CSV.

mod idx;
mod pgm;
mod text;

use std::path::Path;

pub use idx::{parse_idx, serialize_idx, ElementKind, IdxData, IdxTensor};
pub use pgm::{parse_pgm, write_pgm};
pub use text::{format_g17, read_csv, read_csv_file, write_csv, write_csv_file, Table, LABEL_COLUMN};

use crate::dataset::{LabelSet, PointCloud};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Row-major grayscale raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    /// 255 for MNIST; taken from the header for PGM.
    pub maxval: u8,
    pub pixels: Vec<u8>,
}

/// Flattens each image to one row, scaling samples to `[0, 1]` by the image's
/// maxval (255 for 8-bit data).
pub fn images_to_cloud(images: &[GrayImage]) -> Result<PointCloud> {
    let first = images.first().ok_or_else(|| Error::InvalidArgument("no images supplied".into()))?;
    let shape = (first.width, first.height);
    let cols = first.width * first.height;
    let mut data = Vec::with_capacity(images.len() * cols);
    for (index, img) in images.iter().enumerate() {
        if (img.width, img.height) != shape {
            return Err(Error::HeterogeneousShapes { first: shape, other: (img.width, img.height), index });
        }
        let scale = img.maxval as f64;
        data.extend(img.pixels.iter().map(|&p| p as f64 / scale));
    }
    PointCloud::new(Matrix::from_vec(images.len(), cols, data))
}

/// The first `count` rows labelled `wanted`, in their original order, and
/// their original indices.
pub fn select_by_label(
    cloud: &PointCloud,
    labels: &LabelSet,
    wanted: u32,
    count: usize,
) -> Result<(PointCloud, Vec<usize>)> {
    if labels.len() != cloud.n() {
        return Err(Error::DimensionMismatch { expected: cloud.n(), actual: labels.len() });
    }
    if count == 0 {
        return Err(Error::InvalidArgument("selection count must be at least 1".into()));
    }
    let picked: Vec<usize> =
        labels.as_slice().iter().enumerate().filter(|(_, &l)| l == wanted).map(|(i, _)| i).take(count).collect();
    if picked.len() < count {
        return Err(Error::InsufficientMatches { wanted, requested: count, available: picked.len() });
    }
    Ok((cloud.subset(&picked)?, picked))
}

pub fn read_idx_file(path: impl AsRef<Path>) -> Result<IdxTensor> {
    parse_idx(&std::fs::read(path)?)
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> Result<GrayImage> {
    parse_pgm(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image(w: usize, h: usize, fill: u8) -> GrayImage {
        GrayImage { width: w, height: h, maxval: 255, pixels: vec![fill; w * h] }
    }

    #[test]
    fn flattening() {
        let c = images_to_cloud(&[image(28, 28, 0)]).unwrap();
        assert_eq!((c.n(), c.dim()), (1, 784));
        assert!(c.point(0).iter().all(|&v| v == 0.0));
        let c = images_to_cloud(&[image(2, 1, 255), image(2, 1, 51)]).unwrap();
        assert_eq!(c.point(0), &[1.0, 1.0]);
        assert_eq!(c.point(1), &[0.2, 0.2]);
        let err = images_to_cloud(&[image(2, 2, 0), image(2, 1, 0)]).unwrap_err();
        assert!(matches!(err, Error::HeterogeneousShapes { index: 1, .. }));
        assert!(images_to_cloud(&[]).is_err());
    }

    #[test]
    fn selection_preserves_order() {
        let c = PointCloud::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
        let l = LabelSet::new(vec![1, 0, 1]);
        let (sel, idx) = select_by_label(&c, &l, 1, 2).unwrap();
        assert_eq!(idx, vec![0, 2]);
        assert_eq!(sel.point(1), &[2.0]);
        assert!(matches!(select_by_label(&c, &l, 1, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            select_by_label(&c, &l, 0, 2),
            Err(Error::InsufficientMatches { wanted: 0, requested: 2, available: 1 })
        ));
    }
}
