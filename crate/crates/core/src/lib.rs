//! Shape-based manifold learning.
//!
//! Shamap embeds a point cloud by accumulating the angular change, seen from a
//! reference point `c`, along neighbourhood-graph geodesics and then
//! decomposing the matrix of cosines of those accumulated angles. Isomap and
//! Sammon mapping are provided as baselines, together with synthetic data
//! generators, MNIST/PGM/CSV ingestion and embedding metrics.

pub mod angles;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod graph;
pub mod ingest;
pub mod matrix;
pub mod metrics;
pub mod spectral;
pub mod synth;

pub use dataset::{LabelSet, PointCloud, ReferencePoint};
pub use error::{Error, ErrorClass, Result};
pub use graph::{NeighborRule, WeightMode};
pub use matrix::Matrix;
pub use spectral::{
    isomap_embed, sammon_embed, shamap_embed, Embedding, IsomapOptions, Method, SammonOptions, ShamapOptions,
};
