//! Embeddings: Shamap, Isomap (classical MDS on geodesics) and Sammon mapping.

mod eigen;
mod sammon;

pub use eigen::{jacobi_eigen, EigenPairs, MAX_SWEEPS, OFF_DIAGONAL_TOLERANCE};
pub use sammon::{sammon_embed, sammon_gradient, sammon_stress_of, SammonOptions, SammonTrace, MAX_HALVINGS, RELATIVE_TOLERANCE};

use crate::angles::{accumulated_angles, cosine_matrix, edge_angles, reference_norms, AngleMatrix, CosineMatrix};
use crate::dataset::{PointCloud, ReferencePoint};
use crate::error::{Error, Result};
use crate::graph::{
    all_pairs_shortest, build_graph, component_sizes, connected_components, largest_component, GeodesicResult,
    NeighborGraph, NeighborRule, WeightMode,
};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Shamap,
    Isomap,
    Sammon,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Shamap => "shamap",
            Method::Isomap => "isomap",
            Method::Sammon => "sammon",
        }
    }
}

/// Low-dimensional coordinates, one row per kept input sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub coords: Matrix,
    /// Full eigenvalue spectrum of the decomposed matrix, descending.
    pub spectrum: Vec<f64>,
    pub method: Method,
    /// Input row index of every output row (all rows unless the largest
    /// component was selected).
    pub kept: Vec<usize>,
    pub sammon: Option<SammonTrace>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.coords.rows()
    }

    pub fn dim(&self) -> usize {
        self.coords.cols()
    }

    /// Input rows dropped by largest-component selection.
    pub fn dropped(&self, input_n: usize) -> Vec<usize> {
        let mut keep = vec![false; input_n];
        for &k in &self.kept {
            keep[k] = true;
        }
        (0..input_n).filter(|&i| !keep[i]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ShamapOptions {
    pub weight_mode: WeightMode,
    /// Embed only the largest connected component instead of failing.
    pub largest_component: bool,
    /// Zero the coordinates of non-positive selected eigenvalues instead of failing.
    pub clamp_negative: bool,
    /// Double-center `C` before decomposition.
    pub center: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IsomapOptions {
    pub largest_component: bool,
    pub clamp_negative: bool,
}

/// Every intermediate product of a Shamap run.
#[derive(Debug, Clone)]
pub struct ShamapRun {
    pub kept: Vec<usize>,
    pub reference: Vec<f64>,
    pub graph: NeighborGraph,
    pub geodesic: GeodesicResult,
    pub angles: AngleMatrix,
    pub cosines: CosineMatrix,
    /// `‖x_i - c‖` for the kept rows.
    pub norms: Vec<f64>,
    pub eigen: EigenPairs,
}

impl ShamapRun {
    /// Coordinate `p` of point `i` is `√λ_p · u_p[i] · ‖x_i - c‖`.
    pub fn embedding(&self, d: usize, clamp_negative: bool) -> Result<Embedding> {
        let roots = selected_roots(&self.eigen, d, clamp_negative)?;
        let n = self.norms.len();
        let coords = Matrix::from_fn(n, d, |i, p| roots[p] * self.eigen.vectors[(i, p)] * self.norms[i]);
        Ok(Embedding {
            coords,
            spectrum: self.eigen.values.clone(),
            method: Method::Shamap,
            kept: self.kept.clone(),
            sammon: None,
        })
    }
}

fn selected_roots(eigen: &EigenPairs, d: usize, clamp_negative: bool) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("target dimension must be at least 1".into()));
    }
    if d > eigen.len() {
        return Err(Error::InvalidArgument(format!("target dimension {d} exceeds sample count {}", eigen.len())));
    }
    eigen.values[..d]
        .iter()
        .enumerate()
        .map(|(p, &lam)| match lam > 0.0 {
            true => Ok(lam.sqrt()),
            false if clamp_negative => Ok(0.0),
            false => Err(Error::SpectralDeficiency { index: p, value: lam }),
        })
        .collect()
}

/// Builds the graph and restricts to the largest component when asked.
fn connected_graph(
    cloud: &PointCloud,
    rule: NeighborRule,
    largest: bool,
) -> Result<(PointCloud, NeighborGraph, Vec<usize>)> {
    let graph = build_graph(cloud, rule)?;
    let ids = connected_components(&graph);
    let sizes = component_sizes(&ids);
    if sizes.len() <= 1 {
        return Ok((cloud.clone(), graph, (0..cloud.n()).collect()));
    }
    if !largest {
        return Err(Error::Disconnected { components: sizes.len(), sizes });
    }
    let keep = largest_component(&graph);
    Ok((cloud.subset(&keep)?, graph.induced(&keep), keep))
}

/// `J M J` with `J = I - 11ᵀ/n`.
pub fn double_center(m: &Matrix) -> Matrix {
    let n = m.rows();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| m.row(i).iter().sum::<f64>() / nf).collect();
    let col_means: Vec<f64> = (0..n).map(|j| (0..n).map(|i| m[(i, j)]).sum::<f64>() / nf).collect();
    let grand = row_means.iter().sum::<f64>() / nf;
    Matrix::from_fn(n, n, |i, j| m[(i, j)] - row_means[i] - col_means[j] + grand)
}

pub fn shamap_run(
    cloud: &PointCloud,
    reference: &ReferencePoint,
    rule: NeighborRule,
    opts: &ShamapOptions,
) -> Result<ShamapRun> {
    let c = reference.resolve(cloud)?;
    reference_norms(cloud, &c)?;
    let (work, graph, kept) = connected_graph(cloud, rule, opts.largest_component)?;
    let geodesic = match opts.weight_mode {
        WeightMode::Euclidean => all_pairs_shortest(&graph, WeightMode::Euclidean, None)?,
        WeightMode::Angular => {
            let table = edge_angles(&work, &c, &graph)?;
            all_pairs_shortest(&graph, WeightMode::Angular, Some(&table))?
        }
    };
    let angles = accumulated_angles(&work, &c, &geodesic)?;
    let cosines = cosine_matrix(&angles);
    let eigen = if opts.center {
        jacobi_eigen(&double_center(cosines.as_matrix()))?
    } else {
        jacobi_eigen(cosines.as_matrix())?
    };
    let norms = reference_norms(&work, &c)?;
    Ok(ShamapRun { kept, reference: c, graph, geodesic, angles, cosines, norms, eigen })
}

pub fn shamap_embed(
    cloud: &PointCloud,
    reference: &ReferencePoint,
    rule: NeighborRule,
    d: usize,
    opts: &ShamapOptions,
) -> Result<Embedding> {
    if d == 0 {
        return Err(Error::InvalidArgument("target dimension must be at least 1".into()));
    }
    shamap_run(cloud, reference, rule, opts)?.embedding(d, opts.clamp_negative)
}

/// Classical MDS on a distance matrix: `B = -½ J D⁽²⁾ J`, coordinates `√λ_p u_p`.
pub fn classical_mds(distances: &Matrix, d: usize, clamp_negative: bool) -> Result<(Matrix, Vec<f64>)> {
    let b = double_center(&distances.map(|v| -0.5 * v * v));
    let eigen = jacobi_eigen(&b)?;
    let roots = selected_roots(&eigen, d, clamp_negative)?;
    let coords = Matrix::from_fn(distances.rows(), d, |i, p| roots[p] * eigen.vectors[(i, p)]);
    Ok((coords, eigen.values))
}

pub fn isomap_embed(cloud: &PointCloud, rule: NeighborRule, d: usize, opts: &IsomapOptions) -> Result<Embedding> {
    if d == 0 {
        return Err(Error::InvalidArgument("target dimension must be at least 1".into()));
    }
    let (_, graph, kept) = connected_graph(cloud, rule, opts.largest_component)?;
    let geodesic = all_pairs_shortest(&graph, WeightMode::Euclidean, None)?;
    let (coords, spectrum) = classical_mds(&geodesic.dist_matrix(), d, opts.clamp_negative)?;
    Ok(Embedding { coords, spectrum, method: Method::Isomap, kept, sammon: None })
}
