//! End-to-end Shamap and Isomap against a deliberately naive reimplementation
//! that shares no code with the library beyond the synthetic generators.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shamap::spectral::shamap_run;
use shamap::synth::{gen_helix, HelixSpec};
use shamap::{isomap_embed, IsomapOptions, Matrix, NeighborRule, PointCloud, ReferencePoint, ShamapOptions};

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn length(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// K-NN union graph as a dense weight matrix (`inf` = no edge), ties to the lower index.
fn naive_graph(x: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut w = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        order.sort_by(|&a, &b| length(&sub(&x[i], &x[a])).total_cmp(&length(&sub(&x[i], &x[b]))).then(a.cmp(&b)));
        for &j in order.iter().take(k) {
            let d = length(&sub(&x[i], &x[j]));
            w[i][j] = d;
            w[j][i] = d;
        }
    }
    w
}

/// Floyd–Warshall path lengths and successor table.
fn naive_paths(w: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<usize>>) {
    let n = w.len();
    let mut d = w.to_vec();
    let mut next: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                    next[i][j] = next[i][k];
                }
            }
        }
    }
    (d, next)
}

fn angle(a: &[f64], b: &[f64]) -> f64 {
    let c = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (length(a) * length(b));
    c.clamp(-1.0, 1.0).acos()
}

/// Columns of the `d` largest eigenpairs, each scaled by `sqrt(λ)`, sign-normalized
/// so the largest-magnitude entry is positive.
fn top_scaled(m: DMatrix<f64>, d: usize) -> Vec<Vec<f64>> {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order
        .iter()
        .take(d)
        .map(|&p| {
            let col: Vec<f64> = eig.eigenvectors.column(p).iter().copied().collect();
            let pivot = col.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
            let s = pivot.signum() * eig.eigenvalues[p].sqrt();
            col.iter().map(|v| v * s).collect()
        })
        .collect()
}

fn naive_shamap(x: &[Vec<f64>], c: &[f64], k: usize, d: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let (_, next) = naive_paths(&naive_graph(x, k));
    let rel: Vec<Vec<f64>> = x.iter().map(|p| sub(p, c)).collect();
    let mut cos = DMatrix::zeros(n, n);
    for m in 0..n {
        for t in 0..n {
            let (a, b) = (m.min(t), m.max(t));
            let mut theta = 0.0;
            let mut at = a;
            while at != b {
                let nx = next[at][b];
                theta += angle(&rel[at], &rel[nx]);
                at = nx;
            }
            cos[(m, t)] = theta.cos();
        }
    }
    let cols = top_scaled(cos, d);
    (0..n).map(|i| cols.iter().map(|col| col[i] * length(&rel[i])).collect()).collect()
}

fn naive_isomap(x: &[Vec<f64>], k: usize, d: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let (dist, _) = naive_paths(&naive_graph(x, k));
    let sq = DMatrix::from_fn(n, n, |i, j| dist[i][j] * dist[i][j]);
    let j = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    let b = -0.5 * &j * sq * &j;
    let cols = top_scaled(b, d);
    (0..n).map(|i| cols.iter().map(|col| col[i]).collect()).collect()
}

/// Largest entry difference after matching each column's sign.
fn sign_aligned_diff(ours: &Matrix, theirs: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for p in 0..ours.cols() {
        let same: f64 = (0..ours.rows()).map(|i| (ours[(i, p)] - theirs[i][p]).abs()).fold(0.0, f64::max);
        let flip: f64 = (0..ours.rows()).map(|i| (ours[(i, p)] + theirs[i][p]).abs()).fold(0.0, f64::max);
        worst = worst.max(same.min(flip));
    }
    worst
}

fn rows(cloud: &PointCloud) -> Vec<Vec<f64>> {
    cloud.iter().map(|r| r.to_vec()).collect()
}

#[test]
fn shamap_on_helix_matches_naive_pipeline() {
    let cloud = gen_helix(&HelixSpec::default()).unwrap();
    let run = shamap_run(&cloud, &ReferencePoint::Origin, NeighborRule::Knn(2), &ShamapOptions::default()).unwrap();
    let ours = run.embedding(2, false).unwrap().coords;
    let theirs = naive_shamap(&rows(&cloud), &[0.0, 0.0, 0.0], 2, 2);
    assert!(sign_aligned_diff(&ours, &theirs) < 1e-8);
}

#[test]
fn shamap_on_random_clouds_matches_naive_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut compared = 0;
    for _ in 0..6 {
        let n = rng.random_range(30..70);
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let cloud = PointCloud::from_rows(&x).unwrap();
        let c = vec![2.5, -1.0, 0.5];
        let opts = ShamapOptions::default();
        let Ok(run) = shamap_run(&cloud, &ReferencePoint::Explicit(c.clone()), NeighborRule::Knn(6), &opts) else {
            continue;
        };
        let ev = &run.eigen.values;
        // well separated leading eigenvalues keep eigenvectors comparable
        if !(ev[1] > 0.0 && ev[0] - ev[1] > 1e-3 * ev[0] && ev[1] - ev[2] > 1e-3 * ev[0]) {
            continue;
        }
        let ours = run.embedding(2, false).unwrap().coords;
        let theirs = naive_shamap(&x, &c, 6, 2);
        assert!(sign_aligned_diff(&ours, &theirs) < 1e-8);
        compared += 1;
    }
    assert!(compared >= 3, "only {compared} clouds compared");
}

#[test]
fn shamap_on_jittered_helix_matches_naive_pipeline() {
    // jitter removes the exactly tied alternative geodesics of a regular helix
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let helix = gen_helix(&HelixSpec { t_end: 6.0 * std::f64::consts::PI, ..Default::default() }).unwrap();
    let x: Vec<Vec<f64>> = helix.iter().map(|p| p.iter().map(|v| v + rng.random_range(-0.01..0.01)).collect()).collect();
    let cloud = PointCloud::from_rows(&x).unwrap();
    let c = shamap::dataset::centroid(&cloud);
    let run =
        shamap_run(&cloud, &ReferencePoint::Explicit(c.clone()), NeighborRule::Knn(4), &ShamapOptions::default()).unwrap();
    let ours = run.embedding(2, false).unwrap().coords;
    let theirs = naive_shamap(&x, &c, 4, 2);
    assert!(sign_aligned_diff(&ours, &theirs) < 1e-8);
}

#[test]
fn isomap_matches_naive_pipeline() {
    let cloud = gen_helix(&HelixSpec { t_end: 4.0 * std::f64::consts::PI, ..Default::default() }).unwrap();
    let ours = isomap_embed(&cloud, NeighborRule::Knn(5), 2, &IsomapOptions::default()).unwrap().coords;
    let theirs = naive_isomap(&rows(&cloud), 5, 2);
    assert!(sign_aligned_diff(&ours, &theirs) < 1e-8);
}
