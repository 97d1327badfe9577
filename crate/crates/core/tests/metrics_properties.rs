use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use shamap::metrics::{nn_label_accuracy, procrustes, sammon_stress, winding_count};
use shamap::spectral::{double_center, shamap_run};
use shamap::synth::{gen_helix, random_orthogonal, HelixSpec};
use shamap::{isomap_embed, IsomapOptions, LabelSet, Matrix, NeighborRule, PointCloud, ReferencePoint, ShamapOptions};

fn uniform(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(n, d, |_, _| rng.random_range(-1.0..1.0))
}

fn rigid(m: &Matrix, rng: &mut ChaCha8Rng) -> Matrix {
    let q = random_orthogonal(m.cols(), rng);
    let shift: Vec<f64> = (0..m.cols()).map(|_| rng.random_range(-5.0..5.0)).collect();
    let r = m.matmul(&q);
    Matrix::from_fn(m.rows(), m.cols(), |i, j| r[(i, j)] + shift[j])
}

#[test]
fn procrustes_rmse_tracks_noise_level() {
    let sigma = 0.01;
    let mut total = 0.0;
    let seeds = 40;
    for seed in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = uniform(100, 2, &mut rng);
        let b = Matrix::from_fn(100, 2, |i, j| a[(i, j)] + sigma * rng.sample::<f64, _>(StandardNormal));
        let rmse = procrustes(&a, &b, false).unwrap().rmse;
        total += rmse;
    }
    // per-point residual norm over two coordinates: about sqrt(2)·σ
    let mean = total / seeds as f64;
    assert!((0.5 * sigma..=1.5 * sigma).contains(&mean), "{mean}");
    assert!((mean / sigma - 2f64.sqrt()).abs() < 0.05);
}

#[test]
fn procrustes_invariant_to_rigid_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let a = uniform(30, 3, &mut rng);
        let b = Matrix::from_fn(30, 3, |i, j| a[(i, j)] + 0.1 * rng.random_range(-1.0..1.0));
        let base = procrustes(&a, &b, false).unwrap().rmse;
        let moved_a = rigid(&a, &mut rng);
        let moved_b = rigid(&b, &mut rng);
        assert!((procrustes(&moved_a, &b, false).unwrap().rmse - base).abs() < 1e-9);
        assert!((procrustes(&a, &moved_b, false).unwrap().rmse - base).abs() < 1e-9);
        let r = procrustes(&a, &moved_b, true).unwrap();
        let rtr = r.rotation.transpose().matmul(&r.rotation);
        assert!(Matrix::from_fn(3, 3, |i, j| rtr[(i, j)] - f64::from(u8::from(i == j))).frobenius_norm() < 1e-10);
    }
}

#[test]
fn nn_accuracy_on_shuffled_labels_is_chance() {
    let mut total = 0.0;
    let seeds = 200;
    for seed in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cluster = Matrix::from_fn(40, 2, |_, _| 0.01 * rng.random::<f64>());
        let labels = LabelSet::new((0..40).map(|_| rng.random_range(0..2)).collect());
        total += nn_label_accuracy(&cluster, &labels).unwrap();
    }
    let mean = total / seeds as f64;
    assert!((mean - 0.5).abs() < 0.03, "{mean}");
}

#[test]
fn nn_accuracy_invariant_to_rigid_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let y = uniform(60, 2, &mut rng);
    let labels = LabelSet::new((0..60).map(|i| u32::from(y[(i, 0)] + 0.3 * y[(i, 1)] > 0.1)).collect());
    let base = nn_label_accuracy(&y, &labels).unwrap();
    for _ in 0..5 {
        assert_eq!(nn_label_accuracy(&rigid(&y, &mut rng), &labels).unwrap(), base);
    }
}

#[test]
fn stress_matches_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let high = PointCloud::new(uniform(25, 4, &mut rng)).unwrap();
        let low = uniform(25, 2, &mut rng);
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..25 {
            for j in i + 1..25 {
                let dh: f64 = high.point(i).iter().zip(high.point(j)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                let dl: f64 = low.row(i).iter().zip(low.row(j)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                num += (dh - dl).powi(2) / dh;
                den += dh;
            }
        }
        assert!((sammon_stress(&high, &low).unwrap() - num / den).abs() < 1e-12);
    }
}

#[test]
fn winding_is_scale_invariant_about_center() {
    let path = Matrix::from_fn(50, 2, |i, j| {
        let t = 0.3 * i as f64;
        let r = 1.0 + 0.05 * i as f64;
        if j == 0 {
            2.0 + r * t.cos()
        } else {
            -1.0 + r * t.sin()
        }
    });
    let base = winding_count(&path, [2.0, -1.0]).unwrap();
    for s in [0.5, 3.0, 1e4] {
        let scaled = Matrix::from_fn(50, 2, |i, j| {
            let c = if j == 0 { 2.0 } else { -1.0 };
            c + s * (path[(i, j)] - c)
        });
        assert!((winding_count(&scaled, [2.0, -1.0]).unwrap() - base).abs() < 1e-12);
    }
}

#[test]
fn eigen_reconstruction_of_cosine_matrix() {
    let cloud = gen_helix(&HelixSpec::default()).unwrap();
    let run = shamap_run(&cloud, &ReferencePoint::Centroid, NeighborRule::Knn(3), &ShamapOptions::default()).unwrap();
    let rec = run.eigen.reconstruct();
    let c = run.cosines.as_matrix();
    for i in 0..c.rows() {
        for j in 0..c.cols() {
            assert!((rec[(i, j)] - c[(i, j)]).abs() < 1e-8);
        }
        let diag: f64 = (0..c.rows()).map(|p| run.eigen.values[p] * run.eigen.vectors[(i, p)].powi(2)).sum();
        assert!((diag - 1.0).abs() < 1e-8);
    }
}

#[test]
fn isomap_double_centering_row_sums() {
    let cloud = gen_helix(&HelixSpec::default()).unwrap();
    let d = Matrix::from_fn(cloud.n(), cloud.n(), |i, j| {
        cloud.point(i).iter().zip(cloud.point(j)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    });
    let b = double_center(&d.map(|v| -0.5 * v * v));
    let norm = b.frobenius_norm();
    for i in 0..b.rows() {
        assert!(b.row(i).iter().sum::<f64>().abs() < 1e-8 * norm);
    }
}

/// Rows permuted together with the input; columns may flip sign.
fn permuted_equal(a: &Matrix, b: &Matrix, perm: &[usize], tol: f64) -> bool {
    (0..a.cols()).all(|p| {
        [1.0, -1.0].iter().any(|s| (0..a.rows()).all(|i| (a[(perm[i], p)] - s * b[(i, p)]).abs() < tol))
    })
}

#[test]
fn permutation_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let x = uniform(80, 3, &mut rng);
    let cloud = PointCloud::new(x.clone()).unwrap();
    let mut perm: Vec<usize> = (0..80).collect();
    for i in (1..80).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let shuffled = PointCloud::new(x.select_rows(&perm)).unwrap();
    let reference = ReferencePoint::Explicit(vec![3.0, 0.5, -1.0]);
    let rule = NeighborRule::Knn(7);
    let a = shamap_run(&cloud, &reference, rule, &ShamapOptions::default()).unwrap();
    let b = shamap_run(&shuffled, &reference, rule, &ShamapOptions::default()).unwrap();
    let ev = &a.eigen.values;
    assert!(ev[0] - ev[1] > 1e-6 && ev[1] - ev[2] > 1e-6, "leading eigenvalues must be simple");
    assert!(permuted_equal(&a.embedding(2, false).unwrap().coords, &b.embedding(2, false).unwrap().coords, &perm, 1e-9));

    let ia = isomap_embed(&cloud, rule, 2, &IsomapOptions::default()).unwrap();
    let ib = isomap_embed(&shuffled, rule, 2, &IsomapOptions::default()).unwrap();
    assert!(permuted_equal(&ia.coords, &ib.coords, &perm, 1e-9));
}

#[test]
fn rotation_equivariance_of_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = uniform(70, 3, &mut rng);
    let c = vec![2.0, 2.0, 0.0];
    let q = random_orthogonal(3, &mut rng);
    let rc = Matrix::from_rows(std::slice::from_ref(&c)).matmul(&q).row(0).to_vec();
    let rule = NeighborRule::Knn(6);
    let a = shamap_run(&PointCloud::new(x.clone()).unwrap(), &ReferencePoint::Explicit(c), rule, &ShamapOptions::default())
        .unwrap();
    let b = shamap_run(&PointCloud::new(x.matmul(&q)).unwrap(), &ReferencePoint::Explicit(rc), rule, &ShamapOptions::default())
        .unwrap();
    let identity: Vec<usize> = (0..70).collect();
    assert!(permuted_equal(&a.embedding(2, false).unwrap().coords, &b.embedding(2, false).unwrap().coords, &identity, 1e-9));
}
