//! Deterministic synthetic datasets: helices, the toy protein chain and an
//! isometrically embedded plane used as a ground-truth fixture.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dataset::{LabelSet, PointCloud};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Parametric helix `(r cos(t + phase), r sin(t + phase), pitch * t)` sampled on
/// `t_start, t_start + t_step, ...` up to `t_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixSpec {
    pub t_start: f64,
    pub t_end: f64,
    pub t_step: f64,
    /// z-advance per unit of `t`.
    pub pitch: f64,
    pub phase: f64,
    pub radius: f64,
}

impl Default for HelixSpec {
    /// Five turns at 0.05π steps with the double-helix pitch of 0.1.
    fn default() -> Self {
        Self { t_start: 0.0, t_end: 10.0 * PI, t_step: 0.05 * PI, pitch: 0.1, phase: 0.0, radius: 1.0 }
    }
}

impl HelixSpec {
    pub fn validate(&self) -> Result<()> {
        let fields = [self.t_start, self.t_end, self.t_step, self.pitch, self.phase, self.radius];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("helix parameters must be finite".into()));
        }
        if self.t_step <= 0.0 {
            return Err(Error::InvalidArgument(format!("t_step must be positive, got {}", self.t_step)));
        }
        if self.t_end <= self.t_start {
            return Err(Error::InvalidArgument("t_end must exceed t_start".into()));
        }
        Ok(())
    }

    /// `floor((t_end - t_start) / t_step) + 1`, tolerant of the rounding in
    /// ratios such as `10π / 0.05π` that are integers on paper.
    pub fn sample_count(&self) -> usize {
        let ratio = (self.t_end - self.t_start) / self.t_step;
        let nearest = ratio.round();
        let steps = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { ratio.floor() };
        steps as usize + 1
    }

    fn t(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.t_step
    }

    fn point(&self, t: f64, extra_phase: f64) -> [f64; 3] {
        let a = t + self.phase + extra_phase;
        [self.radius * a.cos(), self.radius * a.sin(), self.pitch * t]
    }
}

pub fn gen_helix(spec: &HelixSpec) -> Result<PointCloud> {
    spec.validate()?;
    let rows: Vec<[f64; 3]> = (0..spec.sample_count()).map(|k| spec.point(spec.t(k), 0.0)).collect();
    PointCloud::from_rows(&rows)
}

/// Two strands: strand 1 is strand 0 shifted by π in phase with identical z.
/// Rows are all of strand 0 followed by all of strand 1, labelled 0 and 1.
pub fn gen_double_helix(spec: &HelixSpec) -> Result<(PointCloud, LabelSet)> {
    spec.validate()?;
    let m = spec.sample_count();
    let mut rows = Vec::with_capacity(2 * m);
    for strand in 0..2 {
        let shift = if strand == 0 { 0.0 } else { PI };
        rows.extend((0..m).map(|k| spec.point(spec.t(k), shift)));
    }
    let labels = (0..2 * m).map(|i| (i >= m) as u32).collect();
    Ok((PointCloud::from_rows(&rows)?, LabelSet::new(labels)))
}

/// Geometry of the helix / sheet / helix chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyProteinSpec {
    pub helix_turns: f64,
    pub sheet_periods: usize,
    pub samples_per_segment: usize,
    pub helix_radius: f64,
    pub helix_pitch: f64,
    pub sheet_amplitude: f64,
}

impl Default for ToyProteinSpec {
    fn default() -> Self {
        Self {
            helix_turns: 2.5,
            sheet_periods: 1,
            samples_per_segment: 100,
            helix_radius: 1.0,
            helix_pitch: 0.1,
            sheet_amplitude: 1.0,
        }
    }
}

/// Two helices joined by a cosine "sheet".
///
/// The sheet runs along x for one helix's axial length with
/// `z = amplitude * (cos(2π periods s) - 1)`, `s ∈ [0, 1]`. Each segment is
/// translated so it starts exactly where the previous one ended.
pub fn gen_toy_protein(spec: &ToyProteinSpec) -> Result<PointCloud> {
    let s = spec.samples_per_segment;
    if s == 0 || spec.sheet_periods == 0 || !(spec.helix_turns > 0.0) {
        return Err(Error::InvalidArgument("toy protein counts must be at least 1".into()));
    }
    let params = [spec.helix_turns, spec.helix_radius, spec.helix_pitch, spec.sheet_amplitude];
    if params.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("toy protein parameters must be finite".into()));
    }
    let frac = |k: usize| if s == 1 { 0.0 } else { k as f64 / (s - 1) as f64 };
    let t_max = 2.0 * PI * spec.helix_turns;
    let helix = |k: usize| {
        let t = t_max * frac(k);
        [spec.helix_radius * t.cos(), spec.helix_radius * t.sin(), spec.helix_pitch * t]
    };
    let sheet_len = spec.helix_pitch * t_max;

    let mut rows: Vec<[f64; 3]> = Vec::with_capacity(3 * s);
    rows.extend((0..s).map(helix));

    let start = *rows.last().unwrap();
    let periods = spec.sheet_periods as f64;
    rows.extend((0..s).map(|k| {
        let u = frac(k);
        let dz = spec.sheet_amplitude * ((2.0 * PI * periods * u).cos() - 1.0);
        [start[0] + sheet_len * u, start[1], start[2] + dz]
    }));

    let start = *rows.last().unwrap();
    let origin = helix(0);
    rows.extend((0..s).map(|k| {
        let p = helix(k);
        [start[0] + (p[0] - origin[0]), start[1] + (p[1] - origin[1]), start[2] + (p[2] - origin[2])]
    }));
    PointCloud::from_rows(&rows)
}

/// `n` seeded uniform points in the unit square, zero-padded to `ambient_dim`
/// and rotated by a seeded random orthogonal matrix. Returns `(high, truth)`.
pub fn gen_embedded_plane(n: usize, ambient_dim: usize, seed: u64) -> Result<(PointCloud, PointCloud)> {
    if ambient_dim < 2 {
        return Err(Error::InvalidArgument("ambient_dim must be at least 2".into()));
    }
    if n < 3 {
        return Err(Error::InvalidArgument("embedded plane needs at least 3 points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let truth = Matrix::from_fn(n, 2, |_, _| rng.random::<f64>());
    let q = random_orthogonal(ambient_dim, &mut rng);
    let high = Matrix::from_fn(n, ambient_dim, |i, j| truth[(i, 0)] * q[(j, 0)] + truth[(i, 1)] * q[(j, 1)]);
    Ok((PointCloud::new(high)?, PointCloud::new(truth)?))
}

/// Gram-Schmidt (twice, for stability) on a Gaussian matrix; columns are orthonormal.
pub fn random_orthogonal(dim: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let mut cols: Vec<Vec<f64>> =
            (0..dim).map(|_| (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect();
        let mut ok = true;
        for j in 0..dim {
            for _ in 0..2 {
                for k in 0..j {
                    let proj: f64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a * b).sum();
                    let ck = cols[k].clone();
                    for (a, b) in cols[j].iter_mut().zip(&ck) {
                        *a -= proj * b;
                    }
                }
            }
            let nrm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|v| *v /= nrm);
        }
        if ok {
            return Matrix::from_fn(dim, dim, |i, j| cols[j][i]);
        }
    }
}
