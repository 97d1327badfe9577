use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};

use crate::dataset::{LabelSet, PointCloud};
use crate::error::Result;
use crate::ingest::write_csv_file;
use crate::synth::{gen_double_helix, gen_embedded_plane, gen_helix, gen_toy_protein, HelixSpec, ToyProteinSpec};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Single helix (201 points by default).
    Helix(HelixArgs),
    /// Two π-shifted strands with a label column.
    DoubleHelix(HelixArgs),
    /// Helix, sheet, helix chain.
    Protein(ProteinArgs),
    /// Unit square isometrically embedded in a higher dimension.
    Plane(PlaneArgs),
}

#[derive(Debug, Args)]
pub struct HelixArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t_start: f64,
    /// Defaults to 10π.
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    /// Defaults to 0.05π.
    #[arg(long)]
    pub t_step: Option<f64>,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    pub pitch: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase: f64,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long)]
    pub out: PathBuf,
}

impl HelixArgs {
    fn spec(&self) -> HelixSpec {
        let d = HelixSpec::default();
        HelixSpec {
            t_start: self.t_start,
            t_end: self.t_end.unwrap_or(d.t_end),
            t_step: self.t_step.unwrap_or(d.t_step),
            pitch: self.pitch,
            phase: self.phase,
            radius: self.radius,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProteinArgs {
    #[arg(long, default_value_t = 2.5)]
    pub helix_turns: f64,
    #[arg(long, default_value_t = 1)]
    pub sheet_periods: usize,
    #[arg(long, default_value_t = 100)]
    pub samples_per_segment: usize,
    #[arg(long, default_value_t = 1.0)]
    pub helix_radius: f64,
    #[arg(long, default_value_t = 0.1)]
    pub helix_pitch: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sheet_amplitude: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlaneArgs {
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub ambient: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Embedded points.
    #[arg(long)]
    pub out: PathBuf,
    /// Planar ground truth.
    #[arg(long)]
    pub truth_out: Option<PathBuf>,
}

fn emit(path: &Path, cloud: &PointCloud, labels: Option<&LabelSet>) -> Result<()> {
    write_csv_file(path, cloud.points(), labels)?;
    println!("wrote {} rows x {} columns to {}", cloud.n(), cloud.dim(), path.display());
    Ok(())
}

pub fn run(args: &GenArgs) -> Result<()> {
    match &args.kind {
        GenKind::Helix(h) => emit(&h.out, &gen_helix(&h.spec())?, None),
        GenKind::DoubleHelix(h) => {
            let (cloud, labels) = gen_double_helix(&h.spec())?;
            emit(&h.out, &cloud, Some(&labels))
        }
        GenKind::Protein(p) => {
            let spec = ToyProteinSpec {
                helix_turns: p.helix_turns,
                sheet_periods: p.sheet_periods,
                samples_per_segment: p.samples_per_segment,
                helix_radius: p.helix_radius,
                helix_pitch: p.helix_pitch,
                sheet_amplitude: p.sheet_amplitude,
            };
            emit(&p.out, &gen_toy_protein(&spec)?, None)
        }
        GenKind::Plane(p) => {
            let (high, truth) = gen_embedded_plane(p.n, p.ambient, p.seed)?;
            emit(&p.out, &high, None)?;
            match &p.truth_out {
                Some(t) => emit(t, &truth, None),
                None => Ok(()),
            }
        }
    }
}
