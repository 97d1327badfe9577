use std::path::PathBuf;

use clap::{Args, ValueEnum};

use crate::dataset::{LabelSet, PointCloud};
use crate::error::{Error, Result};
use crate::ingest::{format_g17, read_csv_file, Table};
use crate::matrix::Matrix;
use crate::metrics::{diameter, nn_label_accuracy, procrustes, sammon_stress, set_separation, spectral_ratio, winding_count};

use super::embed::read_spectrum;
use super::parse_vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Winding,
    NnAccuracy,
    Procrustes,
    SpectralRatio,
    Stress,
    Separation,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Embedding CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Metrics to compute; repeat or comma-separate.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub metric: Vec<MetricArg>,
    /// Ground-truth coordinates for `procrustes`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Allow a uniform scale in `procrustes`.
    #[arg(long)]
    pub scale: bool,
    /// Original high-dimensional data for `stress`.
    #[arg(long)]
    pub high: Option<PathBuf>,
    /// Spectrum sidecar for `spectral-ratio`.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Winding centre: `centroid` or `x,y`.
    #[arg(long, default_value = "centroid", allow_hyphen_values = true)]
    pub center: String,
    /// The two labels compared by `separation`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0u32, 1])]
    pub classes: Vec<u32>,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn need<'a>(opt: &'a Option<PathBuf>, flag: &str, metric: &str) -> Result<&'a PathBuf> {
    opt.as_ref().ok_or_else(|| Error::InvalidArgument(format!("metric {metric} needs {flag}")))
}

fn labels_of(table: &Table, metric: &str) -> Result<LabelSet> {
    table.labels.clone().ok_or_else(|| Error::Malformed(format!("metric {metric} needs a label column")))
}

fn class_rows(m: &Matrix, labels: &LabelSet, class: u32) -> Result<Matrix> {
    let idx: Vec<usize> = (0..labels.len()).filter(|&i| labels.get(i) == class).collect();
    if idx.is_empty() {
        return Err(Error::Malformed(format!("no rows labelled {class}")));
    }
    Ok(m.select_rows(&idx))
}

fn compute(args: &EvalArgs, metric: MetricArg, emb: &Table) -> Result<Vec<(String, f64)>> {
    let y = &emb.values;
    Ok(match metric {
        MetricArg::Winding => {
            let center = match args.center.as_str() {
                "centroid" => {
                    let n = y.rows() as f64;
                    [y.column(0).iter().sum::<f64>() / n, y.column(1).iter().sum::<f64>() / n]
                }
                s => match parse_vector(s).map_err(Error::InvalidArgument)?.as_slice() {
                    &[a, b] => [a, b],
                    v => return Err(Error::DimensionMismatch { expected: 2, actual: v.len() }),
                },
            };
            vec![("winding".into(), winding_count(y, center)?)]
        }
        MetricArg::NnAccuracy => vec![("nn-accuracy".into(), nn_label_accuracy(y, &labels_of(emb, "nn-accuracy")?)?)],
        MetricArg::Procrustes => {
            let truth = read_csv_file(need(&args.truth, "--truth", "procrustes")?)?;
            let r = procrustes(&truth.values, y, args.scale)?;
            vec![("procrustes-rmse".into(), r.rmse), ("procrustes-scale".into(), r.scale)]
        }
        MetricArg::SpectralRatio => {
            let spectrum = read_spectrum(need(&args.spectrum, "--spectrum", "spectral-ratio")?)?;
            vec![("spectral-ratio".into(), spectral_ratio(&spectrum)?)]
        }
        MetricArg::Stress => {
            let high = read_csv_file(need(&args.high, "--high", "stress")?)?;
            vec![("stress".into(), sammon_stress(&PointCloud::new(high.values)?, y)?)]
        }
        MetricArg::Separation => {
            let labels = labels_of(emb, "separation")?;
            let a = class_rows(y, &labels, args.classes[0])?;
            let b = class_rows(y, &labels, args.classes[1])?;
            let s = set_separation(&a, &b)?;
            let diam = diameter(y);
            vec![
                ("min-cross-distance".into(), s.min_cross),
                ("hausdorff".into(), s.hausdorff),
                ("hausdorff/diameter".into(), if diam > 0.0 { s.hausdorff / diam } else { 0.0 }),
            ]
        }
    })
}

pub fn run(args: &EvalArgs) -> Result<()> {
    let emb = read_csv_file(&args.input)?;
    let mut rows = Vec::new();
    for &m in &args.metric {
        rows.extend(compute(args, m, &emb)?);
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0).max("metric".len());
    println!("{:<width$}  value", "metric");
    for (k, v) in &rows {
        println!("{k:<width$}  {}", format_g17(*v));
    }
    if let Some(path) = &args.csv {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
        w.write_record(["metric", "value"])?;
        for (k, v) in &rows {
            w.write_record([k.as_str(), &format_g17(*v)])?;
        }
        w.flush()?;
    }
    Ok(())
}
