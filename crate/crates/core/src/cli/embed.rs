use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, ValueEnum};

use crate::dataset::{LabelSet, PointCloud, ReferencePoint};
use crate::error::{Error, Result};
use crate::graph::{NeighborRule, WeightMode};
use crate::ingest::{images_to_cloud, read_csv_file, read_idx_file, read_pgm_file, select_by_label, write_csv_file};
use crate::matrix::Matrix;
use crate::spectral::{isomap_embed, sammon_embed, shamap_run, IsomapOptions, SammonOptions, ShamapOptions};

use super::parse_vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Shamap,
    Isomap,
    Sammon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Euclidean,
    Angular,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "idx_images", "pgm_dir"])))]
pub struct EmbedArgs {
    /// CSV point cloud (an optional `label` column is carried through).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// IDX image tensor, e.g. MNIST `*-images-idx3-ubyte`.
    #[arg(long, requires = "idx_labels")]
    pub idx_images: Option<PathBuf>,
    #[arg(long)]
    pub idx_labels: Option<PathBuf>,
    /// Keep the first COUNT images of each LABEL, in this order: `0:250,1:250`.
    #[arg(long, requires = "idx_images", value_delimiter = ',', value_parser = parse_selection)]
    pub select: Vec<(u32, usize)>,
    /// Directory of PGM images (COIL-20 style `objN__M.pgm` names give label N).
    #[arg(long)]
    pub pgm_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = MethodArg::Shamap)]
    pub method: MethodArg,
    /// Neighbours per point.
    #[arg(long, conflicts_with = "eps")]
    pub k: Option<usize>,
    /// Neighbourhood radius.
    #[arg(long)]
    pub eps: Option<f64>,
    /// `origin`, `centroid`, or explicit coordinates `x,y,...`.
    #[arg(long = "ref", default_value = "origin", value_parser = parse_reference, allow_hyphen_values = true)]
    pub reference: ReferencePoint,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = WeightArg::Euclidean)]
    pub weight_mode: WeightArg,
    /// Embed the largest connected component instead of failing on a disconnected graph.
    #[arg(long)]
    pub largest_component: bool,
    /// Zero coordinates for non-positive selected eigenvalues instead of failing.
    #[arg(long)]
    pub clamp_negative: bool,
    /// Double-center the cosine matrix (Shamap only).
    #[arg(long)]
    pub center: bool,
    /// Accepted for recipe uniformity; every method here is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = SammonOptions::default().max_iters)]
    pub max_iters: usize,
    #[arg(long, default_value_t = SammonOptions::default().step_size)]
    pub step_size: f64,

    #[arg(long)]
    pub out: PathBuf,
    /// Eigenvalue spectrum sidecar CSV.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Accumulated angle matrix CSV (Shamap only).
    #[arg(long)]
    pub dump_angles: Option<PathBuf>,
    /// Cosine matrix CSV (Shamap only).
    #[arg(long)]
    pub dump_cosines: Option<PathBuf>,
}

fn parse_selection(item: &str) -> std::result::Result<(u32, usize), String> {
    let (l, c) = item.split_once(':').ok_or_else(|| format!("expected LABEL:COUNT, got {item:?}"))?;
    let label = l.trim().parse::<u32>().map_err(|_| format!("bad label {l:?}"))?;
    let count = c.trim().parse::<usize>().map_err(|_| format!("bad count {c:?}"))?;
    Ok((label, count))
}

fn parse_reference(s: &str) -> std::result::Result<ReferencePoint, String> {
    match s {
        "origin" => Ok(ReferencePoint::Origin),
        "centroid" => Ok(ReferencePoint::Centroid),
        _ => parse_vector(s).map(ReferencePoint::Explicit),
    }
}

/// `(object, view)` from a COIL-20 file name such as `obj3__17.pgm`.
fn coil_key(name: &str) -> Option<(u32, u32)> {
    let stem = name.strip_suffix(".pgm")?.strip_prefix("obj")?;
    let (obj, view) = stem.split_once("__")?;
    Some((obj.parse().ok()?, view.parse().ok()?))
}

fn load_pgm_dir(dir: &Path) -> Result<(PointCloud, Option<LabelSet>)> {
    let mut names: Vec<String> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|n| n.ends_with(".pgm"))
        .collect();
    if names.is_empty() {
        return Err(Error::Malformed(format!("no .pgm files in {}", dir.display())));
    }
    let keyed = names.iter().all(|n| coil_key(n).is_some());
    if keyed {
        names.sort_by_key(|n| coil_key(n));
    } else {
        names.sort();
    }
    let images = names.iter().map(|n| read_pgm_file(dir.join(n))).collect::<Result<Vec<_>>>()?;
    let cloud = images_to_cloud(&images)?;
    let labels = keyed.then(|| LabelSet::new(names.iter().map(|n| coil_key(n).unwrap().0).collect()));
    Ok((cloud, labels))
}

fn load_idx(images: &Path, labels: &Path, select: &[(u32, usize)]) -> Result<(PointCloud, Option<LabelSet>)> {
    let cloud = images_to_cloud(&read_idx_file(images)?.to_images()?)?;
    let labels = LabelSet::for_cloud(read_idx_file(labels)?.to_labels()?, &cloud)?;
    if select.is_empty() {
        return Ok((cloud, Some(labels)));
    }
    let mut rows = Vec::new();
    for &(wanted, count) in select {
        rows.extend(select_by_label(&cloud, &labels, wanted, count)?.1);
    }
    Ok((cloud.subset(&rows)?, Some(labels.subset(&rows))))
}

pub fn load_input(args: &EmbedArgs) -> Result<(PointCloud, Option<LabelSet>)> {
    if let Some(path) = &args.input {
        let table = read_csv_file(path)?;
        return Ok((PointCloud::new(table.values)?, table.labels));
    }
    if let (Some(images), Some(labels)) = (&args.idx_images, &args.idx_labels) {
        return load_idx(images, labels, &args.select);
    }
    match &args.pgm_dir {
        Some(dir) => load_pgm_dir(dir),
        None => Err(Error::InvalidArgument("no input given".into())),
    }
}

fn neighbor_rule(args: &EmbedArgs) -> Result<NeighborRule> {
    match (args.k, args.eps) {
        (Some(k), None) => Ok(NeighborRule::Knn(k)),
        (None, Some(e)) => Ok(NeighborRule::Eps(e)),
        _ => Err(Error::InvalidArgument(format!("method {:?} needs exactly one of --k or --eps", args.method))),
    }
}

fn write_spectrum(path: &Path, spectrum: &[f64]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(path)?;
    w.write_record(["eigenvalue"])?;
    for &v in spectrum {
        w.write_record([crate::ingest::format_g17(v)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &EmbedArgs) -> Result<()> {
    if args.dim == 0 {
        return Err(Error::InvalidArgument("--dim must be at least 1".into()));
    }
    let shamap_only = args.center || args.dump_angles.is_some() || args.dump_cosines.is_some();
    if shamap_only && args.method != MethodArg::Shamap {
        return Err(Error::InvalidArgument("--center, --dump-angles and --dump-cosines apply to shamap only".into()));
    }
    let (cloud, labels) = load_input(args)?;

    let emb = match args.method {
        MethodArg::Shamap => {
            let opts = ShamapOptions {
                weight_mode: match args.weight_mode {
                    WeightArg::Euclidean => WeightMode::Euclidean,
                    WeightArg::Angular => WeightMode::Angular,
                },
                largest_component: args.largest_component,
                clamp_negative: args.clamp_negative,
                center: args.center,
            };
            let run = shamap_run(&cloud, &args.reference, neighbor_rule(args)?, &opts)?;
            if let Some(p) = &args.dump_angles {
                write_csv_file(p, run.angles.as_matrix(), None)?;
            }
            if let Some(p) = &args.dump_cosines {
                write_csv_file(p, run.cosines.as_matrix(), None)?;
            }
            run.embedding(args.dim, args.clamp_negative)?
        }
        MethodArg::Isomap => {
            let opts = IsomapOptions { largest_component: args.largest_component, clamp_negative: args.clamp_negative };
            isomap_embed(&cloud, neighbor_rule(args)?, args.dim, &opts)?
        }
        MethodArg::Sammon => {
            let opts = SammonOptions { max_iters: args.max_iters, step_size: args.step_size };
            let emb = sammon_embed(&cloud, args.dim, &opts)?;
            if let Some(t) = &emb.sammon {
                eprintln!(
                    "sammon: stress {} -> {} after {} iterations{}",
                    t.initial_stress,
                    t.final_stress,
                    t.iterations,
                    if t.converged { "" } else { " (iteration limit reached)" }
                );
            }
            emb
        }
    };

    let dropped = emb.dropped(cloud.n());
    if !dropped.is_empty() {
        let list: Vec<String> = dropped.iter().map(|i| i.to_string()).collect();
        eprintln!("largest component kept {} of {} rows; dropped rows: {}", emb.n(), cloud.n(), list.join(","));
    }
    let labels = labels.map(|l| l.subset(&emb.kept));
    write_csv_file(&args.out, &emb.coords, labels.as_ref())?;
    if let Some(p) = &args.spectrum {
        write_spectrum(p, &emb.spectrum)?;
    }
    Ok(())
}

/// Reads a spectrum sidecar back.
pub fn read_spectrum(path: &Path) -> Result<Vec<f64>> {
    let table = read_csv_file(path)?;
    let m: &Matrix = &table.values;
    if m.cols() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, actual: m.cols() });
    }
    Ok(m.column(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selections_and_references() {
        assert_eq!(parse_selection("1:250").unwrap(), (1, 250));
        assert!(parse_selection("0-250").is_err());
        assert_eq!(parse_reference("centroid").unwrap(), ReferencePoint::Centroid);
        assert_eq!(parse_reference("1,-2").unwrap(), ReferencePoint::Explicit(vec![1.0, -2.0]));
        assert!(parse_reference("left").is_err());
    }

    #[test]
    fn coil_names() {
        assert_eq!(coil_key("obj12__7.pgm"), Some((12, 7)));
        assert_eq!(coil_key("image.pgm"), None);
        let mut names = vec!["obj2__0.pgm", "obj1__10.pgm", "obj1__2.pgm"];
        names.sort_by_key(|n| coil_key(n));
        assert_eq!(names, vec!["obj1__2.pgm", "obj1__10.pgm", "obj2__0.pgm"]);
    }
}
