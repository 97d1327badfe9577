//! The `shamap` command line: `gen`, `embed`, `plot` and `eval`.

mod embed;
mod eval;
mod gen;
mod plot;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

pub use plot::{render_svg, PALETTE};

use crate::error::{Error, ErrorClass, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_ALGORITHM: i32 = 4;

/// Environment variable capping the worker-thread count (0 or unset = automatic).
pub const THREADS_ENV: &str = "SHAMAP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "shamap", version, about = "Shape-based manifold learning with Isomap and Sammon baselines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset as CSV.
    Gen(gen::GenArgs),
    /// Embed a dataset with Shamap, Isomap or Sammon mapping.
    Embed(embed::EmbedArgs),
    /// Render a 2-D embedding CSV as an SVG scatter plot.
    Plot(plot::PlotArgs),
    /// Evaluate an embedding with one or more metrics.
    Eval(eval::EvalArgs),
}

pub fn exit_code(err: &Error) -> i32 {
    match err.class() {
        ErrorClass::Usage => EXIT_USAGE,
        ErrorClass::Data => EXIT_DATA,
        ErrorClass::Algorithm => EXIT_ALGORITHM,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV} must be a non-negative integer, got {raw:?}")))?;
    // a pool may already exist when called repeatedly in one process; the first setting stands
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn execute(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Gen(args) => gen::run(&args),
        Command::Embed(args) => embed::run(&args),
        Command::Plot(args) => plot::run(&args),
        Command::Eval(args) => eval::run(&args),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// `x,y,...` as reals.
pub(crate) fn parse_vector(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .and_then(|v| if v.iter().all(|x| x.is_finite()) { Ok(v) } else { Err("values must be finite".into()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn parser_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["shamap", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["shamap", "embed", "--method", "nope"]), EXIT_USAGE);
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1, 2.5,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert!(parse_vector("1,x").is_err());
        assert!(parse_vector("inf").is_err());
    }
}
