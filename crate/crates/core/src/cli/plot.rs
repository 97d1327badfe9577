use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;

use crate::dataset::LabelSet;
use crate::error::{Error, Result};
use crate::ingest::read_csv_file;
use crate::matrix::Matrix;

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// 2-D embedding CSV; its `label` column picks the markers.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Canvas width and height in pixels.
    #[arg(long, default_value_t = 600)]
    pub size: u32,
}

/// Colours for labels 2 and up, cycled.
pub const PALETTE: [&str; 20] = [
    "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
    "#8c6d31", "#843c39", "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363", "#fd8d3c", "#74c476",
];

#[derive(Clone, Copy)]
enum Glyph {
    Circle,
    Cross,
    Square,
    Triangle,
    Diamond,
    Plus,
}

const GLYPHS: [Glyph; 6] = [Glyph::Circle, Glyph::Cross, Glyph::Square, Glyph::Triangle, Glyph::Diamond, Glyph::Plus];

fn style(label: u32) -> (Glyph, &'static str) {
    match label {
        0 => (Glyph::Circle, "#1f4fd8"),
        1 => (Glyph::Cross, "#d62728"),
        l => (GLYPHS[(l as usize - 2) % GLYPHS.len()], PALETTE[(l as usize - 2) % PALETTE.len()]),
    }
}

const R: f64 = 3.0;

fn marker(out: &mut String, glyph: Glyph, colour: &str, x: f64, y: f64) {
    let _ = match glyph {
        Glyph::Circle => writeln!(
            out,
            r#"<circle class="marker" cx="{x:.2}" cy="{y:.2}" r="{R}" fill="none" stroke="{colour}"/>"#
        ),
        Glyph::Cross => writeln!(
            out,
            r#"<path class="marker" d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="{colour}"/>"#,
            x - R,
            y - R,
            x + R,
            y + R,
            x - R,
            y + R,
            x + R,
            y - R
        ),
        Glyph::Square => writeln!(
            out,
            r#"<rect class="marker" x="{:.2}" y="{:.2}" width="{}" height="{}" fill="none" stroke="{colour}"/>"#,
            x - R,
            y - R,
            2.0 * R,
            2.0 * R
        ),
        Glyph::Triangle => writeln!(
            out,
            r#"<path class="marker" d="M{x:.2} {:.2}L{:.2} {:.2}L{:.2} {:.2}Z" fill="none" stroke="{colour}"/>"#,
            y - R,
            x + R,
            y + R,
            x - R,
            y + R
        ),
        Glyph::Diamond => writeln!(
            out,
            r#"<path class="marker" d="M{x:.2} {:.2}L{:.2} {y:.2}L{x:.2} {:.2}L{:.2} {y:.2}Z" fill="none" stroke="{colour}"/>"#,
            y - R,
            x + R,
            y + R,
            x - R
        ),
        Glyph::Plus => writeln!(
            out,
            r#"<path class="marker" d="M{:.2} {y:.2}L{:.2} {y:.2}M{x:.2} {:.2}L{x:.2} {:.2}" stroke="{colour}"/>"#,
            x - R,
            x + R,
            y - R,
            y + R
        ),
    };
}

/// Padded data range: 5% of the span on each side (unit span when degenerate).
fn padded(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    (lo - 0.05 * span, hi + 0.05 * span)
}

/// Scatter plot of a 2-D embedding, one marker element per row.
pub fn render_svg(coords: &Matrix, labels: Option<&LabelSet>, size: u32) -> Result<String> {
    if coords.cols() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: coords.cols() });
    }
    if coords.rows() == 0 {
        return Err(Error::Malformed("embedding has no rows".into()));
    }
    if let Some(l) = labels {
        if l.len() != coords.rows() {
            return Err(Error::DimensionMismatch { expected: coords.rows(), actual: l.len() });
        }
    }
    let s = size as f64;
    let (x0, x1) = padded(&coords.column(0));
    let (y0, y1) = padded(&coords.column(1));
    let px = |x: f64| (x - x0) / (x1 - x0) * s;
    let py = |y: f64| s - (y - y0) / (y1 - y0) * s;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white" stroke="black"/>"#);
    if x0 < 0.0 && x1 > 0.0 {
        let _ = writeln!(out, r##"<line x1="{0:.2}" y1="0" x2="{0:.2}" y2="{size}" stroke="#dddddd"/>"##, px(0.0));
    }
    if y0 < 0.0 && y1 > 0.0 {
        let _ = writeln!(out, r##"<line x1="0" y1="{0:.2}" x2="{size}" y2="{0:.2}" stroke="#dddddd"/>"##, py(0.0));
    }
    let _ = writeln!(out, r#"<g stroke-width="1">"#);
    for i in 0..coords.rows() {
        let (glyph, colour) = style(labels.map_or(0, |l| l.get(i)));
        marker(&mut out, glyph, colour, px(coords[(i, 0)]), py(coords[(i, 1)]));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

pub fn run(args: &PlotArgs) -> Result<()> {
    if args.size == 0 {
        return Err(Error::InvalidArgument("--size must be positive".into()));
    }
    let table = read_csv_file(&args.input)?;
    let svg = render_svg(&table.values, table.labels.as_ref(), args.size)?;
    std::fs::write(&args.out, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_marker_per_row() {
        let m = Matrix::from_rows(&[[0.0, 0.0], [1.0, 2.0], [-1.0, 0.5], [3.0, 3.0]]);
        let labels = LabelSet::new(vec![0, 1, 2, 25]);
        let svg = render_svg(&m, Some(&labels), 400).unwrap();
        assert_eq!(svg.matches(r#"class="marker""#).count(), 4);
        assert!(svg.contains("<circle") && svg.contains("#d62728"));
        assert_eq!(svg, render_svg(&m, Some(&labels), 400).unwrap());
    }

    #[test]
    fn rejects_non_planar() {
        assert!(render_svg(&Matrix::zeros(3, 3), None, 100).is_err());
    }

    #[test]
    fn degenerate_extent() {
        let svg = render_svg(&Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]), None, 100).unwrap();
        assert!(svg.contains(r#"cx="50.00" cy="50.00""#));
    }
}
