//! CSV for point clouds and embeddings.
//!
//! Header `dim0,dim1,...[,label]`, one row per point, reals written with 17
//! significant digits so every finite `f64` survives a round trip.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dataset::LabelSet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const LABEL_COLUMN: &str = "label";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub values: Matrix,
    pub labels: Option<LabelSet>,
}

/// `%.17g`: shortest of fixed or scientific notation at 17 significant digits.
pub fn format_g17(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        strip_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}", strip_zeros(mantissa.to_string()), exp)
    }
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn write_csv<W: Write>(out: W, values: &Matrix, labels: Option<&LabelSet>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != values.rows() {
            return Err(Error::DimensionMismatch { expected: values.rows(), actual: l.len() });
        }
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header: Vec<String> = (0..values.cols()).map(|j| format!("dim{j}")).collect();
    if labels.is_some() {
        header.push(LABEL_COLUMN.into());
    }
    w.write_record(&header)?;
    for i in 0..values.rows() {
        let mut rec: Vec<String> = values.row(i).iter().map(|&v| format_g17(v)).collect();
        if let Some(l) = labels {
            rec.push(l.get(i).to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(input);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(Error::Malformed("empty CSV: header row missing".into())),
    };
    let width = header.len();
    let labelled = header.get(width - 1) == Some(LABEL_COLUMN);
    let dims = if labelled { width - 1 } else { width };

    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(rows + 2, |p| p.line() as usize);
        if rec.len() != width {
            return Err(Error::RaggedRow { line, expected: width, actual: rec.len() });
        }
        for (j, cell) in rec.iter().enumerate().take(dims) {
            let v = cell.parse::<f64>().map_err(|_| Error::BadCell { line, column: j, cell: cell.into() })?;
            values.push(v);
        }
        if labelled {
            let cell = &rec[dims];
            let l = cell.parse::<u32>().map_err(|_| Error::BadCell { line, column: dims, cell: cell.into() })?;
            labels.push(l);
        }
        rows += 1;
    }
    Ok(Table { values: Matrix::from_vec(rows, dims, values), labels: labelled.then(|| LabelSet::new(labels)) })
}

pub fn read_csv_file(path: impl AsRef<Path>) -> Result<Table> {
    read_csv(BufReader::new(File::open(path)?))
}

pub fn write_csv_file(path: impl AsRef<Path>, values: &Matrix, labels: Option<&LabelSet>) -> Result<()> {
    write_csv(BufWriter::new(File::create(path)?), values, labels)
}
