//! CSV and JSON-lines readers and writers.
//!
//! Reals are written in shortest round-trip form, so reading back a written
//! file reproduces every value bit for bit.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crossworld_core::gformula::ObservedDataset;
use crossworld_core::grid::{Figure5Point, GridMethod, GridResultRow};
use crossworld_core::lsem::{LsemDataset, LsemRow};
use crossworld_core::model::{CounterfactualUnit, ObservedRow, PARAMETER_NAMES};

use crate::config::OutputFormat;
use crate::error::{CliError, Result};

/// Columns appended by `simulate` when counterfactuals are requested.
/// They exist only for simulated data.
pub const COUNTERFACTUAL_COLUMNS: [&str; 7] = ["cf_u", "cf_m0", "cf_m1", "cf_y00", "cf_y01", "cf_y10", "cf_y11"];

pub const GRID_COLUMNS: [&str; 19] = [
    "index", "alpha0", "alpha1", "alpha2", "beta0", "beta1", "beta2", "beta3", "beta4", "beta5", "true_nde",
    "true_nie", "est_nde", "est_nie", "bias_nde", "bias_nie", "bounds_lower", "bounds_upper", "method",
];

pub const FIGURE5_COLUMNS: [&str; 4] = ["beta5", "beta3", "beta4", "bias_nde"];

/// Opens `path` for writing, or stdout when `path` is `None` or `-`.
pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(Box::new(BufWriter::new(File::create(p)?))),
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn read_all(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(CliError::MissingPath(path.to_path_buf()));
    }
    let mut s = String::new();
    File::open(path)?.read_to_string(&mut s)?;
    Ok(s)
}

/// Line-numbered CSV records after a header check.
struct CsvRecords<'a> {
    source: &'a str,
    reader: csv::Reader<&'a [u8]>,
}

impl<'a> CsvRecords<'a> {
    fn new(text: &'a str, source: &'a str, accept: impl Fn(&csv::StringRecord) -> bool, expected: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(CliError::EmptyFile(source.to_string()));
        }
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| format_error(source, 1, e.to_string()))?.clone();
        if !accept(&header) {
            return Err(format_error(
                source,
                1,
                format!("expected header {expected}, found {}", header.iter().collect::<Vec<_>>().join(",")),
            ));
        }
        Ok(CsvRecords { source, reader })
    }

    fn for_each(mut self, mut f: impl FnMut(u64, &csv::StringRecord) -> Result<(), String>) -> Result<u64> {
        let mut count = 0;
        let mut record = csv::StringRecord::new();
        loop {
            let line = self.reader.position().line();
            match self.reader.read_record(&mut record) {
                Ok(false) => break,
                Ok(true) => {
                    let line = record.position().map_or(line, |p| p.line());
                    f(line, &record).map_err(|m| format_error(self.source, line, m))?;
                    count += 1;
                }
                Err(e) => {
                    let line = e.position().map_or(line, |p| p.line());
                    return Err(format_error(self.source, line, e.to_string()));
                }
            }
        }
        if count == 0 {
            return Err(CliError::EmptyFile(self.source.to_string()));
        }
        Ok(count)
    }
}

fn format_error(source: &str, line: u64, message: String) -> CliError {
    CliError::Format { path: source.to_string(), line, message }
}

fn field<'r>(record: &'r csv::StringRecord, i: usize, name: &str) -> Result<&'r str, String> {
    record.get(i).ok_or_else(|| format!("missing {name} value"))
}

fn parse_binary(record: &csv::StringRecord, i: usize, name: &str) -> Result<u8, String> {
    match field(record, i, name)? {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(format!("{name} must be 0 or 1, got {other:?}")),
    }
}

fn parse_real(record: &csv::StringRecord, i: usize, name: &str) -> Result<f64, String> {
    let s = field(record, i, name)?;
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("{name} must be a finite number, got {s:?}")),
    }
}

fn observed_header(h: &csv::StringRecord) -> bool {
    h.len() >= 3
        && &h[0] == "A"
        && &h[1] == "M"
        && &h[2] == "Y"
        && h.iter().skip(3).all(|c| COUNTERFACTUAL_COLUMNS.contains(&c))
}

/// Parses `A,M,Y` CSV text, ignoring any trailing `cf_` columns.
pub fn parse_dataset(text: &str, source: &str) -> Result<ObservedDataset> {
    let records = CsvRecords::new(text, source, observed_header, "A,M,Y")?;
    let mut rows = Vec::new();
    records.for_each(|_, r| {
        rows.push(ObservedRow { a: parse_binary(r, 0, "A")?, m: parse_binary(r, 1, "M")?, y: parse_real(r, 2, "Y")? });
        Ok(())
    })?;
    Ok(ObservedDataset::new(rows)?)
}

pub fn read_dataset(path: &Path) -> Result<ObservedDataset> {
    parse_dataset(&read_all(path)?, &path.display().to_string())
}

#[derive(Serialize)]
struct ObservedRecord {
    #[serde(rename = "A")]
    a: u8,
    #[serde(rename = "M")]
    m: u8,
    #[serde(rename = "Y")]
    y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf_u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf_m0: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf_m1: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf_y00: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf_y01: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf_y10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cf_y11: Option<f64>,
}

impl ObservedRecord {
    fn new(row: &ObservedRow, unit: Option<&CounterfactualUnit>) -> Self {
        ObservedRecord {
            a: row.a,
            m: row.m,
            y: row.y,
            cf_u: unit.map(|u| u.u),
            cf_m0: unit.map(|u| u.m[0]),
            cf_m1: unit.map(|u| u.m[1]),
            cf_y00: unit.map(|u| u.y[0][0]),
            cf_y01: unit.map(|u| u.y[0][1]),
            cf_y10: unit.map(|u| u.y[1][0]),
            cf_y11: unit.map(|u| u.y[1][1]),
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Writes a factual dataset, with `cf_` columns when `units` is given.
pub fn write_dataset<W: Write>(
    out: &mut W,
    rows: &[ObservedRow],
    units: Option<&[CounterfactualUnit]>,
    format: OutputFormat,
) -> Result<()> {
    if let Some(u) = units {
        if u.len() != rows.len() {
            return Err(CliError::Usage("counterfactual units and rows differ in length".into()));
        }
    }
    match format {
        OutputFormat::Csv => {
            let mut header = vec!["A", "M", "Y"];
            if units.is_some() {
                header.extend(COUNTERFACTUAL_COLUMNS);
            }
            writeln!(out, "{}", header.join(","))?;
            for (i, r) in rows.iter().enumerate() {
                write!(out, "{},{},{}", r.a, r.m, r.y)?;
                if let Some(u) = units.map(|u| &u[i]) {
                    write!(out, ",{},{},{},{},{},{},{}", u.u, u.m[0], u.m[1], u.y[0][0], u.y[0][1], u.y[1][0], u.y[1][1])?;
                }
                writeln!(out)?;
            }
        }
        OutputFormat::JsonLines => {
            for (i, r) in rows.iter().enumerate() {
                let rec = ObservedRecord::new(r, units.map(|u| &u[i]));
                serde_json::to_writer(&mut *out, &rec).map_err(io::Error::from)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses `A,L,M,Y` CSV text.
pub fn parse_lsem_dataset(text: &str, source: &str) -> Result<LsemDataset> {
    let records = CsvRecords::new(
        text,
        source,
        |h| h.iter().collect::<Vec<_>>() == ["A", "L", "M", "Y"],
        "A,L,M,Y",
    )?;
    let mut rows = Vec::new();
    records.for_each(|_, r| {
        rows.push(LsemRow {
            a: parse_binary(r, 0, "A")?,
            l: parse_real(r, 1, "L")?,
            m: parse_real(r, 2, "M")?,
            y: parse_real(r, 3, "Y")?,
        });
        Ok(())
    })?;
    Ok(LsemDataset::new(rows)?)
}

pub fn read_lsem_dataset(path: &Path) -> Result<LsemDataset> {
    parse_lsem_dataset(&read_all(path)?, &path.display().to_string())
}

pub fn write_lsem_dataset<W: Write>(out: &mut W, data: &LsemDataset, format: OutputFormat) -> Result<()> {
    #[derive(Serialize)]
    struct Rec {
        #[serde(rename = "A")]
        a: u8,
        #[serde(rename = "L")]
        l: f64,
        #[serde(rename = "M")]
        m: f64,
        #[serde(rename = "Y")]
        y: f64,
    }
    match format {
        OutputFormat::Csv => {
            writeln!(out, "A,L,M,Y")?;
            for r in data.rows() {
                writeln!(out, "{},{},{},{}", r.a, r.l, r.m, r.y)?;
            }
        }
        OutputFormat::JsonLines => {
            for r in data.rows() {
                serde_json::to_writer(&mut *out, &Rec { a: r.a, l: r.l, m: r.m, y: r.y }).map_err(io::Error::from)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct GridRecord<'a> {
    index: u64,
    alpha0: f64,
    alpha1: f64,
    alpha2: f64,
    beta0: f64,
    beta1: f64,
    beta2: f64,
    beta3: f64,
    beta4: f64,
    beta5: f64,
    true_nde: f64,
    true_nie: f64,
    est_nde: f64,
    est_nie: f64,
    bias_nde: f64,
    bias_nie: f64,
    bounds_lower: Option<f64>,
    bounds_upper: Option<f64>,
    method: &'a str,
}

impl<'a> From<&'a GridResultRow> for GridRecord<'a> {
    fn from(r: &'a GridResultRow) -> Self {
        let p = r.params;
        GridRecord {
            index: r.index,
            alpha0: p[0],
            alpha1: p[1],
            alpha2: p[2],
            beta0: p[3],
            beta1: p[4],
            beta2: p[5],
            beta3: p[6],
            beta4: p[7],
            beta5: p[8],
            true_nde: r.true_nde,
            true_nie: r.true_nie,
            est_nde: r.est_nde,
            est_nie: r.est_nie,
            bias_nde: r.bias_nde,
            bias_nie: r.bias_nie,
            bounds_lower: r.bounds_lower,
            bounds_upper: r.bounds_upper,
            method: r.method.as_str(),
        }
    }
}

pub fn grid_header() -> String {
    GRID_COLUMNS.join(",")
}

pub fn write_grid_rows<W: Write>(out: &mut W, rows: &[GridResultRow], format: OutputFormat) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", grid_header())?;
            for r in rows {
                write!(out, "{}", r.index)?;
                for p in r.params {
                    write!(out, ",{p}")?;
                }
                writeln!(
                    out,
                    ",{},{},{},{},{},{},{},{},{}",
                    r.true_nde,
                    r.true_nie,
                    r.est_nde,
                    r.est_nie,
                    r.bias_nde,
                    r.bias_nie,
                    fmt_opt(r.bounds_lower),
                    fmt_opt(r.bounds_upper),
                    r.method.as_str()
                )?;
            }
        }
        OutputFormat::JsonLines => {
            for r in rows {
                serde_json::to_writer(&mut *out, &GridRecord::from(r)).map_err(io::Error::from)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses grid rows written as CSV by [`write_grid_rows`].
pub fn parse_grid_rows(text: &str, source: &str) -> Result<Vec<GridResultRow>> {
    let header = grid_header();
    let records = CsvRecords::new(text, source, |h| h.iter().collect::<Vec<_>>().join(",") == header, &header)?;
    let mut rows = Vec::new();
    records.for_each(|_, r| {
        let index = field(r, 0, "index")?.parse::<u64>().map_err(|e| format!("index: {e}"))?;
        let mut params = [0.0; 9];
        for (k, name) in PARAMETER_NAMES.iter().enumerate() {
            params[k] = parse_real(r, 1 + k, name)?;
        }
        let real = |i: usize| parse_real(r, i, GRID_COLUMNS[i]);
        let optional = |i: usize| -> Result<Option<f64>, String> {
            if field(r, i, GRID_COLUMNS[i])?.is_empty() {
                Ok(None)
            } else {
                real(i).map(Some)
            }
        };
        let method = match field(r, 18, "method")? {
            "quadrature" => GridMethod::Quadrature,
            "monte_carlo" => GridMethod::MonteCarlo,
            other => return Err(format!("unknown method {other:?}")),
        };
        rows.push(GridResultRow {
            index,
            params,
            true_nde: real(10)?,
            true_nie: real(11)?,
            est_nde: real(12)?,
            est_nie: real(13)?,
            bias_nde: real(14)?,
            bias_nie: real(15)?,
            bounds_lower: optional(16)?,
            bounds_upper: optional(17)?,
            method,
        });
        Ok(())
    })?;
    Ok(rows)
}

pub fn read_grid_rows(path: &Path) -> Result<Vec<GridResultRow>> {
    parse_grid_rows(&read_all(path)?, &path.display().to_string())
}

pub fn write_figure5<W: Write>(out: &mut W, points: &[Figure5Point], format: OutputFormat) -> Result<()> {
    #[derive(Serialize)]
    struct Rec {
        beta5: f64,
        beta3: f64,
        beta4: f64,
        bias_nde: f64,
    }
    match format {
        OutputFormat::Csv => {
            writeln!(out, "{}", FIGURE5_COLUMNS.join(","))?;
            for p in points {
                writeln!(out, "{},{},{},{}", p.beta5, p.beta3, p.beta4, p.bias_nde)?;
            }
        }
        OutputFormat::JsonLines => {
            for p in points {
                let rec = Rec { beta5: p.beta5, beta3: p.beta3, beta4: p.beta4, bias_nde: p.bias_nde };
                serde_json::to_writer(&mut *out, &rec).map_err(io::Error::from)?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
