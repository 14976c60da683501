//! Tabular reports and their text, CSV and JSON renderings.
//!
//! Numbers are printed like C's `%.{p}g`, with `p = 17` by default so that
//! every value round-trips. JSON output is a single object with `metadata`
//! and `rows`; [`Report::from_json`] reads it back.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: usize = 17;

/// `x` with `precision` significant digits, trailing zeros removed, in
/// fixed notation for exponents in `[-4, precision)` and scientific
/// notation (`1.5e-07`) otherwise.
pub fn format_g(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

/// A grid point left out of a table, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub value: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub command: String,
    pub library: String,
    pub version: String,
    pub units: String,
    /// Inputs as given, already rendered to text.
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<NamedValue>,
    pub columns: Vec<String>,
    pub skipped: Vec<Skipped>,
}

impl Metadata {
    pub fn new(command: &str, units: &str) -> Self {
        Metadata {
            command: command.into(),
            library: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            units: units.into(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            columns: Vec::new(),
            skipped: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub rows: Vec<Vec<f64>>,
}

impl Report {
    pub fn new(command: &str, units: &str) -> Self {
        Report { metadata: Metadata::new(command, units), rows: Vec::new() }
    }

    pub fn input(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.metadata.inputs.insert(key.into(), value.into());
        self
    }

    pub fn input_number(&mut self, key: &str, value: f64) -> &mut Self {
        self.input(key, format_g(value, DEFAULT_PRECISION))
    }

    pub fn result(&mut self, name: &str, value: f64) -> &mut Self {
        self.metadata.results.push(NamedValue { name: name.into(), value });
        self
    }

    pub fn table(&mut self, columns: Vec<String>, rows: Vec<Vec<f64>>) -> &mut Self {
        self.metadata.columns = columns;
        self.rows = rows;
        self
    }

    pub fn render(&self, format: OutputFormat, precision: usize) -> Result<String> {
        match format {
            OutputFormat::Text => Ok(self.to_text(precision)),
            OutputFormat::Csv => self.to_csv(precision),
            OutputFormat::Json => self.to_json(precision),
        }
    }

    /// A lone scalar prints bare; otherwise `name = value` lines followed by
    /// a tab-separated table.
    pub fn to_text(&self, precision: usize) -> String {
        let md = &self.metadata;
        let mut out = String::new();
        if md.columns.is_empty() && md.results.len() == 1 {
            out.push_str(&format_g(md.results[0].value, precision));
            out.push('\n');
            return out;
        }
        for r in &md.results {
            let _ = writeln!(out, "{} = {}", r.name, format_g(r.value, precision));
        }
        if !md.columns.is_empty() {
            if !md.results.is_empty() {
                out.push('\n');
            }
            out.push_str(&md.columns.join("\t"));
            out.push('\n');
            for row in &self.rows {
                let cells: Vec<String> = row.iter().map(|&v| format_g(v, precision)).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        for s in &md.skipped {
            let _ = writeln!(out, "# skipped {}: {}", format_g(s.value, precision), s.reason);
        }
        out
    }

    /// The row table with a header; scalar results come first as a
    /// `quantity,value` block separated by an empty line.
    pub fn to_csv(&self, precision: usize) -> Result<String> {
        let md = &self.metadata;
        let mut out = String::new();
        if !md.results.is_empty() {
            let rows: Vec<Vec<String>> =
                md.results.iter().map(|r| vec![r.name.clone(), format_g(r.value, precision)]).collect();
            out.push_str(&csv_block(&["quantity".to_string(), "value".to_string()], &rows)?);
        }
        if !md.columns.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            let rows: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|row| row.iter().map(|&v| format_g(v, precision)).collect())
                .collect();
            out.push_str(&csv_block(&md.columns, &rows)?);
        }
        Ok(out)
    }

    pub fn to_json(&self, precision: usize) -> Result<String> {
        let md = &self.metadata;
        let emit = EmitReport {
            metadata: EmitMetadata {
                command: &md.command,
                library: &md.library,
                version: &md.version,
                units: &md.units,
                inputs: &md.inputs,
                results: md.results.iter().map(|r| EmitNamed { name: &r.name, value: Num(r.value, precision) }).collect(),
                columns: &md.columns,
                skipped: md.skipped.iter().map(|s| EmitSkipped { value: Num(s.value, precision), reason: &s.reason }).collect(),
            },
            rows: self.rows.iter().map(|r| r.iter().map(|&v| Num(v, precision)).collect()).collect(),
        };
        let mut s = serde_json::to_string_pretty(&emit)
            .map_err(|e| Error::parse("json output", e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(source: &str) -> Result<Self> {
        serde_json::from_str(source).map_err(|e| Error::parse(format!("line {}", e.line()), e.to_string()))
    }
}

fn csv_block(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let err = |e: csv::Error| Error::parse("csv output", e.to_string());
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::parse("csv output", e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A number serialized with a fixed count of significant digits.
struct Num(f64, usize);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text = if self.0.is_finite() { format_g(self.0, self.1) } else { "null".into() };
        RawValue::from_string(text).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

#[derive(Serialize)]
struct EmitNamed<'a> {
    name: &'a str,
    value: Num,
}

#[derive(Serialize)]
struct EmitSkipped<'a> {
    value: Num,
    reason: &'a str,
}

#[derive(Serialize)]
struct EmitMetadata<'a> {
    command: &'a str,
    library: &'a str,
    version: &'a str,
    units: &'a str,
    inputs: &'a BTreeMap<String, String>,
    results: Vec<EmitNamed<'a>>,
    columns: &'a [String],
    skipped: Vec<EmitSkipped<'a>>,
}

#[derive(Serialize)]
struct EmitReport<'a> {
    metadata: EmitMetadata<'a>,
    rows: Vec<Vec<Num>>,
}
