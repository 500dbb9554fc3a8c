//! Deterministic emission: CSV with a fixed header and 17-significant-digit
//! floats, JSONL mirroring the CSV fields, and a `<out>.meta.json` sidecar
//! recording how the data was produced. Identical config and seed must yield
//! byte-identical data files regardless of thread count, so nothing here may
//! depend on wall clock, locale, or iteration nondeterminism.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::superposition::RNG_ALGORITHM;

/// A record type with a fixed CSV projection.
pub trait CsvRecord {
    /// Comma-separated column names, no trailing newline.
    fn header() -> &'static str;
    /// One comma-separated row, no trailing newline.
    fn csv_row(&self) -> String;
}

/// Floats are printed with 17 significant digits, enough to round-trip f64.
pub fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Jsonl => "jsonl",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" => Ok(OutputFormat::Jsonl),
            other => Err(Error::InvalidConfig(format!(
                "unknown output format {other:?}; expected csv or jsonl"
            ))),
        }
    }
}

pub fn write_csv<R: CsvRecord, W: Write>(mut w: W, records: &[R]) -> Result<()> {
    writeln!(w, "{}", R::header())?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// CSV as an in-memory string; used by determinism checks and tests.
pub fn render_csv<R: CsvRecord>(records: &[R]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, records).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

pub fn write_jsonl<T: Serialize, W: Write>(mut w: W, records: &[T]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Provenance sidecar written next to every data file.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub rng_algorithm: &'static str,
    pub config: serde_json::Value,
}

impl RunMetadata {
    pub fn new<C: Serialize>(config: &C) -> Result<Self> {
        Ok(RunMetadata {
            tool: "spinglass",
            version: env!("CARGO_PKG_VERSION"),
            rng_algorithm: RNG_ALGORITHM,
            config: serde_json::to_value(config)?,
        })
    }
}

/// `<out>.meta.json`, appended to the full file name so `a.csv` and
/// `a.jsonl` keep distinct sidecars.
pub fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes records in the requested format plus the metadata sidecar.
pub fn write_records<R, C>(
    out: &Path,
    format: OutputFormat,
    records: &[R],
    config: &C,
) -> Result<()>
where
    R: CsvRecord + Serialize,
    C: Serialize,
{
    let mut file = BufWriter::new(File::create(out)?);
    match format {
        OutputFormat::Csv => write_csv(&mut file, records)?,
        OutputFormat::Jsonl => write_jsonl(&mut file, records)?,
    }
    file.flush()?;
    let meta = RunMetadata::new(config)?;
    let mut meta_file = BufWriter::new(File::create(metadata_path(out))?);
    serde_json::to_writer_pretty(&mut meta_file, &meta)?;
    writeln!(meta_file)?;
    meta_file.flush()?;
    Ok(())
}
