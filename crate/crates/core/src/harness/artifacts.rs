//! Artifact files: CSV tables, JSON summaries and their checksums.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! enough to round-trip every `f64`. Tables use commas, a header row and LF
//! line endings.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// `x` with 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x.is_finite() { format!("{x:.16e}") } else { format!("{x}") }
}

/// One CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// A named artifact held in memory until the writer persists it.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn csv(name: &str, header: &[&str], rows: &[Vec<Cell>]) -> Result<Self> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            if row.len() != header.len() {
                return Err(Error::DimensionMismatch { expected: header.len(), found: row.len() });
            }
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(Artifact { name: name.to_string(), bytes })
    }

    pub fn json<T: Serialize>(name: &str, value: &T) -> Result<Self> {
        let mut bytes = serde_json::to_vec_pretty(value)?;
        bytes.push(b'\n');
        Ok(Artifact { name: name.to_string(), bytes })
    }

    pub fn text(&self) -> &str {
        std::str::from_utf8(&self.bytes).unwrap_or("")
    }
}

/// Path, size and checksum of a written artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactRecord {
    pub path: PathBuf,
    pub bytes: usize,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `artifact` into `dir` and returns its record.
pub fn write_artifact(dir: &Path, artifact: &Artifact) -> Result<ArtifactRecord> {
    std::fs::write(dir.join(&artifact.name), &artifact.bytes)?;
    Ok(ArtifactRecord {
        path: PathBuf::from(&artifact.name),
        bytes: artifact.bytes.len(),
        sha256: sha256_hex(&artifact.bytes),
    })
}

/// A CSV file read back as strings, with typed column access.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::Config(format!("malformed csv: {e}"));
        let header = reader.headers().map_err(bad)?.iter().map(str::to_string).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<Vec<Vec<String>>, _>>()
            .map_err(bad)?;
        Ok(CsvTable { header, rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Index of `name`; a missing column is a schema error.
    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("csv column '{name}' missing from header {:?}", self.header)))
    }

    /// Checks that the header is exactly `expected`.
    pub fn expect_header(&self, expected: &[&str]) -> Result<()> {
        if self.header.iter().map(String::as_str).eq(expected.iter().copied()) {
            Ok(())
        } else {
            Err(Error::Config(format!("csv header {:?} does not match {expected:?}", self.header)))
        }
    }

    pub fn number(&self, row: usize, col: usize) -> Result<f64> {
        let s = &self.rows[row][col];
        s.parse()
            .map_err(|_| Error::Config(format!("row {} column '{}': '{s}' is not a number", row + 1, self.header[col])))
    }
}
