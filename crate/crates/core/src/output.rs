//! CSV and JSON writers that stamp every file with enough metadata to rerun
//! it: crate version, command, seed and a SHA-256 of the canonical config.

use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunMeta {
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config_sha256: String,
    pub config: String,
}

impl RunMeta {
    pub fn new<C: Serialize>(command: &str, seed: Option<u64>, config: &C) -> Result<Self> {
        let config = serde_json::to_string(config)?;
        let config_sha256 = Sha256::digest(config.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        Ok(Self {
            version: VERSION.to_string(),
            command: command.to_string(),
            seed,
            config_sha256,
            config,
        })
    }

    pub fn write_header<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# ecvm {}", self.version)?;
        writeln!(w, "# command {}", self.command)?;
        match self.seed {
            Some(s) => writeln!(w, "# seed {s}")?,
            None => writeln!(w, "# seed none")?,
        }
        writeln!(w, "# config-sha256 {}", self.config_sha256)?;
        writeln!(w, "# config {}", self.config)
    }
}

/// A CSV file under construction: header comment, column row, then records.
pub struct CsvWriter<W: Write> {
    out: W,
    width: usize,
}

impl CsvWriter<BufWriter<fs::File>> {
    pub fn create(path: &Path, meta: &RunMeta, columns: &[&str]) -> Result<Self> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        Self::new(BufWriter::new(fs::File::create(path)?), meta, columns)
    }
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W, meta: &RunMeta, columns: &[&str]) -> Result<Self> {
        meta.write_header(&mut out)?;
        writeln!(out, "{}", columns.join(","))?;
        Ok(Self {
            out,
            width: columns.len(),
        })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let fields: Vec<String> = fields.into_iter().map(|f| f.to_string()).collect();
        if fields.len() != self.width {
            return Err(Error::Config(format!(
                "csv row has {} fields, expected {}",
                fields.len(),
                self.width
            )));
        }
        writeln!(self.out, "{}", fields.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Float formatting that round-trips and spells infinities as `inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    meta: &'a RunMeta,
    #[serde(flatten)]
    body: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, meta: &RunMeta, body: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &Stamped { meta, body })?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Header comments and data rows of a CSV written by [`CsvWriter`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn read(path: &Path) -> Result<Self> {
        let f = io::BufReader::new(fs::File::open(path)?);
        let mut comments = Vec::new();
        let mut columns = None;
        let mut rows = Vec::new();
        for line in f.lines() {
            let line = line?;
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.trim().to_string());
            } else if columns.is_none() {
                columns = Some(line.split(',').map(str::to_string).collect());
            } else if !line.is_empty() {
                rows.push(line.split(',').map(str::to_string).collect());
            }
        }
        Ok(Self {
            comments,
            columns: columns.unwrap_or_default(),
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.comments
            .iter()
            .find_map(|c| c.strip_prefix(key).and_then(|r| r.strip_prefix(' ')))
    }
}
