//! CSV/JSON writers, atomic file replacement and run manifests.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip decimal; empty for non-finite values.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// `1.00E-07` style: mantissa with `digits` decimals, signed two-digit exponent.
pub fn sci(v: f64, digits: usize) -> String {
    let s = format!("{v:.digits$E}");
    match s.split_once('E') {
        Some((m, e)) => {
            let e: i32 = e.parse().expect("exponent");
            let sign = if e < 0 { '-' } else { '+' };
            format!("{m}E{sign}{:02}", e.abs())
        }
        None => s,
    }
}

/// Header plus rows as RFC 4180 bytes with `\n` line ends.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Usage(format!("csv buffer: {e}")))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Write via a temp file in the target directory, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Records what produced an output file. Worker count and paths are left
/// out, so equal manifests mean equal bytes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, params: Value, seed: Option<u64>, output: &[u8]) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            params,
            seed,
            output_sha256: sha256_hex(output),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        write_atomic(path, &bytes)
    }
}

/// Read a file, mapping failures to IO errors.
pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
