//! Text file helpers shared by the on-disk formats.
//!
//! All numeric output goes through [`format_f64`] so that files round-trip
//! bit-exactly and reruns of the same command produce byte-identical output.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Formats with 17 significant digits, enough to round-trip any f64.
pub fn format_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

pub fn parse_f64(path: &Path, line_no: usize, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::format(path, format!("line {}: not a number: {:?}", line_no + 1, s)))
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes via a temp file and rename so readers never observe partial content.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp~");
    {
        let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        f.write_all(contents.as_bytes())
            .map_err(|e| Error::io(&tmp, e))?;
        f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// Reads a single-column CSV of samples, one value per line.
pub fn read_column(path: &Path) -> Result<Vec<f64>> {
    let text = read_to_string(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        values.push(parse_f64(path, i, line)?);
    }
    Ok(values)
}

pub fn write_column(path: &Path, values: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 24);
    for v in values {
        out.push_str(&format_f64(*v));
        out.push('\n');
    }
    write_atomic(path, &out)
}
