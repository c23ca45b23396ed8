//! Run manifests: every command records its resolved configuration, inputs,
//! outputs, and seed, so any run can be reproduced bit-for-bit from the
//! manifest alone (timestamps and duration excluded).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    /// Fully resolved command line (defaults materialized), without the
    /// program name and without `--out`.
    pub args: Vec<String>,
    pub inputs: Vec<String>,
    /// Data files produced, relative to the output location.
    pub outputs: Vec<String>,
    pub out: String,
    pub duration_ms: u128,
}

pub const MANIFEST_NAME: &str = "manifest.json";

/// Manifest location for a command writing into directory `dir`.
pub fn dir_manifest_path(dir: &Path) -> PathBuf {
    dir.join(MANIFEST_NAME)
}

/// Manifest location for a command producing the single file `file`.
pub fn file_manifest_path(file: &Path) -> PathBuf {
    let mut name = file.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    file.with_file_name(name)
}

/// Serializes and writes atomically (temp file + rename).
pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Internal(format!("manifest serialization: {e}")))?;
    let tmp = path.with_extension("json.tmp~");
    std::fs::write(&tmp, json.as_bytes())
        .map_err(|e| CliError::Usage(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(())
}

