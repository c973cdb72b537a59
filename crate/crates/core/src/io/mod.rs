//! File formats in and out: predictions JSONL, schema and counts JSON,
//! fixture CSV, CSV/JSON reports, SVG charts and the output manifest.

mod counts;
mod predictions;
mod report;
mod svg;

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::IoError;

pub use counts::{parse_object_counts, read_object_counts};
pub use predictions::{
    parse_predictions, read_predictions, read_schema, render_predictions, write_predictions, SchemaHeader,
};
pub use report::{
    read_fixture, write_reports, InputDigest, Manifest, ManifestEntry, OutputFormat, ReportBundle, RobustAnalysis,
    RunMetadata, Section,
};
pub use svg::{render_landscape_svg, render_pr_svg};

/// Lowercase hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub(crate) fn read_bytes(path: &Path) -> Result<Vec<u8>, IoError> {
    std::fs::read(path).map_err(|e| IoError::io(path, e))
}

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| IoError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| IoError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| IoError::io(path, e))?;
    tmp.persist(path).map_err(|e| IoError::io(path, e.error))?;
    Ok(())
}
