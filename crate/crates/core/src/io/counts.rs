use std::path::Path;

use super::read_bytes;
use crate::complexity::ObjectCounts;
use crate::error::{ComplexityError, IoError};

/// Read a JSON array of per-dataset object counts.
pub fn read_object_counts(path: &Path) -> Result<Vec<ObjectCounts>, IoError> {
    let bytes = read_bytes(path)?;
    parse_object_counts(&bytes, path)
}

pub fn parse_object_counts(bytes: &[u8], origin: &Path) -> Result<Vec<ObjectCounts>, IoError> {
    let counts: Vec<ObjectCounts> =
        serde_json::from_slice(bytes).map_err(|e| IoError::parse(origin, e.line(), e.to_string()))?;
    if counts.is_empty() {
        return Err(IoError::parse(origin, 1, "no datasets listed"));
    }
    for (i, c) in counts.iter().enumerate() {
        if counts[..i].iter().any(|o| o.dataset_name == c.dataset_name) {
            return Err(IoError::parse(
                origin,
                1,
                format!("dataset `{}` listed twice", c.dataset_name),
            ));
        }
        if c.images == 0 {
            return Err(ComplexityError::ZeroImages {
                dataset: c.dataset_name.clone(),
            }
            .into());
        }
    }
    Ok(counts)
}
