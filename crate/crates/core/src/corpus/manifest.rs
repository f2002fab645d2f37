//! JSON schemas: the optional manifest shipped with a directory to ingest,
//! and the files the store persists.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{ComposerEntry, CompositionRecord, CorpusError, EpochBoundaries};
use crate::features::FeatureVector;

/// Optional `manifest.json` next to the files being ingested.
///
/// ```json
/// {
///   "public_domain_only": true,
///   "composers": [
///     {"id": "franz-liszt", "display_name": "Franz Liszt", "birth_year": 1811, "death_year": 1886}
///   ],
///   "files": {
///     "erlkoenig.mxl": {"title": "Erlkönig", "composer": "franz-liszt", "type": "song"}
///   }
/// }
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IngestManifest {
    /// Reject compositions whose composer died less than 70 years ago.
    #[serde(default)]
    pub public_domain_only: bool,
    #[serde(default)]
    pub composers: Vec<ManifestComposer>,
    /// Keyed by file name relative to the ingested directory.
    #[serde(default)]
    pub files: BTreeMap<String, ManifestRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestComposer {
    pub id: String,
    pub display_name: String,
    #[serde(default)]
    pub birth_year: Option<i32>,
    #[serde(default)]
    pub death_year: Option<i32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    #[serde(default)]
    pub title: Option<String>,
    /// Composer id or display name.
    #[serde(default)]
    pub composer: Option<String>,
    #[serde(default, rename = "type")]
    pub composition_type: Option<String>,
    #[serde(default)]
    pub opus: Option<String>,
}

pub(crate) const MANIFEST_FORMAT: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct StoredManifest {
    pub format_version: u32,
    #[serde(default)]
    pub epoch_boundaries: EpochBoundaries,
    pub composers: Vec<ComposerEntry>,
    pub compositions: Vec<CompositionRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct FeatureCache {
    pub catalog_version: u32,
    pub features: BTreeMap<String, FeatureVector>,
}

pub(crate) fn read_json<T: DeserializeOwned>(path: &Path) -> Result<Option<T>, CorpusError> {
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(CorpusError::io(path, e)),
    };
    serde_json::from_slice(&bytes)
        .map(Some)
        .map_err(|source| CorpusError::Json { path: path.display().to_string(), source })
}

/// Writes through a temporary sibling and renames, so readers never see a
/// half-written file.
pub(crate) fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<(), CorpusError> {
    let bytes = serde_json::to_vec_pretty(value)
        .map_err(|source| CorpusError::Json { path: path.display().to_string(), source })?;
    write_atomic(path, &bytes)
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CorpusError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).map_err(|e| CorpusError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CorpusError::io(path, e))
}
