//! Persistent corpus of compositions.
//!
//! On-disk layout of a corpus directory:
//!
//! ```text
//! <corpus>/
//! ├── scores/           # original files, named <id>.<ext>
//! ├── manifest.json     # composition metadata + composer registry
//! ├── features.json     # feature cache keyed by id, tagged with the catalog version
//! └── usecases/*.json   # saved selections
//! ```

mod manifest;
mod metadata;
mod store;

pub use manifest::{IngestManifest, ManifestComposer, ManifestRow};
pub use metadata::{
    composer_slug, infer_metadata, is_known_type, parse_opus, InferredMetadata, TYPE_TAXONOMY,
    UNKNOWN,
};
pub use store::{
    CompositionQuery, CorpusSnapshot, CorpusStore, DuplicateEntry, FileFailure, Group,
    IngestOptions, IngestReport,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureVector, QualityFlag};
use crate::score::ScoreError;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("corrupt {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("composition {id} already exists (same content)")]
    Duplicate { id: String },
    #[error("unknown composition {0:?}")]
    UnknownComposition(String),
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("selection is empty")]
    EmptySelection,
    #[error("use case {0:?} already exists")]
    DuplicateName(String),
    #[error("no use case named {0:?}")]
    UnknownName(String),
    #[error("invalid name {0:?}: use lowercase letters, digits and single hyphens")]
    InvalidName(String),
    #[error("invalid composer {id:?}: {reason}")]
    InvalidComposer { id: String, reason: String },
    #[error("excluded: {0}")]
    Excluded(String),
}

impl CorpusError {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io { path: path.as_ref().display().to_string(), source }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Epoch {
    Baroque,
    Classic,
    Romantic,
    Modern,
    Unknown,
}

impl Epoch {
    pub fn as_str(self) -> &'static str {
        match self {
            Epoch::Baroque => "baroque",
            Epoch::Classic => "classic",
            Epoch::Romantic => "romantic",
            Epoch::Modern => "modern",
            Epoch::Unknown => "unknown",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_lowercase().as_str() {
            "baroque" => Some(Epoch::Baroque),
            "classic" | "classical" => Some(Epoch::Classic),
            "romantic" => Some(Epoch::Romantic),
            "modern" => Some(Epoch::Modern),
            "unknown" => Some(Epoch::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for Epoch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Period cut points applied to a composer's mid-life year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochBoundaries {
    pub classic_from: f64,
    pub romantic_from: f64,
    pub modern_from: f64,
}

impl Default for EpochBoundaries {
    fn default() -> Self {
        Self { classic_from: 1750.0, romantic_from: 1820.0, modern_from: 1910.0 }
    }
}

impl EpochBoundaries {
    pub fn classify(&self, birth_year: Option<i32>, death_year: Option<i32>) -> Epoch {
        let (Some(b), Some(d)) = (birth_year, death_year) else {
            return Epoch::Unknown;
        };
        let mid = (f64::from(b) + f64::from(d)) / 2.0;
        if mid < self.classic_from {
            Epoch::Baroque
        } else if mid < self.romantic_from {
            Epoch::Classic
        } else if mid < self.modern_from {
            Epoch::Romantic
        } else {
            Epoch::Modern
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposerEntry {
    pub composer_id: String,
    pub display_name: String,
    pub birth_year: Option<i32>,
    pub death_year: Option<i32>,
    /// Derived from the life span; recomputed whenever boundaries change.
    pub epoch: Epoch,
}

impl ComposerEntry {
    pub fn new(
        composer_id: impl Into<String>,
        display_name: impl Into<String>,
        birth_year: Option<i32>,
        death_year: Option<i32>,
        boundaries: &EpochBoundaries,
    ) -> Result<Self, CorpusError> {
        let composer_id = composer_id.into();
        if let (Some(b), Some(d)) = (birth_year, death_year) {
            if b >= d {
                return Err(CorpusError::InvalidComposer {
                    id: composer_id,
                    reason: format!("birth year {b} is not before death year {d}"),
                });
            }
        }
        Ok(Self {
            composer_id,
            display_name: display_name.into(),
            birth_year,
            death_year,
            epoch: boundaries.classify(birth_year, death_year),
        })
    }

    pub fn has_life_data(&self) -> bool {
        self.birth_year.is_some() && self.death_year.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionRecord {
    /// Content hash of the source bytes.
    pub id: String,
    pub title: String,
    pub composer_id: String,
    pub composition_type: String,
    pub opus: Option<String>,
    #[serde(skip)]
    pub features: FeatureVector,
    pub quality_flags: BTreeSet<QualityFlag>,
    /// Path of the stored copy, relative to the corpus root.
    pub source_path: String,
    /// File name the composition was ingested from.
    pub original_name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    #[default]
    None,
    Composer,
    Type,
    Epoch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorBy {
    #[default]
    Epoch,
    Type,
}

/// A saved workspace configuration, addressable by its slug.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UseCase {
    pub name: String,
    pub selection: Vec<String>,
    pub selected_features: Vec<String>,
    #[serde(default)]
    pub grouping: Grouping,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub color_by: ColorBy,
}

/// `lowercase-words-joined-by-hyphens`
pub fn is_valid_slug(name: &str) -> bool {
    !name.is_empty()
        && name.len() <= 100
        && name.split('-').all(|w| !w.is_empty() && w.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()))
}
