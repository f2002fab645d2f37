//! Corpus-level analytics for symbolic sheet music.
//!
//! * [`score`] parses MusicXML (`.mxl` / `.xml`) into timed note events.
//! * [`features`] turns a score into a fixed catalog of melody, pitch and
//!   rhythm statistics.
//! * [`analytics`] standardizes, projects (classical MDS), clusters
//!   (DBSCAN) and summarises feature matrices.
//! * [`corpus`] persists compositions, metadata, cached features and saved
//!   use cases.
//! * [`synth`] writes synthetic scores for demos, tests and benchmarks.

pub mod analytics;
pub mod corpus;
pub mod features;
pub mod score;
pub mod synth;

pub use analytics::{AnalyticsError, ClusterSet, DistributionSummary, Point, ProjectionLayout};
pub use corpus::{
    ColorBy, ComposerEntry, CompositionRecord, CorpusError, CorpusSnapshot, CorpusStore, Epoch,
    Grouping, IngestReport, UseCase,
};
pub use features::{
    extract_features, FeatureDescriptor, FeatureError, FeatureExtraction, FeatureVector,
    QualityFlag,
};
pub use score::{parse_mxl, parse_score_bytes, NoteEvent, ScoreDocument, ScoreError};
