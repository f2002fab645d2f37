//! Numerical services behind the projection view and the feature matrix.

mod dbscan;
mod hull;
mod mds;
mod standardize;
mod stats;

pub use dbscan::{dbscan, dbscan_labels, ClusterSet, DBSCAN_MIN_PTS};
pub use hull::{
    concave_hull, convex_hull, point_in_polygon, polygon_area, polygon_is_simple,
    DEFAULT_CONCAVITY, DEFAULT_LENGTH_THRESHOLD,
};
pub use mds::{diameter, mds_project, Embedding, ProjectionLayout};
pub use standardize::{standardize, Standardized};
pub use stats::{
    aggregate_group, correlation_matrix, distribution_summary, median, DistributionSummary,
    SummaryStats, HISTOGRAM_BINS,
};

use thiserror::Error;

pub type Point = [f64; 2];

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticsError {
    #[error("need at least {needed} entities, got {got}")]
    TooFewEntities { needed: usize, got: usize },
    #[error("selection is empty")]
    EmptySelection,
    #[error("group has no members")]
    EmptyGroup,
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rows have inconsistent lengths")]
    RaggedMatrix,
}

pub(crate) fn check_rectangular(rows: &[Vec<f64>]) -> Result<usize, AnalyticsError> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(AnalyticsError::RaggedMatrix);
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(AnalyticsError::InvalidParameter("matrix contains non-finite values".into()));
    }
    Ok(width)
}

pub(crate) fn dist2(a: Point, b: Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    dx * dx + dy * dy
}
