use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_rectangular, AnalyticsError};
use crate::features::{is_known_feature, FeatureVector};

pub const HISTOGRAM_BINS: usize = 20;

/// Pearson correlation between every pair of columns.
///
/// Columns with zero variance have no defined correlation; their whole row
/// and column (diagonal included) are `None`.
pub fn correlation_matrix(rows: &[Vec<f64>]) -> Result<Vec<Vec<Option<f64>>>, AnalyticsError> {
    if rows.len() < 3 {
        return Err(AnalyticsError::TooFewEntities { needed: 3, got: rows.len() });
    }
    let p = check_rectangular(rows)?;
    let n = rows.len() as f64;
    let centred: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            rows.iter().map(|r| r[j] - mean).collect()
        })
        .collect();
    let constant: Vec<bool> = (0..p).map(|j| rows.iter().all(|r| r[j] == rows[0][j])).collect();
    let norms: Vec<f64> = centred.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).collect();

    let mut out = vec![vec![None; p]; p];
    for i in 0..p {
        if constant[i] {
            continue;
        }
        out[i][i] = Some(1.0);
        for j in i + 1..p {
            if constant[j] {
                continue;
            }
            let dot: f64 = centred[i].iter().zip(&centred[j]).map(|(a, b)| a * b).sum();
            let r = (dot / (norms[i] * norms[j])).clamp(-1.0, 1.0);
            out[i][j] = Some(r);
            out[j][i] = Some(r);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl SummaryStats {
    fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            count: sorted.len(),
            min: sorted[0],
            median: median_sorted(&sorted),
            max: sorted[sorted.len() - 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub feature_id: String,
    pub selection_stats: SummaryStats,
    pub corpus_stats: SummaryStats,
    /// `bins + 1` shared edges spanning the corpus range.
    pub bin_edges: Vec<f64>,
    pub selection_histogram: Vec<u64>,
    pub corpus_histogram: Vec<u64>,
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Median of an unsorted slice (mean of the middle pair for even sizes).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(median_sorted(&sorted))
}

/// Compares the selection's distribution of one feature to the corpus.
/// Both histograms use the same 20 bins over the corpus range; a corpus
/// with a single distinct value gets one bin.
pub fn distribution_summary(
    feature_id: &str,
    selection: &[f64],
    corpus: &[f64],
) -> Result<DistributionSummary, AnalyticsError> {
    if !is_known_feature(feature_id) {
        return Err(AnalyticsError::UnknownFeature(feature_id.to_owned()));
    }
    if selection.is_empty() {
        return Err(AnalyticsError::EmptySelection);
    }
    if corpus.is_empty() {
        return Err(AnalyticsError::InvalidParameter("corpus is empty".into()));
    }
    if selection.iter().chain(corpus).any(|v| !v.is_finite()) {
        return Err(AnalyticsError::InvalidParameter("non-finite feature value".into()));
    }
    let corpus_stats = SummaryStats::of(corpus);
    let (lo, hi) = (corpus_stats.min, corpus_stats.max);
    let bins = if hi > lo { HISTOGRAM_BINS } else { 1 };
    let width = (hi - lo) / bins as f64;
    let bin_edges: Vec<f64> = (0..=bins).map(|i| if i == bins { hi } else { lo + width * i as f64 }).collect();
    let histogram = |values: &[f64]| {
        let mut h = vec![0u64; bins];
        for v in values {
            let idx = if bins == 1 { 0 } else { (((v - lo) / (hi - lo)) * bins as f64).floor() as i64 };
            h[idx.clamp(0, bins as i64 - 1) as usize] += 1;
        }
        h
    };
    Ok(DistributionSummary {
        feature_id: feature_id.to_owned(),
        selection_stats: SummaryStats::of(selection),
        corpus_stats,
        bin_edges,
        selection_histogram: histogram(selection),
        corpus_histogram: histogram(corpus),
    })
}

/// Per-feature arithmetic mean of the members.
pub fn aggregate_group(members: &[&FeatureVector]) -> Result<FeatureVector, AnalyticsError> {
    if members.is_empty() {
        return Err(AnalyticsError::EmptyGroup);
    }
    let mut sums: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for m in members {
        for (id, v) in m.iter() {
            let e = sums.entry(id).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    Ok(sums.into_iter().map(|(id, (s, c))| (id.to_owned(), s / c as f64)).collect())
}
