use super::{check_rectangular, AnalyticsError};

#[derive(Debug, Clone, PartialEq)]
pub struct Standardized {
    pub rows: Vec<Vec<f64>>,
    /// Ids of the retained columns, in input order.
    pub used_features: Vec<String>,
    /// Ids of columns dropped for having zero variance.
    pub dropped_features: Vec<String>,
}

/// Z-scores every column (population standard deviation). Columns whose
/// values are all equal carry no information and are dropped.
pub fn standardize(rows: &[Vec<f64>], feature_ids: &[String]) -> Result<Standardized, AnalyticsError> {
    if rows.len() < 2 {
        return Err(AnalyticsError::TooFewEntities { needed: 2, got: rows.len() });
    }
    let width = check_rectangular(rows)?;
    if width != feature_ids.len() {
        return Err(AnalyticsError::InvalidParameter(format!(
            "{} feature ids for {width} columns",
            feature_ids.len()
        )));
    }
    let n = rows.len() as f64;
    let mut columns = Vec::new();
    let mut used_features = Vec::new();
    let mut dropped_features = Vec::new();
    for (j, id) in feature_ids.iter().enumerate() {
        let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        if col.iter().all(|v| *v == col[0]) {
            dropped_features.push(id.clone());
            continue;
        }
        let mean = col.iter().sum::<f64>() / n;
        let var = col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let sd = var.sqrt();
        columns.push(col.iter().map(|v| (v - mean) / sd).collect::<Vec<_>>());
        used_features.push(id.clone());
    }
    let rows = (0..rows.len()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    Ok(Standardized { rows, used_features, dropped_features })
}
