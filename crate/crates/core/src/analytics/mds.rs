//! Classical (Torgerson) multidimensional scaling into the plane.
//!
//! The Gram matrix `B = -1/2 J D² J` is built from squared Euclidean
//! distances and its two leading eigenpairs give the coordinates, scaled by
//! the square root of the eigenvalue. For Euclidean input this is the same
//! as projecting the centred rows onto the two leading principal axes, so for
//! tall matrices (many entities, few features) the small `p x p` scatter
//! matrix is decomposed instead of the `n x n` Gram matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{check_rectangular, dist2, standardize, AnalyticsError, Point};

/// Above this many entities the feature-space route is used when it is
/// smaller than the entity-space one.
const GRAM_ROUTE_MAX_ENTITIES: usize = 400;

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub coords: Vec<Point>,
    /// Kruskal-style residual, `sqrt(sum (d̂ - d)² / sum d²)`.
    pub stress: f64,
    /// All input rows were identical.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionLayout {
    pub entity_ids: Vec<String>,
    pub coords: Vec<Point>,
    pub used_features: Vec<String>,
    pub stress: f64,
    #[serde(default)]
    pub degenerate: bool,
}

impl ProjectionLayout {
    /// Standardizes the raw feature matrix and projects it.
    pub fn build(
        entity_ids: Vec<String>,
        rows: &[Vec<f64>],
        feature_ids: &[String],
    ) -> Result<Self, AnalyticsError> {
        if entity_ids.len() != rows.len() {
            return Err(AnalyticsError::InvalidParameter(format!(
                "{} ids for {} rows",
                entity_ids.len(),
                rows.len()
            )));
        }
        let standardized = standardize(rows, feature_ids)?;
        let embedding = mds_project(&standardized.rows)?;
        Ok(Self {
            entity_ids,
            coords: embedding.coords,
            used_features: standardized.used_features,
            stress: embedding.stress,
            degenerate: embedding.degenerate,
        })
    }
}

/// Projects the rows of `rows` to 2D with classical MDS.
///
/// Axis signs are fixed so that the coordinate with the largest magnitude on
/// each axis is positive, which makes the output a pure function of the
/// input.
pub fn mds_project(rows: &[Vec<f64>]) -> Result<Embedding, AnalyticsError> {
    let n = rows.len();
    if n < 2 {
        return Err(AnalyticsError::TooFewEntities { needed: 2, got: n });
    }
    let p = check_rectangular(rows)?;
    if rows.iter().all(|r| *r == rows[0]) {
        return Ok(Embedding { coords: vec![[0.0, 0.0]; n], stress: 0.0, degenerate: true });
    }

    let mut coords = if n > GRAM_ROUTE_MAX_ENTITIES && p < n {
        feature_space_route(rows, p)
    } else {
        torgerson_route(rows)
    };
    fix_signs(&mut coords);
    let stress = stress(rows, &coords);
    Ok(Embedding { coords, stress, degenerate: false })
}

fn torgerson_route(rows: &[Vec<f64>]) -> Vec<Point> {
    let n = rows.len();
    let sq = DMatrix::from_fn(n, n, |i, j| {
        rows[i].iter().zip(&rows[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
    });
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let gram = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand));
    let eig = SymmetricEigen::new(gram);
    let order = leading_indices(eig.eigenvalues.as_slice());
    // negative eigenvalues come from non-Euclidean noise; clamp to zero
    let scales: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k].max(0.0).sqrt()).collect();
    (0..n)
        .map(|i| {
            let mut c = [0.0; 2];
            for (axis, &k) in order.iter().enumerate() {
                c[axis] = eig.eigenvectors[(i, k)] * scales[axis];
            }
            c
        })
        .collect()
}

fn feature_space_route(rows: &[Vec<f64>], p: usize) -> Vec<Point> {
    let n = rows.len();
    let means: Vec<f64> = (0..p).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let centred = DMatrix::from_fn(n, p, |i, j| rows[i][j] - means[j]);
    let scatter = centred.transpose() * &centred;
    let eig = SymmetricEigen::new(scatter);
    let order = leading_indices(eig.eigenvalues.as_slice());
    (0..n)
        .map(|i| {
            let mut c = [0.0; 2];
            for (axis, &k) in order.iter().enumerate() {
                if eig.eigenvalues[k] > 0.0 {
                    c[axis] = (0..p).map(|j| centred[(i, j)] * eig.eigenvectors[(j, k)]).sum();
                }
            }
            c
        })
        .collect()
}

/// Indices of the (up to) two largest eigenvalues, largest first.
fn leading_indices(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(2);
    idx
}

fn fix_signs(coords: &mut [Point]) {
    for axis in 0..2 {
        let mut best = 0.0f64;
        let mut sign = 1.0;
        for c in coords.iter() {
            if c[axis].abs() > best {
                best = c[axis].abs();
                sign = c[axis].signum();
            }
        }
        if sign < 0.0 {
            for c in coords.iter_mut() {
                c[axis] = -c[axis];
            }
        }
        for c in coords.iter_mut() {
            // normalise -0.0 so identical layouts serialise identically
            if c[axis] == 0.0 {
                c[axis] = 0.0;
            }
        }
    }
}

fn stress(rows: &[Vec<f64>], coords: &[Point]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let d = rows[i].iter().zip(&rows[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            let e = dist2(coords[i], coords[j]).sqrt();
            num += (e - d) * (e - d);
            den += d * d;
        }
    }
    if den == 0.0 {
        0.0
    } else {
        (num / den).sqrt()
    }
}

/// Largest pairwise distance of a point set (0 for fewer than two points).
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.max(dist2(points[i], points[j]));
        }
    }
    best.sqrt()
}
