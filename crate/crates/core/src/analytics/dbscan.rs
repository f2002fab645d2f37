//! Density clustering of projected points.
//!
//! With `min_pts = 2` every clustered point is a core point, so clusters
//! are exactly the connected components (of size ≥ 2) of the graph linking
//! points within `eps` of each other. Coincident points therefore always
//! share a cluster, which is what makes the projection usable for spotting
//! duplicates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{concave_hull, dist2, AnalyticsError, Point, DEFAULT_CONCAVITY, DEFAULT_LENGTH_THRESHOLD};

pub const DBSCAN_MIN_PTS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    /// Cluster index per input point; `None` is noise.
    pub labels: Vec<Option<usize>>,
    pub eps: f64,
    pub min_pts: usize,
    /// One polygon per cluster, in label order. Vertices are copies of
    /// member coordinates.
    pub hulls: Vec<Vec<Point>>,
}

impl ClusterSet {
    pub fn cluster_count(&self) -> usize {
        self.hulls.len()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| (*l == Some(cluster)).then_some(i))
            .collect()
    }
}

/// DBSCAN with `min_pts = 2` plus a concave hull per cluster.
pub fn dbscan(points: &[Point], eps: f64) -> Result<ClusterSet, AnalyticsError> {
    let labels = dbscan_labels(points, eps, DBSCAN_MIN_PTS)?;
    let clusters = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let mut member_points: Vec<Vec<Point>> = vec![Vec::new(); clusters];
    for (p, l) in points.iter().zip(&labels) {
        if let Some(l) = l {
            member_points[*l].push(*p);
        }
    }
    let hulls = member_points
        .iter()
        .map(|m| concave_hull(m, DEFAULT_CONCAVITY, DEFAULT_LENGTH_THRESHOLD))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClusterSet { labels, eps, min_pts: DBSCAN_MIN_PTS, hulls })
}

/// Plain DBSCAN labelling. A point's neighbourhood includes itself and
/// every point at distance ≤ `eps`. Clusters are numbered by their lowest
/// member index.
pub fn dbscan_labels(points: &[Point], eps: f64, min_pts: usize) -> Result<Vec<Option<usize>>, AnalyticsError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(AnalyticsError::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(AnalyticsError::InvalidParameter("non-finite coordinate".into()));
    }
    let grid = Grid::new(points, eps);

    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Unvisited,
        Noise,
        Cluster(usize),
    }
    let mut state = vec![State::Unvisited; points.len()];
    let mut next_cluster = 0;
    let mut neighbours = Vec::new();
    let mut frontier = Vec::new();

    for start in 0..points.len() {
        if state[start] != State::Unvisited {
            continue;
        }
        grid.neighbours(points, start, &mut neighbours);
        if neighbours.len() < min_pts {
            state[start] = State::Noise;
            continue;
        }
        let cluster = next_cluster;
        next_cluster += 1;
        state[start] = State::Cluster(cluster);
        frontier.clear();
        frontier.extend_from_slice(&neighbours);
        while let Some(q) = frontier.pop() {
            match state[q] {
                State::Cluster(_) => continue,
                State::Noise => {
                    // border point: reachable but not core
                    state[q] = State::Cluster(cluster);
                    continue;
                }
                State::Unvisited => state[q] = State::Cluster(cluster),
            }
            grid.neighbours(points, q, &mut neighbours);
            if neighbours.len() >= min_pts {
                frontier.extend(neighbours.iter().copied().filter(|&r| !matches!(state[r], State::Cluster(_))));
            }
        }
    }

    // renumber by first member so labels do not depend on visit order
    let mut remap: HashMap<usize, usize> = HashMap::new();
    Ok(state
        .into_iter()
        .map(|s| match s {
            State::Cluster(c) => {
                let next = remap.len();
                Some(*remap.entry(c).or_insert(next))
            }
            _ => None,
        })
        .collect())
}

/// Uniform grid with cell size `eps`; neighbours lie in the 3x3 block.
struct Grid {
    eps2: f64,
    cell: f64,
    cells: HashMap<(i64, i64), Vec<usize>>,
}

impl Grid {
    fn new(points: &[Point], eps: f64) -> Self {
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(*p, eps)).or_default().push(i);
        }
        Self { eps2: eps * eps, cell: eps, cells }
    }

    fn key(p: Point, cell: f64) -> (i64, i64) {
        // float-to-int casts saturate, so huge coordinates stay well defined
        ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
    }

    fn neighbours(&self, points: &[Point], i: usize, out: &mut Vec<usize>) {
        out.clear();
        let (cx, cy) = Self::key(points[i], self.cell);
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                let Some(bucket) = self.cells.get(&(cx.saturating_add(dx), cy.saturating_add(dy))) else {
                    continue;
                };
                out.extend(bucket.iter().copied().filter(|&j| dist2(points[i], points[j]) <= self.eps2));
            }
        }
        out.sort_unstable();
    }
}
