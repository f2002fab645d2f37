//! Convex and concave hulls of planar point sets.
//!
//! The concave hull follows the edge-digging scheme: start from the convex
//! hull and keep replacing a boundary edge `a-b` by `a-p-b` for the inner
//! point `p` nearest to it, as long as the edge is long compared with how
//! far `p` is from its ends and the two new edges cross nothing.

use std::collections::VecDeque;

use super::{dist2, AnalyticsError, Point};

pub const DEFAULT_CONCAVITY: f64 = 2.0;
pub const DEFAULT_LENGTH_THRESHOLD: f64 = 0.0;

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn unique_points(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    pts
}

/// Indices (into the sorted unique point list) of the convex hull in
/// counter-clockwise order, collinear points excluded.
fn convex_hull_indices(pts: &[Point]) -> Vec<usize> {
    if pts.len() < 3 {
        return (0..pts.len()).collect();
    }
    let mut hull: Vec<usize> = Vec::with_capacity(pts.len() * 2);
    for pass in [false, true] {
        let start = hull.len();
        let order: Box<dyn Iterator<Item = usize>> =
            if pass { Box::new((0..pts.len()).rev()) } else { Box::new(0..pts.len()) };
        for i in order {
            while hull.len() >= start + 2
                && orient(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

/// Convex hull, counter-clockwise, without collinear boundary points.
/// Duplicates are ignored; fewer than three distinct (or all collinear)
/// points give the extreme points only.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let pts = unique_points(points);
    convex_hull_indices(&pts).into_iter().map(|i| pts[i]).collect()
}

/// Shoelace area (positive for counter-clockwise polygons).
pub fn polygon_area(polygon: &[Point]) -> f64 {
    let n = polygon.len();
    if n < 3 {
        return 0.0;
    }
    (0..n)
        .map(|i| {
            let a = polygon[i];
            let b = polygon[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

fn sq_seg_dist(p: Point, a: Point, b: Point) -> f64 {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return dist2(p, a);
    }
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
    dist2(p, [a[0] + t * dx, a[1] + t * dy])
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Closed-segment intersection test (touching counts).
fn segments_intersect(p1: Point, q1: Point, p2: Point, q2: Point) -> bool {
    let d1 = orient(p2, q2, p1);
    let d2 = orient(p2, q2, q1);
    let d3 = orient(p1, q1, p2);
    let d4 = orient(p1, q1, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(p1, p2, q2))
        || (d2 == 0.0 && on_segment(q1, p2, q2))
        || (d3 == 0.0 && on_segment(p2, p1, q1))
        || (d4 == 0.0 && on_segment(q2, p1, q1))
}

/// Even-odd point-in-polygon test; points within `tolerance` of the
/// boundary count as inside.
pub fn point_in_polygon(p: Point, polygon: &[Point], tolerance: f64) -> bool {
    let n = polygon.len();
    match n {
        0 => return false,
        1 => return dist2(p, polygon[0]) <= tolerance * tolerance,
        _ => {}
    }
    for i in 0..n {
        if sq_seg_dist(p, polygon[i], polygon[(i + 1) % n]) <= tolerance * tolerance {
            return true;
        }
    }
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (polygon[i], polygon[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0] {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// True when no two non-adjacent edges of the closed polygon touch.
pub fn polygon_is_simple(polygon: &[Point]) -> bool {
    let n = polygon.len();
    if n < 4 {
        return n < 3 || orient(polygon[0], polygon[1], polygon[2]) != 0.0;
    }
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// Doubly linked ring of point indices forming the current boundary.
struct Ring {
    next: Vec<usize>,
    prev: Vec<usize>,
    on_ring: Vec<bool>,
}

impl Ring {
    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.on_ring.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| (i, self.next[i]))
    }

    fn insert_after(&mut self, a: usize, p: usize) {
        let b = self.next[a];
        self.next[a] = p;
        self.prev[p] = a;
        self.next[p] = b;
        self.prev[b] = p;
        self.on_ring[p] = true;
    }
}

/// Concave hull of a point set.
///
/// `concavity ≥ 1` controls how deep edges may dig (∞ keeps the convex
/// hull); edges shorter than `length_threshold` never dig. One or two
/// distinct points yield that point or segment. The result is a simple
/// polygon whose vertices are input points and which contains every input
/// point.
pub fn concave_hull(points: &[Point], concavity: f64, length_threshold: f64) -> Result<Vec<Point>, AnalyticsError> {
    if concavity.is_nan() || concavity < 1.0 {
        return Err(AnalyticsError::InvalidParameter(format!("concavity must be >= 1, got {concavity}")));
    }
    if length_threshold.is_nan() || length_threshold < 0.0 {
        return Err(AnalyticsError::InvalidParameter(format!(
            "length threshold must be >= 0, got {length_threshold}"
        )));
    }
    let pts = unique_points(points);
    let hull = convex_hull_indices(&pts);
    if hull.len() < 3 {
        return Ok(hull.into_iter().map(|i| pts[i]).collect());
    }

    let n = pts.len();
    let mut ring = Ring { next: vec![0; n], prev: vec![0; n], on_ring: vec![false; n] };
    for (k, &i) in hull.iter().enumerate() {
        ring.next[i] = hull[(k + 1) % hull.len()];
        ring.prev[i] = hull[(k + hull.len() - 1) % hull.len()];
        ring.on_ring[i] = true;
    }
    let mut inner: Vec<usize> = (0..n).filter(|&i| !ring.on_ring[i]).collect();

    let sq_concavity = concavity * concavity;
    let sq_threshold = length_threshold * length_threshold;
    let mut queue: VecDeque<usize> = hull.iter().copied().collect();

    while let Some(a) = queue.pop_front() {
        if inner.is_empty() {
            break;
        }
        let b = ring.next[a];
        let sq_len = dist2(pts[a], pts[b]);
        if sq_len < sq_threshold {
            continue;
        }
        let max_sq = sq_len / sq_concavity;
        let Some(p) = find_candidate(&pts, &ring, &inner, a, b, max_sq) else {
            continue;
        };
        if dist2(pts[p], pts[a]).min(dist2(pts[p], pts[b])) < max_sq {
            ring.insert_after(a, p);
            inner.retain(|&i| i != p);
            queue.push_back(a);
            queue.push_back(p);
        }
    }

    let start = hull[0];
    let mut out = vec![pts[start]];
    let mut cur = ring.next[start];
    while cur != start {
        out.push(pts[cur]);
        cur = ring.next[cur];
    }
    Ok(out)
}

/// Nearest inner point to edge `a-b` that is closer to it than to the
/// neighbouring edges, keeps the ring simple, and leaves no other point
/// outside once the triangle `a-p-b` is cut away.
fn find_candidate(pts: &[Point], ring: &Ring, inner: &[usize], a: usize, b: usize, max_sq: f64) -> Option<usize> {
    let before = ring.prev[a];
    let after = ring.next[b];
    let mut candidates: Vec<(f64, usize)> = inner
        .iter()
        .map(|&i| (sq_seg_dist(pts[i], pts[a], pts[b]), i))
        .filter(|(d, _)| *d <= max_sq)
        .collect();
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    candidates.into_iter().map(|(_, p)| p).find(|&p| {
        let d = sq_seg_dist(pts[p], pts[a], pts[b]);
        d < sq_seg_dist(pts[p], pts[before], pts[a])
            && d < sq_seg_dist(pts[p], pts[b], pts[after])
            && crosses_nothing(pts, ring, a, p)
            && crosses_nothing(pts, ring, p, b)
            && triangle_is_clear(pts, ring, inner, a, p, b)
    })
}

fn crosses_nothing(pts: &[Point], ring: &Ring, s: usize, t: usize) -> bool {
    ring.edges().all(|(u, v)| {
        u == s || u == t || v == s || v == t || !segments_intersect(pts[u], pts[v], pts[s], pts[t])
    })
}

/// No other inner point or ring vertex may end up outside after digging:
/// nothing strictly inside triangle `a-p-b` or on the open edge `a-b`.
fn triangle_is_clear(pts: &[Point], ring: &Ring, inner: &[usize], a: usize, p: usize, b: usize) -> bool {
    let (pa, pp, pb) = (pts[a], pts[p], pts[b]);
    let s = orient(pa, pp, pb);
    if s == 0.0 {
        // p sits on a-b: nothing is cut away
        return true;
    }
    let blocks = |q: Point| {
        orient(pa, pp, q) * s > 0.0 && orient(pp, pb, q) * s > 0.0 && orient(pb, pa, q) * s >= 0.0
    };
    let ring_vertices = ring.on_ring.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| i);
    inner
        .iter()
        .copied()
        .chain(ring_vertices)
        .filter(|&q| q != p && q != a && q != b)
        .all(|q| !blocks(pts[q]))
}
