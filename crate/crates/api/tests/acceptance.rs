//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p scorelens-api --test acceptance`.

use std::collections::{BTreeMap, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tower::ServiceExt;

use scorelens_api::router;
use scorelens_core::analytics::{concave_hull, dbscan_labels, mds_project, Point};
use scorelens_core::corpus::{CompositionQuery, IngestOptions};
use scorelens_core::features::{catalog, Category};
use scorelens_core::synth::{random_score, write_demo_corpus, SynthNote, SynthScore, Style};
use scorelens_core::{extract_features, parse_mxl, CorpusStore};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

fn opts() -> IngestOptions {
    IngestOptions { public_domain_only: None, reference_year: 2026 }
}

// ---------------------------------------------------------------- fixtures

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn feature_fixtures() -> Outcome {
    let start = Instant::now();
    let table: BTreeMap<String, BTreeMap<String, String>> =
        serde_json::from_slice(&std::fs::read(fixture_dir().join("expected.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    ensure(table.len() == 12, || format!("expected 12 fixtures, found {}", table.len()))?;
    let mut checked = 0;
    for (name, values) in &table {
        let bytes = std::fs::read(fixture_dir().join(format!("{name}.musicxml"))).map_err(|e| e.to_string())?;
        let got = extract_features(&parse_mxl(&bytes).map_err(|e| format!("{name}: {e}"))?).features;
        for d in catalog() {
            let want = match values.get(d.id) {
                Some(v) => {
                    let r: Ratio<i64> = v.parse().map_err(|_| format!("bad fraction {v}"))?;
                    *r.numer() as f64 / *r.denom() as f64
                }
                None => 0.0,
            };
            let have = got.get(d.id).ok_or_else(|| format!("{name}: missing {}", d.id))?;
            ensure((have - want).abs() <= 1e-12, || format!("{name}.{}: got {have}, want {want}", d.id))?;
            checked += 1;
        }
    }
    let took = within(Duration::from_secs(5), start)?;
    Ok(format!("{checked} values across 12 fixtures, {took:.2?}"))
}

// -------------------------------------------------------------- invariance

fn invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let invariant: Vec<&str> = catalog()
        .iter()
        .filter(|d| {
            d.category == Category::Melody
                || matches!(d.id, "most_common_pitch_prevalence" | "most_common_pitch_class_prevalence")
        })
        .map(|d| d.id)
        .collect();
    let features = |s: &SynthScore| extract_features(&parse_mxl(&s.to_mxl()).unwrap()).features;
    for trial in 0..50 {
        let style = Style {
            tonal: rng.gen_bool(0.5),
            tonic: rng.gen_range(55..67),
            stepwise: rng.gen_range(0.0..1.0),
            staccato: rng.gen_range(0.0..0.5),
            tempo_qpm: rng.gen_range(40..200),
            time_signature: [(4, 4), (3, 4), (6, 8), (2, 2)][rng.gen_range(0..4)],
            measures: rng.gen_range(2..12),
            bass: rng.gen_bool(0.7),
        };
        let score = random_score(&mut rng, "t", "c", &style);
        let k = loop {
            let k = rng.gen_range(-12..=12);
            if k != 0 {
                break k;
            }
        };
        let base = features(&score);
        let moved = features(&score.transposed(k).ok_or("transposition left MIDI range")?);
        for id in &invariant {
            let (a, b) = (base.get(id).unwrap(), moved.get(id).unwrap());
            ensure((a - b).abs() <= 1e-12, || format!("trial {trial}, k={k}: {id} {a} vs {b}"))?;
        }
        let fast = features(&score.clone().with_tempo(style.tempo_qpm * 2));
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        let dur = rel(fast.get("duration_seconds").unwrap(), base.get("duration_seconds").unwrap() / 2.0);
        let dens = rel(fast.get("note_density").unwrap(), base.get("note_density").unwrap() * 2.0);
        ensure(dur <= 1e-9 && dens <= 1e-9, || format!("trial {trial}: tempo errors {dur:e}, {dens:e}"))?;
    }
    Ok(format!("50 scores, {} invariant features", invariant.len()))
}

// ---------------------------------------------------------------------- MDS

fn planted(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> (Vec<Point>, Vec<Vec<f64>>) {
    let pts: Vec<Point> = (0..n).map(|_| [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)]).collect();
    // two orthonormal directions in `dim` dimensions via Gram-Schmidt
    let mut u: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    u.iter_mut().for_each(|x| *x /= nu);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    v.iter_mut().zip(&u).for_each(|(x, a)| *x -= dot * a);
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    let offset: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let rows = pts.iter().map(|p| (0..dim).map(|j| offset[j] + p[0] * u[j] + p[1] * v[j]).collect()).collect();
    (pts, rows)
}

fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn mds_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    let sizes: Vec<usize> = (0..200).map(|i| if i == 199 { 100 } else { 2 + i % 7 }).collect();
    for (trial, &n) in sizes.iter().enumerate() {
        let dim = rng.gen_range(2..7);
        let (pts, rows) = planted(&mut rng, n, dim);
        let e = mds_project(&rows).map_err(|e| e.to_string())?;
        let scale = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| dist(pts[i], pts[j])).fold(0.0, f64::max);
        for i in 0..n {
            for j in i + 1..n {
                let err = (dist(pts[i], pts[j]) - dist(e.coords[i], e.coords[j])).abs() / scale;
                worst = worst.max(err);
                ensure(err <= 1e-9, || format!("trial {trial} (n={n}): relative error {err:e}"))?;
            }
        }
        let again = mds_project(&rows).map_err(|e| e.to_string())?;
        let bytes = |c: &[Point]| serde_json::to_vec(c).unwrap();
        ensure(bytes(&again.coords) == bytes(&e.coords), || format!("trial {trial}: repeated run differs"))?;
    }
    let took = within(Duration::from_secs(10), start)?;
    Ok(format!("199 configurations n<=8 + n=100, worst relative error {worst:.1e}, {took:.2?}"))
}

// ------------------------------------------------------------------- DBSCAN

/// Connected components of the eps-graph via union-find; isolated points
/// are noise. Components are numbered by their first point.
fn components(points: &[Point], eps: f64) -> Vec<Option<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut linked = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            if dist(points[i], points[j]) <= eps {
                linked[i] = true;
                linked[j] = true;
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut names = HashMap::new();
    (0..n)
        .map(|i| {
            linked[i].then(|| {
                let r = root(&mut parent, i);
                let next = names.len();
                *names.entry(r).or_insert(next)
            })
        })
        .collect()
}

fn dbscan_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut runs = 0;
    for set in 0..100 {
        let n = rng.gen_range(1..=200);
        let spread = rng.gen_range(1.0..100.0);
        let mut pts: Vec<Point> = (0..n).map(|_| [rng.gen_range(0.0..spread), rng.gen_range(0.0..spread)]).collect();
        if n > 3 && set % 3 == 0 {
            // snap some points to a coarse lattice so distances tie with eps
            for p in pts.iter_mut().take(n / 3) {
                *p = [p[0].round(), p[1].round()];
            }
        }
        for k in 0..10 {
            let eps = if k == 0 { 1.0 } else { spread * rng.gen_range(0.001..0.5) };
            let got = dbscan_labels(&pts, eps, 2).map_err(|e| e.to_string())?;
            ensure(got == components(&pts, eps), || format!("set {set} (n={n}), eps={eps}: labels differ from oracle"))?;
            runs += 1;
        }
    }
    // a duplicated point is its own cluster at every positive eps
    for eps in [1e-12, 1e-6, 1e-3, 0.1, 1.0, 10.0, 1e3] {
        let mut pts: Vec<Point> = (0..30).map(|i| [f64::from(i) * 100.0, 0.0]).collect();
        pts.push(pts[17]);
        let labels = dbscan_labels(&pts, eps, 2).map_err(|e| e.to_string())?;
        ensure(labels[17].is_some() && labels[17] == labels[30], || format!("duplicate split at eps={eps}"))?;
    }
    let took = within(Duration::from_secs(20), start)?;
    Ok(format!("{runs} (set, eps) pairs + duplicate pair at 7 eps values, {took:.2?}"))
}

// --------------------------------------------------------------------- hull

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Gift-wrapping convex hull.
fn convex_oracle(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let start = pts[0];
    let mut hull = vec![start];
    let mut current = start;
    loop {
        let mut next = if pts[0] == current { pts[1] } else { pts[0] };
        for &p in &pts {
            let c = cross(current, next, p);
            if c < 0.0 || (c == 0.0 && dist(current, p) > dist(current, next)) {
                next = p;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        current = next;
    }
    hull
}

fn area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1]).sum::<f64>().abs() / 2.0
}

/// Inside or within `tol` of the boundary (even-odd rule).
fn contains(poly: &[Point], p: Point, tol: f64) -> bool {
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
        let t = if len2 == 0.0 { 0.0 } else { (((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / len2).clamp(0.0, 1.0) };
        if dist(p, [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]) <= tol {
            return true;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) && p[0] < a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]) {
            inside = !inside;
        }
    }
    inside
}

fn hull_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for c in 0..100 {
        let n = rng.gen_range(3..120);
        let cx: f64 = rng.gen_range(-20.0..20.0);
        let cy: f64 = rng.gen_range(-20.0..20.0);
        let pts: Vec<Point> = match c % 3 {
            0 => (0..n).map(|_| [cx + rng.gen_range(-3.0..3.0), cy + rng.gen_range(-3.0..3.0)]).collect(),
            1 => (0..n)
                .map(|_| {
                    // crescent: concave region between two discs
                    let a: f64 = rng.gen_range(0.3..5.9);
                    let r: f64 = rng.gen_range(4.0..5.0);
                    [cx + r * a.cos(), cy + r * a.sin()]
                })
                .collect(),
            _ => (0..n).map(|_| [cx + rng.gen_range(0.0..8.0f64).round(), cy + rng.gen_range(0.0..2.0f64).round()]).collect(),
        };
        let hull = concave_hull(&pts, 2.0, 0.0).map_err(|e| e.to_string())?;
        ensure(hull.iter().all(|v| pts.contains(v)), || format!("cluster {c}: hull vertex not a member"))?;
        if hull.len() >= 3 {
            for p in &pts {
                ensure(contains(&hull, *p, 1e-9), || format!("cluster {c}: member {p:?} outside hull"))?;
            }
        }
        let convex = concave_hull(&pts, f64::INFINITY, 0.0).map_err(|e| e.to_string())?;
        let (a, b) = (area(&convex), area(&convex_oracle(&pts)));
        ensure((a - b).abs() <= 1e-9 * b.max(1.0), || format!("cluster {c}: convex area {a} vs oracle {b}"))?;
    }
    Ok("100 clusters (blobs, crescents, lattices)".into())
}

// ----------------------------------------------------------------- service

struct Service {
    _dirs: Vec<tempfile::TempDir>,
    store: Arc<CorpusStore>,
    app: Router,
    rt: tokio::runtime::Runtime,
}

impl Service {
    fn new(root: tempfile::TempDir, keep: Vec<tempfile::TempDir>) -> Self {
        let store = Arc::new(CorpusStore::open(root.path()).unwrap());
        let app = router(Arc::clone(&store));
        let mut dirs = keep;
        dirs.push(root);
        let rt = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
        Self { _dirs: dirs, store, app, rt }
    }

    fn call(&self, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
        let mut req = Request::builder().method(method).uri(uri);
        let body = match body {
            Some(b) => {
                req = req.header(header::CONTENT_TYPE, "application/json");
                Body::from(b.to_string())
            }
            None => Body::empty(),
        };
        self.rt.block_on(async {
            let res = self.app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
            let status = res.status();
            let bytes = res.into_body().collect().await.unwrap().to_bytes();
            (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
        })
    }

    fn get(&self, uri: &str) -> Value {
        let (s, v) = self.call(Method::GET, uri, None);
        assert_eq!(s, StatusCode::OK, "GET {uri}: {v}");
        v
    }

    fn post(&self, uri: &str, body: Value) -> (StatusCode, Value) {
        self.call(Method::POST, uri, Some(body))
    }
}

#[allow(clippy::needless_range_loop)]
fn correlation() -> Outcome {
    // octave share rises with k, so the mean interval rises with it
    let src = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..12 {
        let mut notes = Vec::new();
        let mut pitch = 60u8;
        for i in 0..24 {
            let step: i16 = if i % 12 < k { 12 } else { [1, 2, 2][rng.gen_range(0..3)] };
            let up = pitch < 66;
            pitch = if up { (i16::from(pitch) + step) as u8 } else { (i16::from(pitch) - step) as u8 };
            notes.push(SynthNote::note(pitch, 4));
        }
        let score = SynthScore::single_voice(format!("Etude No. {k}"), notes);
        std::fs::write(src.path().join(format!("e{k:02}.mxl")), score.to_mxl()).map_err(|e| e.to_string())?;
    }
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let svc = Service::new(root, vec![src]);
    svc.store.ingest_directory(svc._dirs[0].path(), opts()).map_err(|e| e.to_string())?;
    let c = svc.get("/api/correlation?features=melodic_octaves,average_melodic_interval,note_density,range,pitch_variety");
    let m: Vec<Vec<Option<f64>>> = serde_json::from_value(c["matrix"].clone()).map_err(|e| e.to_string())?;
    for i in 0..m.len() {
        for j in 0..m.len() {
            ensure(m[i][j] == m[j][i], || format!("asymmetric at ({i},{j})"))?;
            if let Some(r) = m[i][j] {
                ensure(r.abs() <= 1.0, || format!("|r| > 1 at ({i},{j})"))?;
            }
        }
        if let Some(d) = m[i][i] {
            ensure(d == 1.0, || format!("diagonal {d} at {i}"))?;
        }
    }
    let r = m[0][1].ok_or("melodic_octaves constant")?;
    ensure(r > 0.0, || format!("octaves vs mean interval r = {r}"))?;
    Ok(format!("r(melodic_octaves, average_melodic_interval) = {r:.3}"))
}

fn end_to_end() -> Outcome {
    let src = tempfile::tempdir().map_err(|e| e.to_string())?;
    let manifest = write_demo_corpus(src.path(), 2024, 3, 4).map_err(|e| e.to_string())?;
    ensure(manifest.files.len() == 12, || format!("generated {} files", manifest.files.len()))?;
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root_path = root.path().to_path_buf();
    let svc = Service::new(root, vec![src]);
    let src_path = svc._dirs[0].path().to_path_buf();

    let start = Instant::now();
    let report = svc.store.ingest_directory(&src_path, opts()).map_err(|e| e.to_string())?;
    ensure(report.parsed.len() == 12 && report.failed.is_empty(), || format!("ingest report {report:?}"))?;

    let page = svc.get("/api/compositions");
    let ids: Vec<String> = page["items"].as_array().unwrap().iter().map(|i| i["id"].as_str().unwrap().to_owned()).collect();
    ensure(ids.len() == 12, || format!("{} compositions listed", ids.len()))?;
    let mut per_composer: BTreeMap<String, std::collections::BTreeSet<String>> = BTreeMap::new();
    for item in page["items"].as_array().unwrap() {
        per_composer.entry(item["composer_id"].to_string()).or_default().insert(item["composition_type"].to_string());
    }
    ensure(per_composer.len() == 3 && per_composer.values().all(|t| t.len() == 4), || {
        format!("expected 3 composers with 4 types each, got {per_composer:?}")
    })?;

    let (s, layout) = svc.post("/api/projection", json!({"ids": ids, "features": [
        "melodic_octaves", "average_melodic_interval", "pitch_variety", "note_density", "range", "staccato_incidence"]}));
    ensure(s == StatusCode::OK, || format!("projection: {layout}"))?;
    ensure(layout["entity_ids"] == json!(ids), || "projection ids differ from selection".into())?;
    let coords: Vec<Point> = serde_json::from_value(layout["coords"].clone()).map_err(|e| e.to_string())?;
    ensure(coords.len() == 12 && coords.iter().flatten().all(|v| v.is_finite()), || "bad coordinates".into())?;

    let (s, clusters) = svc.post("/api/clusters", json!({"coords": coords, "eps_fraction": 0.25}));
    ensure(s == StatusCode::OK, || format!("clusters: {clusters}"))?;
    let labels: Vec<Option<usize>> = serde_json::from_value(clusters["labels"].clone()).map_err(|e| e.to_string())?;
    let hulls: Vec<Vec<Point>> = serde_json::from_value(clusters["hulls"].clone()).map_err(|e| e.to_string())?;
    ensure(labels.len() == 12, || "one label per coordinate".into())?;
    ensure(hulls.len() == labels.iter().flatten().max().map_or(0, |m| m + 1), || "one hull per cluster".into())?;
    ensure(hulls.iter().flatten().all(|v| coords.contains(v)), || "hull vertex is not a layout coordinate".into())?;
    let eps = clusters["eps"].as_f64().unwrap();
    ensure(labels == components(&coords, eps), || "cluster labels differ from oracle".into())?;

    let selection: Vec<&String> = ids.iter().zip(&labels).filter(|(_, l)| l.is_some()).map(|(id, _)| id).collect();
    let sel = if selection.is_empty() { ids.iter().take(3).collect() } else { selection };
    let joined = sel.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(",");
    let dist_summary = svc.get(&format!("/api/distribution?feature=melodic_octaves&ids={joined}"));
    let hist_sum: u64 = dist_summary["selection_histogram"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum();
    ensure(hist_sum as usize == sel.len(), || "selection histogram does not count the selection".into())?;
    ensure(dist_summary["corpus_stats"]["count"] == 12, || "corpus histogram size".into())?;
    let took = within(Duration::from_secs(2), start)?;

    let manifest_before = std::fs::read(root_path.join("manifest.json")).map_err(|e| e.to_string())?;
    let features_before = std::fs::read(root_path.join("features.json")).map_err(|e| e.to_string())?;
    let again = svc.store.ingest_directory(&src_path, opts()).map_err(|e| e.to_string())?;
    ensure(again.parsed.is_empty() && again.unchanged == 12, || format!("re-ingest report {again:?}"))?;
    ensure(std::fs::read(root_path.join("manifest.json")).unwrap() == manifest_before, || "manifest changed".into())?;
    ensure(std::fs::read(root_path.join("features.json")).unwrap() == features_before, || "feature cache changed".into())?;
    ensure(svc.get("/api/compositions") == page, || "listing changed after re-ingest".into())?;
    Ok(format!("ingest + 4 requests in {took:.2?}, {} clusters, re-ingest unchanged", hulls.len()))
}

fn use_case_round_trip() -> Outcome {
    let src = tempfile::tempdir().map_err(|e| e.to_string())?;
    write_demo_corpus(src.path(), 5, 6, 4).map_err(|e| e.to_string())?;
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let svc = Service::new(root, vec![src]);
    svc.store.ingest_directory(svc._dirs[0].path(), opts()).map_err(|e| e.to_string())?;

    let modern = svc.store.snapshot().filter(&CompositionQuery {
        epochs: vec![scorelens_core::Epoch::Modern],
        ..Default::default()
    });
    let uc = json!({
        "name": "atonality",
        "selection": modern,
        "selected_features": ["chromatic_motion", "most_common_pitch_class_prevalence", "pitch_class_variety"],
        "grouping": "composer",
        "eps": 0.3,
        "color_by": "epoch"
    });
    let (s, saved) = svc.post("/api/usecases", uc.clone());
    ensure(s == StatusCode::CREATED, || format!("save: {saved}"))?;
    let loaded = svc.get("/api/usecases/atonality");
    ensure(loaded == uc, || format!("loaded {loaded} != saved {uc}"))?;

    svc.store.seed_use_cases().map_err(|e| e.to_string())?;
    let fe = svc.get("/api/usecases/feature-explanation");
    let n_sel = fe["selection"].as_array().map_or(0, Vec::len);
    let n_feat = fe["selected_features"].as_array().map_or(0, Vec::len);
    ensure((n_sel, n_feat) == (10, 5), || format!("feature-explanation has {n_sel} compositions, {n_feat} features"))?;
    let (s, _) = svc.call(Method::GET, "/api/usecases/does-not-exist", None);
    ensure(s == StatusCode::NOT_FOUND, || format!("unknown slug gave {s}"))?;
    Ok(format!("atonality identical after reload; feature-explanation {n_sel} compositions x {n_feat} features"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("feature fixtures", feature_fixtures),
        ("transposition/tempo invariance", invariance),
        ("MDS oracle", mds_oracle),
        ("DBSCAN oracle", dbscan_oracle),
        ("hull properties", hull_properties),
        ("correlation", correlation),
        ("end-to-end", end_to_end),
        ("use-case round trip", use_case_round_trip),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
