use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scorelens_core::analytics::{
    concave_hull, convex_hull, correlation_matrix, dbscan_labels, mds_project, point_in_polygon,
    polygon_area, polygon_is_simple, standardize, Point,
};
use scorelens_core::features::{catalog, Category, Unit};
use scorelens_core::synth::{random_score, Style};
use scorelens_core::{extract_features, parse_mxl};

/// Connected components of the eps-graph; singletons are noise.
fn component_oracle(points: &[Point], eps: f64) -> Vec<Option<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    let mut degree = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = ((points[i][0] - points[j][0]).powi(2) + (points[i][1] - points[j][1]).powi(2)).sqrt();
            if d <= eps {
                degree[i] += 1;
                degree[j] += 1;
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut ids = std::collections::HashMap::new();
    (0..n)
        .map(|i| {
            if degree[i] == 0 {
                return None;
            }
            let root = find(&mut parent, i);
            let next = ids.len();
            Some(*ids.entry(root).or_insert(next))
        })
        .collect()
}

fn points_strategy(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y)| [x, y]), 0..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dbscan_matches_eps_graph_components(points in points_strategy(60), eps in 0.5..30.0f64) {
        let labels = dbscan_labels(&points, eps, 2).unwrap();
        prop_assert_eq!(labels, component_oracle(&points, eps));
    }

    #[test]
    fn larger_eps_only_merges(points in points_strategy(60), eps in 0.5..10.0f64, grow in 1.0..4.0f64) {
        let fine = dbscan_labels(&points, eps, 2).unwrap();
        let coarse = dbscan_labels(&points, eps * grow, 2).unwrap();
        for i in 0..points.len() {
            for j in 0..points.len() {
                if fine[i].is_some() && fine[i] == fine[j] {
                    prop_assert!(coarse[i].is_some() && coarse[i] == coarse[j]);
                }
            }
        }
    }

    #[test]
    fn concave_hull_contains_members(points in points_strategy(80), concavity in 1.0..5.0f64) {
        let hull = concave_hull(&points, concavity, 0.0).unwrap();
        for v in &hull {
            prop_assert!(points.contains(v));
        }
        if hull.len() >= 3 {
            prop_assert!(polygon_is_simple(&hull));
            for p in &points {
                prop_assert!(point_in_polygon(*p, &hull, 1e-9));
            }
            prop_assert!(polygon_area(&hull) <= polygon_area(&convex_hull(&points)) + 1e-9);
        }
    }

    #[test]
    fn infinite_concavity_is_convex(points in points_strategy(80)) {
        let hull = concave_hull(&points, f64::INFINITY, 0.0).unwrap();
        let convex = convex_hull(&points);
        let (a, b) = (polygon_area(&hull), polygon_area(&convex));
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0));
    }

    #[test]
    fn correlation_is_a_correlation(rows in prop::collection::vec(prop::collection::vec(-10.0..10.0f64, 4), 3..30)) {
        let r = correlation_matrix(&rows).unwrap();
        let p = r.len();
        for (i, row) in r.iter().enumerate() {
            if let Some(d) = row[i] {
                prop_assert!((d - 1.0).abs() <= 1e-12);
            }
            for (j, &rij) in row.iter().enumerate() {
                prop_assert_eq!(rij, r[j][i]);
                if let Some(v) = rij {
                    prop_assert!(v.abs() <= 1.0);
                }
            }
        }
        if r.iter().flatten().all(Option::is_some) {
            let m = nalgebra::DMatrix::from_fn(p, p, |i, j| r[i][j].unwrap());
            let eig = nalgebra::SymmetricEigen::new(m);
            prop_assert!(eig.eigenvalues.iter().all(|&l| l >= -1e-9));
        }
    }

    #[test]
    fn standardized_columns(rows in prop::collection::vec(prop::collection::vec(-100.0..100.0f64, 3), 2..40)) {
        let ids: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let s = standardize(&rows, &ids).unwrap();
        let n = s.rows.len() as f64;
        for j in 0..s.used_features.len() {
            let mean = s.rows.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = s.rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
            prop_assert!(mean.abs() <= 1e-9);
            prop_assert!((var - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn mds_reproduces_planar_distances(points in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 2..12)) {
        let rows: Vec<Vec<f64>> = points.iter().map(|&(x, y)| vec![x, y, 0.0]).collect();
        let e = mds_project(&rows).unwrap();
        let scale = rows.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                let d_in = ((rows[i][0] - rows[j][0]).powi(2) + (rows[i][1] - rows[j][1]).powi(2)).sqrt();
                let d_out = ((e.coords[i][0] - e.coords[j][0]).powi(2) + (e.coords[i][1] - e.coords[j][1]).powi(2)).sqrt();
                prop_assert!((d_in - d_out).abs() <= 1e-9 * scale, "{} vs {}", d_in, d_out);
            }
        }
    }

    #[test]
    fn feature_vectors_are_well_formed(seed in any::<u64>(), tonal in any::<bool>(), measures in 1u32..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let style = Style { tonal, measures, ..Style::default() };
        let score = random_score(&mut rng, "p", "q", &style);
        let bytes = score.to_mxl();
        let doc = parse_mxl(&bytes).unwrap();
        prop_assert_eq!(&doc, &parse_mxl(&bytes).unwrap());
        let v = extract_features(&doc).features;
        prop_assert!(v.is_complete());
        for d in catalog() {
            let x = v.get(d.id).unwrap();
            prop_assert!(x.is_finite());
            match d.unit {
                Unit::Fraction => prop_assert!((0.0..=1.0).contains(&x), "{} = {}", d.id, x),
                Unit::Boolean => prop_assert!(x == 0.0 || x == 1.0),
                Unit::Count => prop_assert!(x >= 0.0 && x.fract() == 0.0),
                _ => prop_assert!(x >= 0.0),
            }
        }
        prop_assert!(v.get("chromatic_motion").unwrap() <= v.get("stepwise_motion").unwrap());
        let melody = catalog().iter().filter(|d| d.category == Category::Melody).count();
        prop_assert_eq!(melody, 12);
    }

    #[test]
    fn transposition_and_tempo(seed in any::<u64>(), k in -12i32..=12, tempo in 40u32..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let score = random_score(&mut rng, "p", "q", &Style { tempo_qpm: tempo, ..Style::default() });
        let base = extract_features(&parse_mxl(&score.to_mxl()).unwrap()).features;
        let moved = extract_features(&parse_mxl(&score.transposed(k).unwrap().to_mxl()).unwrap()).features;
        for d in catalog() {
            let invariant = d.category == Category::Melody
                || matches!(d.id, "most_common_pitch_prevalence" | "most_common_pitch_class_prevalence"
                    | "pitch_variety" | "pitch_class_variety" | "range" | "number_of_common_pitches")
                || d.category == Category::Rhythm;
            if invariant {
                prop_assert!((base.get(d.id).unwrap() - moved.get(d.id).unwrap()).abs() <= 1e-12, "{}", d.id);
            }
        }
        let shift = moved.get("mean_pitch").unwrap() - base.get("mean_pitch").unwrap();
        prop_assert!((shift - f64::from(k)).abs() <= 1e-9);

        let fast = extract_features(&parse_mxl(&score.clone().with_tempo(tempo * 2).to_mxl()).unwrap()).features;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        prop_assert!(rel(fast.get("duration_seconds").unwrap(), base.get("duration_seconds").unwrap() / 2.0) <= 1e-9);
        prop_assert!(rel(fast.get("note_density").unwrap(), base.get("note_density").unwrap() * 2.0) <= 1e-9);
    }
}
