use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use scorelens_bench::{blobs, feature_rows, score_bytes};
use scorelens_core::analytics::{concave_hull, dbscan_labels, mds_project, standardize};
use scorelens_core::{extract_features, parse_mxl};

fn parse_and_extract(c: &mut Criterion) {
    let mut g = c.benchmark_group("score");
    for measures in [16u32, 128] {
        let bytes = score_bytes(1, measures);
        let doc = parse_mxl(&bytes).unwrap();
        g.bench_with_input(BenchmarkId::new("parse_mxl", measures), &bytes, |b, bytes| {
            b.iter(|| parse_mxl(black_box(bytes)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("extract_features", measures), &doc, |b, doc| {
            b.iter(|| extract_features(black_box(doc)))
        });
    }
    g.finish();
}

fn projection(c: &mut Criterion) {
    let mut g = c.benchmark_group("mds");
    g.sample_size(20);
    for n in [50usize, 200, 1000] {
        let rows = feature_rows(2, n, 28);
        let ids: Vec<String> = (0..28).map(|i| format!("f{i}")).collect();
        let z = standardize(&rows, &ids).unwrap().rows;
        g.bench_with_input(BenchmarkId::from_parameter(n), &z, |b, z| b.iter(|| mds_project(black_box(z)).unwrap()));
    }
    g.finish();
}

fn clustering(c: &mut Criterion) {
    let mut g = c.benchmark_group("clusters");
    for n in [200usize, 2000] {
        let pts = blobs(3, n);
        g.bench_with_input(BenchmarkId::new("dbscan", n), &pts, |b, pts| {
            b.iter(|| dbscan_labels(black_box(pts), 0.8, 2).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("concave_hull", n), &pts, |b, pts| {
            b.iter(|| concave_hull(black_box(pts), 2.0, 0.0).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, parse_and_extract, projection, clustering);
criterion_main!(benches);
