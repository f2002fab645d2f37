//! Inputs shared by the criterion benches.

use scorelens_core::synth::{random_score, Style};
use scorelens_core::Point;

/// A two-voice tonal score with `measures` bars of 4/4.
pub fn score_bytes(seed: u64, measures: u32) -> Vec<u8> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let style = Style {
        tonal: true,
        tonic: 60,
        stepwise: 0.7,
        staccato: 0.1,
        tempo_qpm: 100,
        time_signature: (4, 4),
        measures,
        bass: true,
    };
    random_score(&mut rng, "Bench", "Bench", &style).to_mxl()
}

/// `n` feature rows of width `dim`.
pub fn feature_rows(seed: u64, n: usize, dim: usize) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect()).collect()
}

/// `n` points in a handful of gaussian-ish blobs.
pub fn blobs(seed: u64, n: usize) -> Vec<Point> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let c = (i % 5) as f64 * 10.0;
            let r: f64 = (0..4).map(|_| rng.gen_range(-1.0..1.0)).sum();
            let s: f64 = (0..4).map(|_| rng.gen_range(-1.0..1.0)).sum();
            [c + r, c * 0.5 + s]
        })
        .collect()
}
