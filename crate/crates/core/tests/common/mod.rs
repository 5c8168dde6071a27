#![allow(dead_code)]

use missing_kmeans::{Dataset, MissingPoint};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points with coordinates uniform in `[-10, 10)`, each missing between
/// `0` and `delta` coordinates; point 0 misses exactly `delta`.
pub fn random_instance(rng: &mut impl Rng, n: usize, d: usize, delta: usize) -> Dataset {
    let points = (0..n)
        .map(|x| {
            let mut p = MissingPoint::complete((0..d).map(|_| rng.random_range(-10.0..10.0)).collect());
            let drop = if x == 0 { delta } else { rng.random_range(0..=delta) };
            for i in sample(rng, d, drop) {
                p.unset(i);
            }
            p
        })
        .collect();
    Dataset::with_dim(d, points).unwrap()
}

/// Like [`random_instance`] but with small integer coordinates, so ties and
/// repeated values are common, and any point may be null.
pub fn gritty_instance(rng: &mut impl Rng, n: usize, d: usize) -> Dataset {
    let points = (0..n)
        .map(|_| {
            let entries: Vec<Option<f64>> = (0..d)
                .map(|_| rng.random_bool(0.7).then(|| rng.random_range(-3..=3) as f64))
                .collect();
            MissingPoint::from_options(&entries)
        })
        .collect();
    Dataset::with_dim(d, points).unwrap()
}

pub fn random_point(rng: &mut impl Rng, d: usize, defined: f64) -> MissingPoint {
    let entries: Vec<Option<f64>> = (0..d)
        .map(|_| rng.random_bool(defined).then(|| rng.random_range(-5.0..5.0)))
        .collect();
    MissingPoint::from_options(&entries)
}

/// Squared distance over the coordinates both points define, from plain
/// option vectors.
pub fn naive_sq(a: &[Option<f64>], b: &[Option<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => (x - y) * (x - y),
            _ => 0.0,
        })
        .sum()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
