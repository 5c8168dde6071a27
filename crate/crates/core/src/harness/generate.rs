//! Synthetic Gaussian mixtures with missing coordinates.

use rand::seq::{index::sample, SliceRandom};
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{Dataset, MissingPoint};
use crate::rng::StreamKey;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    /// Most coordinates a point may miss.
    pub delta: usize,
    /// Minimum pairwise distance between true centers.
    pub separation: f64,
    pub noise_sigma: f64,
    /// Fraction of points that miss at least one coordinate.
    pub missing_rate: f64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Mixture {
    pub data: Dataset,
    /// Ground-truth cluster of each point.
    pub truth: Vec<usize>,
    pub centers: Vec<Vec<f64>>,
}

/// Draws a mixture. Point `x` belongs to cluster `x mod k` before a shuffle,
/// so every cluster is populated. When `delta > 0` and `missing_rate > 0`,
/// point 0 misses exactly `delta` coordinates so the data's observed bound
/// equals `delta`; every other point misses, with probability `missing_rate`,
/// a uniform subset whose size is uniform in `1..=delta`.
pub fn gen_mixture(spec: &MixtureSpec) -> Result<Mixture> {
    let MixtureSpec {
        k,
        n,
        d,
        delta,
        separation,
        noise_sigma,
        missing_rate,
        seed,
    } = *spec;
    if k == 0 || n < k {
        return Err(Error::usage(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if d == 0 || delta > d {
        return Err(Error::usage(format!(
            "need d >= 1 and delta <= d, got d = {d}, delta = {delta}"
        )));
    }
    if !(separation >= 0.0 && separation.is_finite()) || !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::usage("separation and noise must be finite and nonnegative"));
    }
    if !(0.0..=1.0).contains(&missing_rate) {
        return Err(Error::usage("missing rate must lie in [0, 1]"));
    }

    let mut rng = StreamKey::root(seed).rng();
    let centers = place_centers(k, d, separation, &mut rng);
    let noise = Normal::new(0.0, noise_sigma).map_err(|e| Error::usage(e.to_string()))?;

    let mut truth: Vec<usize> = (0..n).map(|x| x % k).collect();
    truth.shuffle(&mut rng);
    let mut points = Vec::with_capacity(n);
    for (x, &t) in truth.iter().enumerate() {
        let values: Vec<f64> = centers[t].iter().map(|&c| c + noise.sample(&mut rng)).collect();
        let mut p = MissingPoint::complete(values);
        let drop = if delta == 0 || missing_rate == 0.0 {
            0
        } else if x == 0 {
            delta
        } else if rng.random_bool(missing_rate) {
            rng.random_range(1..=delta)
        } else {
            0
        };
        for i in sample(&mut rng, d, drop) {
            p.unset(i);
        }
        points.push(p);
    }
    Ok(Mixture {
        data: Dataset::with_dim(d, points)?,
        truth,
        centers,
    })
}

/// Rejection-samples centers in a cube; falls back to evenly spaced centers
/// along a random direction, which always meets the separation.
fn place_centers(k: usize, d: usize, separation: f64, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let side = 2.0 * separation * k as f64;
    'attempt: for _ in 0..1000 {
        let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let c: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * side).collect();
            if centers.iter().any(|o| dist(o, &c) < separation) {
                continue 'attempt;
            }
            centers.push(c);
        }
        return centers;
    }
    let mut dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    dir.iter_mut().for_each(|v| *v /= norm);
    (0..k)
        .map(|t| dir.iter().map(|v| v * separation * t as f64).collect())
        .collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{centroid, cost};

    fn spec() -> MixtureSpec {
        MixtureSpec {
            k: 3,
            n: 60,
            d: 4,
            delta: 2,
            separation: 10.0,
            noise_sigma: 0.0,
            missing_rate: 0.5,
            seed: 1,
        }
    }

    fn truth_cost(m: &Mixture, k: usize) -> f64 {
        (0..k)
            .map(|t| {
                let members: Vec<usize> = (0..m.data.len()).filter(|&x| m.truth[x] == t).collect();
                let c = centroid(&m.data, &members).unwrap();
                cost(&m.data, &members, c.view()).unwrap()
            })
            .sum()
    }

    #[test]
    fn noiseless_truth_costs_nothing() {
        let m = gen_mixture(&spec()).unwrap();
        assert!(truth_cost(&m, 3) < 1e-12);
        assert_eq!(m.data.delta(), 2);
        let complete = gen_mixture(&MixtureSpec {
            missing_rate: 0.0,
            ..spec()
        })
        .unwrap();
        assert_eq!(complete.data.delta(), 0);
        assert!(truth_cost(&complete, 3) < 1e-12);
    }

    #[test]
    fn centers_are_separated() {
        for seed in 0..20 {
            let m = gen_mixture(&MixtureSpec { seed, k: 5, ..spec() }).unwrap();
            for a in 0..5 {
                for b in a + 1..5 {
                    assert!(dist(&m.centers[a], &m.centers[b]) >= 10.0);
                }
            }
        }
    }

    #[test]
    fn every_cluster_populated() {
        let m = gen_mixture(&MixtureSpec { n: 3, ..spec() }).unwrap();
        let mut t = m.truth.clone();
        t.sort();
        assert_eq!(t, vec![0, 1, 2]);
    }

    #[test]
    fn infeasible_parameters() {
        assert!(gen_mixture(&MixtureSpec { n: 2, ..spec() }).is_err());
        assert!(gen_mixture(&MixtureSpec { delta: 5, ..spec() }).is_err());
        assert!(gen_mixture(&MixtureSpec {
            missing_rate: 1.5,
            ..spec()
        })
        .is_err());
        assert!(gen_mixture(&MixtureSpec {
            noise_sigma: -1.0,
            ..spec()
        })
        .is_err());
    }

    #[test]
    fn reproducible() {
        let a = gen_mixture(&MixtureSpec {
            noise_sigma: 1.0,
            ..spec()
        })
        .unwrap();
        let b = gen_mixture(&MixtureSpec {
            noise_sigma: 1.0,
            ..spec()
        })
        .unwrap();
        assert_eq!(a.data, b.data);
        assert_eq!(a.truth, b.truth);
    }
}
