//! Randomized center estimation.
//!
//! Two estimators drive the search. [`superset_sample_value`] estimates one
//! coordinate of an unknown cluster's centroid from a small uniform sample in
//! which the cluster's members are guessed. [`initial_center_sample`] builds a
//! whole partial center whose domain is copied from a random pivot point.
//! Both sample with replacement.
//!
//! With [`SamplingParams::anchored`] set, half of all guesses are anchored:
//! instead of a uniform subset of the draws, the guess is the `s` draws
//! nearest an anchor (the pivot, or the partial center being extended), with
//! `s` uniform over the number of distinct points drawn. The other half are uniform as above.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{centroid_unchecked, sq_dist_full};
use crate::error::{Error, Result};
use crate::point::{Dataset, MissingPoint, PointView};

/// Number of fresh samples tried before falling back to a point known to be
/// defined at the coordinate.
pub const DEFAULT_RETRY_LIMIT: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams {
    /// Approximation slack for a single estimate.
    pub alpha: f64,
    /// Sample size for single-coordinate estimates.
    pub m: usize,
    /// Sample size for whole-center estimates, `ceil(8 * lambda)`.
    pub lambda_ceil: usize,
    pub retry_limit: usize,
    /// Mix anchored guesses in with the uniform ones.
    #[serde(default)]
    pub anchored: bool,
}

impl SamplingParams {
    /// Sizes for slack `alpha` on data with at most `delta` missing
    /// coordinates per point. With `delta == 0` the whole-center estimator is
    /// never used and `lambda_ceil` is pinned to its floor of 8.
    pub fn derive(alpha: f64, delta: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::usage(format!("alpha must be positive, got {alpha}")));
        }
        let m = ((4.0 / alpha).ceil() as usize).max(2);
        let lambda_ceil = if delta == 0 {
            8
        } else {
            (8.0 * lambda_of(alpha, delta)?).ceil() as usize
        };
        Ok(SamplingParams {
            alpha,
            m,
            lambda_ceil,
            retry_limit: DEFAULT_RETRY_LIMIT,
            anchored: true,
        })
    }
}

/// `max{(3/alpha)^(1/(2 delta)), (128 delta^3)^(1/(2 delta))}`.
pub fn lambda_of(alpha: f64, delta: usize) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::usage(format!("alpha must be positive, got {alpha}")));
    }
    if delta == 0 {
        return Err(Error::usage("lambda is undefined for delta = 0"));
    }
    let exponent = 1.0 / (2.0 * delta as f64);
    let from_alpha = (3.0 / alpha).powf(exponent);
    let from_delta = (128.0 * (delta as f64).powi(3)).powf(exponent);
    Ok(from_alpha.max(from_delta))
}

#[inline]
fn draw(view: &[usize], rng: &mut impl Rng) -> usize {
    view[rng.random_range(0..view.len())]
}

/// Positions of a uniformly random nonempty subset of `0..len`.
fn nonempty_subset(len: usize, rng: &mut impl Rng, out: &mut Vec<usize>) {
    debug_assert!(len > 0);
    loop {
        out.clear();
        out.extend((0..len).filter(|_| rng.random::<bool>()));
        if !out.is_empty() {
            return;
        }
    }
}

/// One candidate value for coordinate `coord` of an unknown cluster centroid.
///
/// Draws `m` points from the view, keeps a random nonempty subset of the
/// draws as the guess for the cluster's members, and returns the mean of the
/// kept draws that define `coord`. If no kept draw defines it after
/// `retry_limit` attempts, a uniform point defined at `coord` supplies the
/// value; if no point of the view defines `coord` the result is `0`, which
/// contributes nothing to any cost on the view.
pub fn superset_sample_value(
    data: &Dataset,
    view: &[usize],
    coord: usize,
    params: &SamplingParams,
    rng: &mut impl Rng,
) -> Result<f64> {
    if view.is_empty() {
        return Err(Error::usage("cannot sample from an empty set"));
    }
    if coord >= data.dim() {
        return Err(Error::usage(format!("coordinate {coord} out of range")));
    }
    let m = params.m.max(1);
    let mut draws = Vec::with_capacity(m);
    let mut kept = Vec::with_capacity(m);
    for _ in 0..params.retry_limit.max(1) {
        draws.clear();
        draws.extend((0..m).map(|_| draw(view, rng)));
        nonempty_subset(m, rng, &mut kept);
        let (mut sum, mut count) = (0.0, 0usize);
        for &pos in &kept {
            if let Some(v) = data.point(draws[pos]).get(coord) {
                sum += v;
                count += 1;
            }
        }
        if count > 0 {
            return Ok(sum / count as f64);
        }
    }
    Ok(defined_fallback(data, view, coord, rng).unwrap_or(0.0))
}

/// As [`superset_sample_value`], but when `params.anchored` is set the guess
/// is, with probability one half, the draws defined at `coord` that lie
/// nearest `anchor`.
pub fn anchored_sample_value(
    data: &Dataset,
    view: &[usize],
    coord: usize,
    anchor: PointView<'_>,
    params: &SamplingParams,
    rng: &mut impl Rng,
) -> Result<f64> {
    if !params.anchored || rng.random::<bool>() {
        return superset_sample_value(data, view, coord, params, rng);
    }
    if view.is_empty() {
        return Err(Error::usage("cannot sample from an empty set"));
    }
    if coord >= data.dim() {
        return Err(Error::usage(format!("coordinate {coord} out of range")));
    }
    let m = params.m.max(1);
    let mut draws = Vec::with_capacity(m);
    for _ in 0..params.retry_limit.max(1) {
        draws.clear();
        draws.extend(
            (0..m)
                .map(|_| draw(view, rng))
                .filter(|&x| data.mask(x).contains(coord)),
        );
        if !draws.is_empty() {
            nearest_guess(data, &mut draws, anchor, rng);
            return Ok(coordinate_mean(data, &draws, coord).expect("draws define the coordinate"));
        }
    }
    Ok(defined_fallback(data, view, coord, rng).unwrap_or(0.0))
}

/// Shrinks `draws` to the copies of the `q` distinct points nearest `anchor`,
/// `q` uniform over the number of distinct points drawn. Ties in distance are
/// broken by dataset index.
fn nearest_guess(data: &Dataset, draws: &mut Vec<usize>, anchor: PointView<'_>, rng: &mut impl Rng) {
    let mut keyed: Vec<(f64, usize)> = draws
        .iter()
        .map(|&x| (sq_dist_full(data.point(x), anchor), x))
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let distinct = 1 + keyed.windows(2).filter(|w| w[0].1 != w[1].1).count();
    let q = rng.random_range(1..=distinct);
    draws.clear();
    let mut seen = 0;
    for (i, &(_, x)) in keyed.iter().enumerate() {
        if i == 0 || keyed[i - 1].1 != x {
            seen += 1;
            if seen > q {
                break;
            }
        }
        draws.push(x);
    }
}

/// Value at `coord` of a uniform point of `PD(view, coord)`, if any.
fn defined_fallback(data: &Dataset, view: &[usize], coord: usize, rng: &mut impl Rng) -> Option<f64> {
    let defined: Vec<usize> = view.iter().copied().filter(|&x| data.mask(x).contains(coord)).collect();
    (!defined.is_empty()).then(|| data.point(draw(&defined, rng)).values[coord])
}

/// A partial center whose domain equals that of a uniformly drawn pivot.
pub fn initial_center_sample(
    data: &Dataset,
    view: &[usize],
    params: &SamplingParams,
    rng: &mut impl Rng,
) -> Result<MissingPoint> {
    initial_center_sample_with_pivot(data, view, params, rng).map(|(u, _)| u)
}

/// As [`initial_center_sample`], also returning the pivot's point index.
///
/// Coordinates of the pivot's domain are taken from the centroid of one
/// uniform sample of size `lambda_ceil`; any coordinate that sample leaves
/// undefined gets its own fresh sample, retried up to `retry_limit` times and
/// finally drawn from the points defined there (the pivot is one of them).
/// An anchored guess ranks each sample, with the pivot added, by distance to
/// the pivot and keeps a random number of the nearest.
pub fn initial_center_sample_with_pivot(
    data: &Dataset,
    view: &[usize],
    params: &SamplingParams,
    rng: &mut impl Rng,
) -> Result<(MissingPoint, usize)> {
    if view.is_empty() {
        return Err(Error::usage("cannot sample from an empty set"));
    }
    let pivot = draw(view, rng);
    let anchored = params.anchored && rng.random::<bool>();
    let anchor = data.point(pivot);
    let size = params.lambda_ceil.max(1);
    let mut sample = Vec::with_capacity(size + 1);

    sample.extend((0..size).map(|_| draw(view, rng)));
    if anchored {
        sample.push(pivot);
        nearest_guess(data, &mut sample, anchor, rng);
    }
    let shared = centroid_unchecked(data, &sample);

    let pivot_domain = data.mask(pivot).clone();
    let mut u = MissingPoint::null(data.dim());
    for i in pivot_domain.iter() {
        if let Some(v) = shared.get(i) {
            u.set(i, v);
            continue;
        }
        let mut value = None;
        for _ in 0..params.retry_limit.max(1) {
            sample.clear();
            sample.extend((0..size).map(|_| draw(view, rng)));
            if anchored {
                sample.retain(|&x| data.mask(x).contains(i));
                if !sample.is_empty() {
                    nearest_guess(data, &mut sample, anchor, rng);
                }
            }
            value = coordinate_mean(data, &sample, i);
            if value.is_some() {
                break;
            }
        }
        let value = match value {
            Some(v) => v,
            None => {
                let defined: Vec<usize> = view.iter().copied().filter(|&x| data.mask(x).contains(i)).collect();
                sample.clear();
                sample.extend((0..size).map(|_| draw(&defined, rng)));
                coordinate_mean(data, &sample, i).expect("sample drawn from defined points")
            }
        };
        u.set(i, value);
    }
    debug_assert_eq!(u.domain(), &pivot_domain);
    Ok((u, pivot))
}

fn coordinate_mean(data: &Dataset, sample: &[usize], coord: usize) -> Option<f64> {
    let (mut sum, mut count) = (0.0, 0usize);
    for &x in sample {
        if let Some(v) = data.point(x).get(coord) {
            sum += v;
            count += 1;
        }
    }
    (count > 0).then(|| sum / count as f64)
}

/// Complete-point estimator used when no coordinate is ever missing: the mean
/// of a uniform sample of size `m`, or with `params.anchored` set, half the
/// time the mean of a random number of the draws nearest a uniform pivot.
pub fn complete_center_sample(
    data: &Dataset,
    view: &[usize],
    params: &SamplingParams,
    rng: &mut impl Rng,
) -> Result<MissingPoint> {
    if view.is_empty() {
        return Err(Error::usage("cannot sample from an empty set"));
    }
    let mut sample: Vec<usize> = (0..params.m.max(1)).map(|_| draw(view, rng)).collect();
    if params.anchored && rng.random::<bool>() {
        let pivot = draw(view, rng);
        sample.push(pivot);
        nearest_guess(data, &mut sample, data.point(pivot), rng);
    }
    Ok(centroid_unchecked(data, &sample))
}
