use serde::{Deserialize, Serialize};

use crate::calculus::{nearest_center, sq_dist_full};
use crate::error::{Error, Result};
use crate::mask::IndexSet;
use crate::point::{Dataset, MissingPoint};
use crate::rng::StreamKey;
use crate::sampling::{anchored_sample_value, complete_center_sample, initial_center_sample, SamplingParams};

use super::partition::{domain_code, full_set, passes_guard, Tally, MAX_CLUSTERS};

pub const DEFAULT_MAX_CALLS: u64 = 1_000_000_000;

/// The partial centers `u_1..u_k`. The domain `I_t` of each center is its
/// defined-coordinate mask.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterTuple {
    centers: Vec<MissingPoint>,
}

impl CenterTuple {
    /// `k` null centers.
    pub fn null(k: usize, dim: usize) -> Self {
        CenterTuple {
            centers: vec![MissingPoint::null(dim); k],
        }
    }

    pub fn from_points(centers: Vec<MissingPoint>) -> Self {
        CenterTuple { centers }
    }

    pub fn k(&self) -> usize {
        self.centers.len()
    }

    pub fn as_slice(&self) -> &[MissingPoint] {
        &self.centers
    }

    pub fn into_points(self) -> Vec<MissingPoint> {
        self.centers
    }

    pub fn domain(&self, t: usize) -> &IndexSet {
        self.centers[t].domain()
    }

    pub fn domains(&self) -> impl Iterator<Item = &IndexSet> {
        self.centers.iter().map(MissingPoint::domain)
    }

    /// `∩_t I_t`.
    pub fn common_domain(&self) -> IndexSet {
        let mut it = self.domains();
        let first = it.next().cloned().unwrap_or_else(|| IndexSet::empty(0));
        it.fold(first, |acc, m| acc.intersection(m))
    }

    fn with_center(&self, t: usize, u: MissingPoint) -> Self {
        let mut next = self.clone();
        next.centers[t] = u;
        next
    }

    fn with_coordinate(&self, t: usize, coord: usize, value: f64) -> Self {
        let mut next = self.clone();
        next.centers[t].set(coord, value);
        next
    }
}

/// Remaining sampling potential `Σ_t min{d - |I_t|, Δ + 1}`.
pub fn potential(centers: &CenterTuple, dim: usize, delta: usize) -> usize {
    centers.domains().map(|m| (dim - m.len()).min(delta + 1)).sum()
}

/// Upper bound on recursion calls for a root potential of `k (Δ + 1)`:
/// `(2δ(2^k-1))^(2δ+1) (1 + 1/(2^(k+1)-3))^(δ²)`.
pub fn call_bound(k: usize, delta: usize) -> f64 {
    let d0 = (k * (delta + 1)) as f64;
    let pk = 2f64.powi(k as i32);
    (2.0 * d0 * (pk - 1.0)).powf(2.0 * d0 + 1.0) * (1.0 + 1.0 / (2.0 * pk - 3.0)).powf(d0 * d0)
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub k: usize,
    /// Missing-coordinate bound used for the domain-size invariant and the
    /// sampling potential.
    pub delta: usize,
    pub sampling: SamplingParams,
    pub max_calls: u64,
}

/// Counters and invariant checks gathered over one search.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub calls: u64,
    pub sampling_branches: u64,
    pub pruning_branches: u64,
    /// Most sampling branches taken along one root-to-leaf path.
    pub max_path_sampling: usize,
    /// Most pruning branches taken along one root-to-leaf path.
    pub max_path_pruning: usize,
    /// Nodes where some `0 < |I_t| < d - Δ`.
    pub domain_violations: u64,
    /// Sampling branches that did not lower the potential as required.
    pub potential_violations: u64,
    /// Pruning branches removing fewer than `ceil(|R| / (2 (2^k - 1)))` points.
    pub pruning_shortfalls: u64,
    /// Smallest `removed / |R|` over pruning branches.
    pub min_pruning_fraction: Option<f64>,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.calls += other.calls;
        self.sampling_branches += other.sampling_branches;
        self.pruning_branches += other.pruning_branches;
        self.max_path_sampling = self.max_path_sampling.max(other.max_path_sampling);
        self.max_path_pruning = self.max_path_pruning.max(other.max_path_pruning);
        self.domain_violations += other.domain_violations;
        self.potential_violations += other.potential_violations;
        self.pruning_shortfalls += other.pruning_shortfalls;
        self.min_pruning_fraction = match (self.min_pruning_fraction, other.min_pruning_fraction) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }

    pub fn violations(&self) -> u64 {
        self.domain_violations + self.potential_violations + self.pruning_shortfalls
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub centers: CenterTuple,
    pub stats: SearchStats,
    /// Cost on the root's remaining points of every candidate the root
    /// considered, in branch order. A candidate's cost charges each point to
    /// the center it was assigned to along the candidate's path.
    pub root_candidate_costs: Vec<f64>,
    /// Cost of the returned candidate on the whole view, settled points
    /// included.
    pub root_cost: f64,
}

#[derive(Clone, Copy, Default)]
struct PathDepth {
    sampling: usize,
    pruning: usize,
}

struct Search<'a> {
    data: &'a Dataset,
    config: &'a SearchConfig,
    stats: SearchStats,
    root_costs: Vec<f64>,
}

/// Runs the branch-and-prune search from `centers` over the unassigned points
/// `view` (ascending dataset indices).
///
/// Randomness is drawn from streams derived from `key` and each branch's
/// position in the tree, so results depend only on the key. Exceeding
/// `config.max_calls` aborts with [`Error::Resource`].
pub fn k_means_search(
    data: &Dataset,
    centers: &CenterTuple,
    view: &[usize],
    config: &SearchConfig,
    key: StreamKey,
) -> Result<SearchOutcome> {
    if centers.k() != config.k || config.k == 0 || config.k > MAX_CLUSTERS {
        return Err(Error::usage(format!(
            "k must be in 1..={MAX_CLUSTERS} and match the center count"
        )));
    }
    if centers.as_slice().iter().any(|c| c.dim() != data.dim()) {
        return Err(Error::usage("center dimension does not match the dataset"));
    }
    let mut search = Search {
        data,
        config,
        stats: SearchStats::default(),
        root_costs: Vec::new(),
    };
    let (centers, root_cost) = search.node(centers, view, key, PathDepth::default(), true)?;
    Ok(SearchOutcome {
        centers,
        stats: search.stats,
        root_candidate_costs: search.root_costs,
        root_cost,
    })
}

impl Search<'_> {
    fn node(
        &mut self,
        centers: &CenterTuple,
        view: &[usize],
        key: StreamKey,
        depth: PathDepth,
        root: bool,
    ) -> Result<(CenterTuple, f64)> {
        self.stats.calls += 1;
        if self.stats.calls > self.config.max_calls {
            return Err(Error::Resource(format!(
                "search exceeded {} recursion calls",
                self.config.max_calls
            )));
        }
        self.stats.max_path_sampling = self.stats.max_path_sampling.max(depth.sampling);
        self.stats.max_path_pruning = self.stats.max_path_pruning.max(depth.pruning);
        let data = self.data;
        let dim = data.dim();
        let delta = self.config.delta;
        let k = self.config.k;
        if centers.domains().any(|m| !m.is_empty() && m.len() + delta < dim) {
            self.stats.domain_violations += 1;
        }

        // Points defined only inside every center domain are settled here at
        // their nearest center; later steps never change those distances.
        let common = centers.common_domain();
        let mut settled = 0.0;
        let mut remaining = Vec::with_capacity(view.len());
        for &x in view {
            if data.mask(x).is_subset(&common) {
                settled += nearest_center(data.point(x), centers.as_slice()).1;
            } else {
                remaining.push(x);
            }
        }
        if remaining.is_empty() {
            return Ok((centers.clone(), settled));
        }

        let mut best: Option<(CenterTuple, f64)> = None;
        let mut consider = |this: &mut Self, candidate: CenterTuple, cost: f64| {
            if root {
                this.root_costs.push(cost);
            }
            if best.as_ref().is_none_or(|(_, b)| cost < *b) {
                best = Some((candidate, cost));
            }
        };

        let before = potential(centers, dim, delta);
        let sampled = PathDepth {
            sampling: depth.sampling + 1,
            ..depth
        };
        let mut branch = 0u64;
        for t in 0..k {
            let domain = centers.domain(t);
            if domain.is_full() {
                continue;
            }
            let coords: Vec<Option<usize>> = if domain.is_empty() {
                vec![None]
            } else {
                domain.complement().iter().map(Some).collect()
            };
            for coord in coords {
                let branch_key = key.child(branch);
                branch += 1;
                let mut rng = branch_key.child(0).rng();
                let next = match coord {
                    None if delta == 0 => centers.with_center(
                        t,
                        complete_center_sample(data, &remaining, &self.config.sampling, &mut rng)?,
                    ),
                    None => centers.with_center(
                        t,
                        initial_center_sample(data, &remaining, &self.config.sampling, &mut rng)?,
                    ),
                    Some(j) => {
                        let anchor = centers.as_slice()[t].view();
                        let value =
                            anchored_sample_value(data, &remaining, j, anchor, &self.config.sampling, &mut rng)?;
                        centers.with_coordinate(t, j, value)
                    }
                };
                let after = potential(&next, dim, delta);
                let ok = match coord {
                    None => after < before,
                    Some(_) => after + 1 == before,
                };
                if !ok {
                    self.stats.potential_violations += 1;
                }
                self.stats.sampling_branches += 1;
                let (result, cost) = self.node(&next, &remaining, branch_key.child(1), sampled, false)?;
                consider(self, result, cost);
            }
        }

        if let Some((rest, pruned_cost)) = prune(data, &remaining, centers, k) {
            let removed = remaining.len() - rest.len();
            let required = remaining.len().div_ceil(2 * ((1usize << k) - 1));
            if removed < required.max(1) {
                self.stats.pruning_shortfalls += 1;
            }
            let fraction = removed as f64 / remaining.len() as f64;
            self.stats.min_pruning_fraction =
                Some(self.stats.min_pruning_fraction.map_or(fraction, |f| f.min(fraction)));
            self.stats.pruning_branches += 1;
            let pruned = PathDepth {
                pruning: depth.pruning + 1,
                ..depth
            };
            let (result, cost) = self.node(centers, &rest, key.child(branch), pruned, false)?;
            consider(self, result, pruned_cost + cost);
        }

        // Some center is not full (else `remaining` would be empty), so at
        // least one branch ran.
        let (centers, cost) = best.expect("search node produced no candidate");
        Ok((centers, settled + cost))
    }
}

/// The pruning step: if the largest nonempty proper `S_T` passes the size
/// guard, drops its `ceil(|S_T|/2)` points closest to `U_T` from `remaining`
/// and returns the rest with the dropped points' distances to `U_T`.
/// `remaining` must be in ascending index order and free of points defined
/// only inside every center domain.
fn prune(data: &Dataset, remaining: &[usize], centers: &CenterTuple, k: usize) -> Option<(Vec<usize>, f64)> {
    let codes: Vec<u32> = remaining
        .iter()
        .map(|&x| domain_code(data.mask(x), centers.as_slice()))
        .collect();
    debug_assert!(codes.iter().all(|&c| c != full_set(k)));
    let mut tally = Tally::new(k);
    for &c in &codes {
        tally.add(c);
    }
    let (target, size) = tally.argmax_nonempty_proper(k)?;
    if !passes_guard(size, remaining.len(), k) {
        return None;
    }

    let members: Vec<usize> = (0..codes.len()).filter(|&pos| codes[pos] == target).collect();
    let mut keyed: Vec<(f64, usize)> = members
        .iter()
        .map(|&pos| {
            let p = data.point(remaining[pos]);
            let dist = (0..k)
                .filter(|t| target >> t & 1 == 1)
                .map(|t| sq_dist_full(p, centers.as_slice()[t].view()))
                .fold(f64::INFINITY, f64::min);
            (dist, pos)
        })
        .collect();
    let take = keyed.len().div_ceil(2);
    let order = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if take < keyed.len() {
        keyed.select_nth_unstable_by(take - 1, order);
    }
    let mut drop = vec![false; remaining.len()];
    let mut cost = 0.0;
    for &(dist, pos) in &keyed[..take] {
        drop[pos] = true;
        cost += dist;
    }
    let rest = remaining
        .iter()
        .zip(&drop)
        .filter(|(_, &d)| !d)
        .map(|(&x, _)| x)
        .collect();
    Some((rest, cost))
}
