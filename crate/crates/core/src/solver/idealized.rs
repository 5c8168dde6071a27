//! Single-path variant driven by a known partition.
//!
//! Where the search branches, this variant reads the decision off a ground
//! truth partition through counting queries, and it draws its sampling
//! estimates from the ground-truth cluster being estimated, i.e. it always
//! takes the draw the estimator's guarantee is conditioned on. It runs in one
//! pass and is meant for checking the phase structure at scale.

use serde::{Deserialize, Serialize};

use crate::calculus::{complete_centers, nearest_center, sq_dist_full, Clustering};
use crate::error::{Error, Result};
use crate::point::{Dataset, MissingPoint};
use crate::rng::StreamKey;
use crate::sampling::{complete_center_sample, initial_center_sample, superset_sample_value};

use super::partition::{domain_code, full_set, ClusterSet, Tally, MAX_CLUSTERS};
use super::search::CenterTuple;
use super::trials::SolveParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PhaseKind {
    /// A whole center from a pivot's domain (`coord == None`) or one
    /// coordinate of a partial center.
    Sampling {
        cluster: usize,
        coord: Option<usize>,
    },
    Pruning {
        clusters: ClusterSet,
        assigned: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub kind: PhaseKind,
    pub remaining: usize,
    /// Some cluster has at least `c |R|` remaining members defined outside
    /// its center's domain.
    pub sampling_condition: bool,
    /// Some nonempty proper `T` has at least `c |R|` points of `S_T` that
    /// belong to a cluster of `T`.
    pub pruning_condition: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealizedReport {
    /// Completed centers with the assignment the run made.
    pub clustering: Clustering,
    pub phases: Vec<PhaseRecord>,
    pub sampling_phases: usize,
    pub pruning_phases: usize,
    /// Phases at which neither condition held.
    pub dichotomy_violations: usize,
    /// Phases at which some `0 < |I_t| < d - Δ`.
    pub domain_violations: usize,
    /// The threshold fraction `c`.
    pub threshold: f64,
}

/// Runs the counting-oracle algorithm with `truth[x]` as the cluster of
/// point `x`.
pub fn idealized_k_means(
    data: &Dataset,
    truth: &[usize],
    params: &SolveParams,
    key: StreamKey,
) -> Result<IdealizedReport> {
    let k = params.k;
    let dim = data.dim();
    if k == 0 || k > MAX_CLUSTERS {
        return Err(Error::usage(format!("k must be in 1..={MAX_CLUSTERS}")));
    }
    if truth.len() != data.len() || truth.iter().any(|&t| t >= k) {
        return Err(Error::usage("ground truth must give each point a cluster below k"));
    }
    let config = params.search_config(data)?;
    let delta = config.delta;
    let threshold = params.alpha() / (8.0 * 2f64.powi(k as i32) * (k * k) as f64 * ((delta + 1) as f64).powi(2));

    let mut assignment: Vec<Option<usize>> = vec![None; data.len()];
    let mut remaining: Vec<usize> = Vec::with_capacity(data.len());
    for (x, slot) in assignment.iter_mut().enumerate() {
        if data.mask(x).is_empty() {
            *slot = Some(0);
        } else {
            remaining.push(x);
        }
    }

    let mut centers = CenterTuple::null(k, dim);
    let mut phases = Vec::new();
    let (mut dichotomy_violations, mut domain_violations) = (0, 0);
    let mut phase_index = 0u64;

    while !remaining.is_empty() {
        if centers.domains().any(|m| !m.is_empty() && m.len() + delta < dim) {
            domain_violations += 1;
        }
        let r = remaining.len() as f64;

        // Counting queries against the ground truth.
        let mut outside = vec![0usize; k];
        let mut codes = Vec::with_capacity(remaining.len());
        let mut tally = Tally::new(k);
        let mut own = std::collections::HashMap::<ClusterSet, usize>::new();
        for &x in &remaining {
            let t = truth[x];
            if !data.mask(x).is_subset(centers.domain(t)) {
                outside[t] += 1;
            }
            let code = domain_code(data.mask(x), centers.as_slice());
            codes.push(code);
            tally.add(code);
            if code >> t & 1 == 1 {
                *own.entry(code).or_default() += 1;
            }
        }
        let (best_t, best_outside) =
            outside
                .iter()
                .copied()
                .enumerate()
                .fold((0, 0), |acc, (t, n)| if n > acc.1 { (t, n) } else { acc });
        let sampling_condition = best_outside > 0 && best_outside as f64 >= threshold * r;
        let full = full_set(k);
        let pruning_condition = own
            .iter()
            .any(|(&code, &n)| code != 0 && code != full && n as f64 >= threshold * r);
        if !sampling_condition && !pruning_condition {
            dichotomy_violations += 1;
        }

        let mut rng = key.child(phase_index).rng();
        phase_index += 1;
        let before = remaining.len();

        let kind = if sampling_condition || tally.argmax_nonempty_proper(k).is_none() {
            if best_outside == 0 {
                return Err(Error::usage(
                    "no phase can make progress; the partition is inconsistent",
                ));
            }
            let t = best_t;
            let members: Vec<usize> = remaining.iter().copied().filter(|&x| truth[x] == t).collect();
            let coord = if centers.domain(t).is_empty() {
                let u = if delta == 0 {
                    complete_center_sample(data, &members, &config.sampling, &mut rng)?
                } else {
                    initial_center_sample(data, &members, &config.sampling, &mut rng)?
                };
                centers = replace(&centers, t, u);
                None
            } else {
                let j = best_coordinate(data, &members, centers.as_slice()[t].domain().complement().iter());
                let value = superset_sample_value(data, &members, j, &config.sampling, &mut rng)?;
                let mut u = centers.as_slice()[t].clone();
                u.set(j, value);
                centers = replace(&centers, t, u);
                Some(j)
            };
            let common = centers.common_domain();
            remaining.retain(|&x| {
                if data.mask(x).is_subset(&common) {
                    assignment[x] = Some(nearest_center(data.point(x), centers.as_slice()).0);
                    false
                } else {
                    true
                }
            });
            PhaseKind::Sampling { cluster: t, coord }
        } else {
            let (target, _) = tally.argmax_nonempty_proper(k).expect("checked above");
            let mut keyed: Vec<(f64, usize, usize)> = remaining
                .iter()
                .zip(&codes)
                .enumerate()
                .filter(|(_, (_, &c))| c == target)
                .map(|(pos, (&x, _))| {
                    let (t, dist) = nearest_in(data, x, centers.as_slice(), target);
                    (dist, pos, t)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let take = keyed.len().div_ceil(2);
            let mut drop = vec![false; remaining.len()];
            for &(_, pos, t) in &keyed[..take] {
                drop[pos] = true;
                assignment[remaining[pos]] = Some(t);
            }
            let mut pos = 0;
            remaining.retain(|_| {
                pos += 1;
                !drop[pos - 1]
            });
            PhaseKind::Pruning {
                clusters: target,
                assigned: take,
            }
        };
        phases.push(PhaseRecord {
            kind,
            remaining: before,
            sampling_condition,
            pruning_condition,
        });
    }

    let assignment: Vec<usize> = assignment
        .into_iter()
        .map(|a| a.expect("loop ends with every point assigned"))
        .collect();
    let all = data.all_indices();
    let completed = complete_centers(centers.as_slice(), data, &all, &assignment);
    let mut clustering = Clustering {
        centers: completed,
        assignment,
        cost: 0.0,
    };
    clustering.cost = clustering.recompute_cost(data, &all);
    let sampling_phases = phases
        .iter()
        .filter(|p| matches!(p.kind, PhaseKind::Sampling { .. }))
        .count();
    Ok(IdealizedReport {
        clustering,
        pruning_phases: phases.len() - sampling_phases,
        sampling_phases,
        phases,
        dichotomy_violations,
        domain_violations,
        threshold,
    })
}

fn replace(centers: &CenterTuple, t: usize, u: MissingPoint) -> CenterTuple {
    let mut pts = centers.clone().into_points();
    pts[t] = u;
    CenterTuple::from_points(pts)
}

/// Coordinate among `candidates` defined by the most members, lowest index on
/// ties.
fn best_coordinate(data: &Dataset, members: &[usize], candidates: impl Iterator<Item = usize>) -> usize {
    let mut best = (usize::MAX, 0usize);
    for j in candidates {
        let n = members.iter().filter(|&&x| data.mask(x).contains(j)).count();
        if best.0 == usize::MAX || n > best.1 {
            best = (j, n);
        }
    }
    best.0
}

/// Nearest center among the clusters in `set`.
fn nearest_in(data: &Dataset, x: usize, centers: &[MissingPoint], set: ClusterSet) -> (usize, f64) {
    let p = data.point(x);
    let mut best = (0, f64::INFINITY);
    for (t, c) in centers.iter().enumerate() {
        if set >> t & 1 == 1 {
            let dist = sq_dist_full(p, c.view());
            if dist < best.1 {
                best = (t, dist);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singletons_cost_zero() {
        let pts: Vec<_> = (0..5)
            .map(|i| MissingPoint::complete(vec![i as f64, (i * i) as f64]))
            .collect();
        let data = Dataset::new(pts).unwrap();
        let truth: Vec<usize> = (0..5).collect();
        let report = idealized_k_means(&data, &truth, &SolveParams::new(5, 1.0), StreamKey::root(1)).unwrap();
        assert_eq!(report.clustering.cost, 0.0);
        assert_eq!(report.dichotomy_violations, 0);
        assert!(report.sampling_phases <= 5);
    }

    #[test]
    fn invalid_truth_rejected() {
        let data = Dataset::new(vec![MissingPoint::complete(vec![0.0]); 3]).unwrap();
        let p = SolveParams::new(2, 1.0);
        assert!(matches!(
            idealized_k_means(&data, &[0, 1], &p, StreamKey::root(0)),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            idealized_k_means(&data, &[0, 1, 2], &p, StreamKey::root(0)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn null_points_go_to_first_cluster() {
        let data = Dataset::new(vec![
            MissingPoint::null(2),
            MissingPoint::complete(vec![1.0, 1.0]),
            MissingPoint::complete(vec![5.0, 5.0]),
        ])
        .unwrap();
        let report = idealized_k_means(&data, &[1, 0, 1], &SolveParams::new(2, 1.0), StreamKey::root(2)).unwrap();
        assert_eq!(report.clustering.assignment[0], 0);
        assert_eq!(report.clustering.cost, 0.0);
    }
}
