//! Ground truth for small instances and a heuristic baseline.
//!
//! [`exact_k_means`] enumerates every partition of the points into at most `k`
//! labelled groups (one representative per relabelling) and scores each by the
//! sum of its clusters' costs to their own centroids, which is the optimal
//! center choice for a fixed partition. [`lloyd_baseline`] alternates Voronoi
//! assignment and centroid updates.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{centroid_unchecked, complete_centers, cost, voronoi_assign, Clustering};
use crate::error::{Error, Result};
use crate::par::{map_indices, Execution};
use crate::point::{Dataset, MissingPoint};

pub const DEFAULT_PARTITION_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub opt_cost: f64,
    /// Cluster label per point, labels numbered by first occurrence.
    pub partition: Vec<usize>,
    /// Centroid of each cluster; `None` for labels left empty.
    #[serde(skip)]
    pub centers: Vec<Option<MissingPoint>>,
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    /// Largest allowed `k^n`.
    pub budget: u64,
    pub execution: Execution,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            budget: DEFAULT_PARTITION_BUDGET,
            execution: Execution::default(),
        }
    }
}

/// Optimal k-means cost by exhaustive enumeration, with default options.
pub fn exact_k_means(data: &Dataset, k: usize) -> Result<ExactResult> {
    exact_k_means_with(data, k, ExactOptions::default())
}

pub fn exact_k_means_with(data: &Dataset, k: usize, options: ExactOptions) -> Result<ExactResult> {
    let n = data.len();
    if k == 0 || k > n {
        return Err(Error::usage(format!("k = {k} must be between 1 and n = {n}")));
    }
    let work = (k as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if work > options.budget {
        return Err(Error::Resource(format!(
            "k^n = {k}^{n} exceeds the enumeration budget {}",
            options.budget
        )));
    }

    // Split the canonical labelings by a short prefix so blocks can run in
    // parallel; merging by (cost, block, order) keeps the result deterministic.
    let prefix_len = n.min(prefix_length(k));
    let mut prefixes = Vec::new();
    canonical_prefixes(prefix_len, k, &mut vec![0; prefix_len], 0, 0, &mut prefixes);
    let blocks = map_indices(options.execution, prefixes.len(), |b| {
        let mut walker = Walker::new(data, k);
        let prefix = &prefixes[b];
        let mut used = 0;
        for (x, &label) in prefix.iter().enumerate() {
            walker.push(x, label);
            used = used.max(label + 1);
        }
        walker.descend(prefix.len(), used);
        walker.best
    });
    let (_, labels) = blocks
        .into_iter()
        .flatten()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one labeling");

    let mut members = vec![Vec::new(); k];
    for (x, &t) in labels.iter().enumerate() {
        members[t].push(x);
    }
    let centers: Vec<Option<MissingPoint>> = members
        .iter()
        .map(|m| (!m.is_empty()).then(|| centroid_unchecked(data, m)))
        .collect();
    let opt_cost = members
        .iter()
        .zip(&centers)
        .filter_map(|(m, c)| c.as_ref().map(|c| cost(data, m, c.view()).expect("same dimension")))
        .sum();
    Ok(ExactResult {
        opt_cost,
        partition: labels,
        centers,
    })
}

fn prefix_length(k: usize) -> usize {
    // Enough prefixes to feed a thread pool without tiny blocks.
    match k {
        1 => 1,
        2 => 7,
        3 => 5,
        _ => 4,
    }
}

fn canonical_prefixes(len: usize, k: usize, cur: &mut Vec<usize>, pos: usize, used: usize, out: &mut Vec<Vec<usize>>) {
    if pos == len {
        out.push(cur.clone());
        return;
    }
    for label in 0..(used + 1).min(k) {
        cur[pos] = label;
        canonical_prefixes(len, k, cur, pos + 1, used.max(label + 1), out);
    }
}

/// Depth-first walk over canonical labelings with per-cluster running sums.
struct Walker<'a> {
    data: &'a Dataset,
    k: usize,
    labels: Vec<usize>,
    sums: Vec<f64>,
    squares: Vec<f64>,
    counts: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl<'a> Walker<'a> {
    fn new(data: &'a Dataset, k: usize) -> Self {
        let cells = k * data.dim();
        Walker {
            data,
            k,
            labels: vec![0; data.len()],
            sums: vec![0.0; cells],
            squares: vec![0.0; cells],
            counts: vec![0; cells],
            best: None,
        }
    }

    fn update(&mut self, x: usize, label: usize, sign: f64) {
        let d = self.data.dim();
        let p = self.data.point(x);
        for i in p.mask.iter() {
            let cell = label * d + i;
            let v = p.values[i];
            self.sums[cell] += sign * v;
            self.squares[cell] += sign * v * v;
            if sign > 0.0 {
                self.counts[cell] += 1;
            } else {
                self.counts[cell] -= 1;
            }
        }
    }

    fn push(&mut self, x: usize, label: usize) {
        self.labels[x] = label;
        self.update(x, label, 1.0);
    }

    fn pop(&mut self, x: usize, label: usize) {
        self.update(x, label, -1.0);
    }

    fn score(&self) -> f64 {
        self.sums
            .iter()
            .zip(&self.squares)
            .zip(&self.counts)
            .filter(|(_, &c)| c > 0)
            .map(|((&s, &q), &c)| (q - s * s / c as f64).max(0.0))
            .sum()
    }

    fn descend(&mut self, pos: usize, used: usize) {
        if pos == self.data.len() {
            let score = self.score();
            if self.best.as_ref().is_none_or(|(b, _)| score < *b) {
                self.best = Some((score, self.labels.clone()));
            }
            return;
        }
        for label in 0..(used + 1).min(self.k) {
            self.push(pos, label);
            self.descend(pos + 1, used.max(label + 1));
            self.pop(pos, label);
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LloydResult {
    pub clustering: Clustering,
    /// Cost after seeding, then after each completed round.
    pub cost_history: Vec<f64>,
    pub rounds: usize,
}

/// Lloyd iterations from `k` distinct random points, missing coordinates of
/// seeds filled with global coordinate means. Stops after `iterations` rounds
/// or at an assignment fixpoint.
pub fn lloyd_baseline(data: &Dataset, k: usize, iterations: usize, rng: &mut impl Rng) -> Result<LloydResult> {
    let n = data.len();
    if k == 0 || k > n {
        return Err(Error::usage(format!("k = {k} must be between 1 and n = {n}")));
    }
    let all = data.all_indices();
    let seeds: Vec<MissingPoint> = sample(rng, n, k)
        .into_iter()
        .map(|x| data.point(x).to_owned())
        .collect();
    let seeds = fill_global(data, &all, seeds);
    let mut clustering = voronoi_assign(data, &all, &seeds)?;
    let mut history = vec![clustering.cost];
    let mut rounds = 0;
    for _ in 0..iterations {
        let mut members = vec![Vec::new(); k];
        for (&x, &t) in all.iter().zip(&clustering.assignment) {
            members[t].push(x);
        }
        let centers: Vec<MissingPoint> = members
            .iter()
            .zip(&clustering.centers)
            .map(|(m, old)| {
                if m.is_empty() {
                    return old.clone();
                }
                let mut c = centroid_unchecked(data, m);
                for i in c.domain().complement().iter() {
                    c.set(i, old.get(i).unwrap_or(0.0));
                }
                c
            })
            .collect();
        let next = voronoi_assign(data, &all, &centers)?;
        rounds += 1;
        let fixpoint = next.assignment == clustering.assignment;
        history.push(next.cost);
        clustering = next;
        if fixpoint {
            break;
        }
    }
    Ok(LloydResult {
        clustering,
        cost_history: history,
        rounds,
    })
}

fn fill_global(data: &Dataset, view: &[usize], seeds: Vec<MissingPoint>) -> Vec<MissingPoint> {
    let assignment = vec![0; view.len()];
    seeds
        .into_iter()
        .map(|s| {
            // A single-center completion against the whole view yields the
            // global coordinate means.
            complete_centers(std::slice::from_ref(&s), data, view, &assignment).remove(0)
        })
        .collect()
}
