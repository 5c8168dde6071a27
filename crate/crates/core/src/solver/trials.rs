use serde::{Deserialize, Serialize};

use crate::calculus::{complete_centers, voronoi_assign, Clustering};
use crate::error::{Error, Result};
use crate::par::{map_indices, Execution};
use crate::point::Dataset;
use crate::rng::StreamKey;
use crate::sampling::{SamplingParams, DEFAULT_RETRY_LIMIT};

use super::search::{k_means_search, CenterTuple, SearchConfig, SearchStats, DEFAULT_MAX_CALLS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveParams {
    pub k: usize,
    pub epsilon: f64,
    /// Independent searches; the cheapest completed clustering wins.
    pub repeats: usize,
    pub seed: u64,
    /// Per-trial recursion budget.
    pub max_calls: u64,
    /// Raises the missing-coordinate bound above what the data shows.
    pub delta_override: Option<usize>,
    pub retry_limit: usize,
    #[serde(skip)]
    pub execution: Execution,
}

impl SolveParams {
    pub fn new(k: usize, epsilon: f64) -> Self {
        SolveParams {
            k,
            epsilon,
            repeats: 1,
            seed: 0,
            max_calls: DEFAULT_MAX_CALLS,
            delta_override: None,
            retry_limit: DEFAULT_RETRY_LIMIT,
            execution: Execution::default(),
        }
    }

    pub fn with_repeats(mut self, repeats: usize) -> Self {
        self.repeats = repeats;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_calls(mut self, max_calls: u64) -> Self {
        self.max_calls = max_calls;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn with_delta(mut self, delta: usize) -> Self {
        self.delta_override = Some(delta);
        self
    }

    /// Slack handed to each sampling estimate: `epsilon / 3`.
    pub fn alpha(&self) -> f64 {
        self.epsilon / 3.0
    }

    /// The missing-coordinate bound the search runs with. Null points are
    /// set aside before the search and do not count.
    pub fn effective_delta(&self, data: &Dataset) -> Result<usize> {
        let observed = data.delta_non_null();
        match self.delta_override {
            Some(d) if d < observed => Err(Error::usage(format!(
                "delta override {d} is below the observed {observed}"
            ))),
            Some(d) if d > data.dim() => Err(Error::usage(format!(
                "delta override {d} exceeds the dimension {}",
                data.dim()
            ))),
            Some(d) => Ok(d),
            None => Ok(observed),
        }
    }

    pub fn search_config(&self, data: &Dataset) -> Result<SearchConfig> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::usage(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        let delta = self.effective_delta(data)?;
        let mut sampling = SamplingParams::derive(self.alpha(), delta)?;
        sampling.retry_limit = self.retry_limit.max(1);
        Ok(SearchConfig {
            k: self.k,
            delta,
            sampling,
            max_calls: self.max_calls,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    /// Best clustering over all trials, with complete centers.
    pub clustering: Clustering,
    pub trial_costs: Vec<f64>,
    pub best_trial: usize,
    /// Counters summed over trials; path maxima are maxima over trials.
    pub stats: SearchStats,
    pub delta: usize,
    pub sampling: SamplingParams,
}

/// Runs `params.repeats` independent searches from null centers and returns
/// the cheapest completed clustering, ties going to the earliest trial.
pub fn run_trials(data: &Dataset, params: &SolveParams) -> Result<SolveReport> {
    if data.is_empty() {
        return Err(Error::usage("dataset is empty"));
    }
    if params.k == 0 || params.k > data.len() {
        return Err(Error::usage(format!(
            "k = {} must be between 1 and the number of points ({})",
            params.k,
            data.len()
        )));
    }
    if params.repeats == 0 {
        return Err(Error::usage("repeats must be at least 1"));
    }
    let config = params.search_config(data)?;
    let root = StreamKey::root(params.seed);
    let all = data.all_indices();

    let trials = map_indices(params.execution, params.repeats, |trial| {
        let outcome = k_means_search(
            data,
            &CenterTuple::null(params.k, data.dim()),
            &all,
            &config,
            root.child(trial as u64),
        )?;
        let clustering = finalize(data, &all, outcome.centers)?;
        Ok::<_, Error>((clustering, outcome.stats))
    });

    let mut stats = SearchStats::default();
    let mut trial_costs = Vec::with_capacity(trials.len());
    let mut best: Option<(usize, Clustering)> = None;
    for (i, trial) in trials.into_iter().enumerate() {
        let (clustering, trial_stats) = trial?;
        stats.merge(&trial_stats);
        trial_costs.push(clustering.cost);
        if best.as_ref().is_none_or(|(_, b)| clustering.cost < b.cost) {
            best = Some((i, clustering));
        }
    }
    let (best_trial, clustering) = best.expect("at least one trial");
    Ok(SolveReport {
        clustering,
        trial_costs,
        best_trial,
        stats,
        delta: config.delta,
        sampling: config.sampling,
    })
}

/// Completes the search's partial centers against their Voronoi cells and
/// reassigns every point to the completed centers.
pub(crate) fn finalize(data: &Dataset, view: &[usize], centers: CenterTuple) -> Result<Clustering> {
    let partial = centers.into_points();
    let first = voronoi_assign(data, view, &partial)?;
    let completed = complete_centers(&partial, data, view, &first.assignment);
    voronoi_assign(data, view, &completed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::MissingPoint;

    fn two_blobs() -> Dataset {
        let mut pts = vec![MissingPoint::complete(vec![0.0, 0.0]); 5];
        pts.extend(vec![MissingPoint::complete(vec![100.0, 100.0]); 5]);
        Dataset::new(pts).unwrap()
    }

    #[test]
    fn rejects_bad_k() {
        let data = two_blobs();
        assert!(matches!(
            run_trials(&data, &SolveParams::new(11, 0.5)),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            run_trials(&data, &SolveParams::new(0, 0.5)),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            run_trials(&data, &SolveParams::new(2, 0.0)),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn delta_override_only_upward() {
        let data = Dataset::new(vec![MissingPoint::from_options(&[Some(1.0), None, None])]).unwrap();
        assert!(SolveParams::new(1, 1.0).with_delta(1).effective_delta(&data).is_err());
        assert_eq!(
            SolveParams::new(1, 1.0).with_delta(3).effective_delta(&data).unwrap(),
            3
        );
        assert_eq!(SolveParams::new(1, 1.0).effective_delta(&data).unwrap(), 2);
    }

    #[test]
    fn alpha_is_a_third_of_epsilon() {
        assert_eq!(SolveParams::new(2, 0.75).alpha(), 0.25);
    }

    #[test]
    fn cost_matches_assignment() {
        let data = two_blobs();
        let report = run_trials(&data, &SolveParams::new(2, 0.5).with_repeats(4).with_seed(3)).unwrap();
        let c = &report.clustering;
        assert!(c.centers.iter().all(MissingPoint::is_complete));
        let recomputed = c.recompute_cost(&data, &data.all_indices());
        assert!((recomputed - c.cost).abs() <= 1e-9 * c.cost.max(1.0));
        assert_eq!(report.trial_costs.len(), 4);
        assert_eq!(report.trial_costs[report.best_trial], c.cost);
    }

    #[test]
    fn same_seed_same_result() {
        let data = two_blobs();
        let p = SolveParams::new(2, 0.5).with_repeats(3).with_seed(11);
        let a = run_trials(&data, &p).unwrap();
        let b = run_trials(&data, &p.clone().with_execution(Execution::Sequential)).unwrap();
        assert_eq!(a.clustering, b.clustering);
        assert_eq!(a.trial_costs, b.trial_costs);
    }
}
