//! The approximation search and its trial driver.
//!
//! [`k_means_search`] is the oracle-free recursion: at every node it branches
//! on each way to extend one partial center by sampling, and on committing the
//! closest half of the largest domain class `S_T`, and keeps the branch whose
//! assignment of the points still unassigned is cheapest. [`run_trials`] repeats
//! the search from null centers and keeps the best completed clustering.
//! [`idealized_k_means`] replaces the branching with decisions read off a known
//! ground-truth partition and serves as a fast structural check.

mod idealized;
mod partition;
mod search;
mod trials;

pub use idealized::{idealized_k_means, IdealizedReport, PhaseKind};
pub use partition::{partition_by_domains, select_pruning_set, ClusterSet, MAX_CLUSTERS};
pub use search::{
    call_bound, k_means_search, potential, CenterTuple, SearchConfig, SearchOutcome, SearchStats, DEFAULT_MAX_CALLS,
};
pub use trials::{run_trials, SolveParams, SolveReport};
