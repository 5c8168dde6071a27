//! Partition of the remaining points by which center domains contain them.
//!
//! For a subset `T` of cluster indices, `S_T` holds the points `x` with
//! `dom(x) ⊆ I_t` exactly for the clusters `t ∈ T`. Subsets are encoded as
//! bitmasks with bit `t` standing for cluster `t`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::mask::IndexSet;
use crate::point::{Dataset, MissingPoint};

/// Bitmask of cluster indices.
pub type ClusterSet = u32;

/// Largest `k` the search supports; subsets of `[k]` must fit a `ClusterSet`.
pub const MAX_CLUSTERS: usize = 24;

#[inline]
pub(crate) fn domain_code(mask: &IndexSet, centers: &[MissingPoint]) -> ClusterSet {
    let mut code = 0;
    for (t, c) in centers.iter().enumerate() {
        if mask.is_subset(c.domain()) {
            code |= 1 << t;
        }
    }
    code
}

#[inline]
pub(crate) fn full_set(k: usize) -> ClusterSet {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Sizes of the nonempty `S_T`, by code.
pub(crate) enum Tally {
    Dense(Vec<usize>),
    Sparse(HashMap<ClusterSet, usize>),
}

impl Tally {
    pub(crate) fn new(k: usize) -> Self {
        if k <= 12 {
            Tally::Dense(vec![0; 1 << k])
        } else {
            Tally::Sparse(HashMap::new())
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, code: ClusterSet) {
        match self {
            Tally::Dense(v) => v[code as usize] += 1,
            Tally::Sparse(m) => *m.entry(code).or_default() += 1,
        }
    }

    /// Nonempty proper `T` of largest size, smallest code on ties.
    pub(crate) fn argmax_nonempty_proper(&self, k: usize) -> Option<(ClusterSet, usize)> {
        let full = full_set(k);
        let mut best: Option<(ClusterSet, usize)> = None;
        let mut consider = |code: ClusterSet, size: usize| {
            if code == 0 || code == full || size == 0 {
                return;
            }
            match best {
                Some((bc, bs)) if bs > size || (bs == size && bc < code) => {}
                _ => best = Some((code, size)),
            }
        };
        match self {
            Tally::Dense(v) => v.iter().enumerate().for_each(|(c, &s)| consider(c as ClusterSet, s)),
            Tally::Sparse(m) => m.iter().for_each(|(&c, &s)| consider(c, s)),
        }
        best
    }
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_CLUSTERS {
        return Err(Error::usage(format!("k must be in 1..={MAX_CLUSTERS}, got {k}")));
    }
    Ok(())
}

/// Splits `view` into the sets `S_T`.
///
/// Every point lands in exactly one set, `T = ∅` included. Points whose
/// domain lies inside every center domain belong to no proper `T` and are a
/// precondition violation; callers remove them first.
pub fn partition_by_domains(
    data: &Dataset,
    view: &[usize],
    centers: &[MissingPoint],
) -> Result<BTreeMap<ClusterSet, Vec<usize>>> {
    check_k(centers.len())?;
    let full = full_set(centers.len());
    let mut parts: BTreeMap<ClusterSet, Vec<usize>> = BTreeMap::new();
    for &x in view {
        let code = domain_code(data.mask(x), centers);
        if code == full {
            return Err(Error::usage(format!(
                "point {x} is defined only inside every center domain"
            )));
        }
        parts.entry(code).or_default().push(x);
    }
    Ok(parts)
}

/// Threshold test `|S_T| >= |R| / (2^k - 1)` in exact integer arithmetic.
#[inline]
pub(crate) fn passes_guard(size: usize, remaining: usize, k: usize) -> bool {
    (size as u128) * ((1u128 << k) - 1) >= remaining as u128
}

/// The nonempty proper `T` maximizing `|S_T|`, when it holds at least a
/// `1 / (2^k - 1)` fraction of the view.
pub fn select_pruning_set(
    data: &Dataset,
    view: &[usize],
    centers: &[MissingPoint],
) -> Result<Option<(ClusterSet, Vec<usize>)>> {
    let k = centers.len();
    let mut parts = partition_by_domains(data, view, centers)?;
    let mut tally = Tally::new(k);
    for (&code, members) in &parts {
        for _ in members {
            tally.add(code);
        }
    }
    Ok(match tally.argmax_nonempty_proper(k) {
        Some((code, size)) if passes_guard(size, view.len(), k) => {
            Some((code, parts.remove(&code).unwrap_or_default()))
        }
        _ => None,
    })
}
