//! Wall-clock scaling sweeps over the number of points.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::solver::{run_trials, SolveParams};

use super::generate::{gen_mixture, MixtureSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    /// Mean solve time over the runs, in seconds.
    pub seconds: f64,
}

/// For each `n` (strictly increasing), draws `runs` mixtures from `base`
/// with seeds `base.seed + run` and averages the time `run_trials` takes on
/// them. Generation is not timed, and one untimed solve at the first size
/// runs before any timing.
pub fn scaling_sweep(base: &MixtureSpec, ns: &[usize], params: &SolveParams, runs: usize) -> Result<Vec<ScalingRow>> {
    if runs == 0 {
        return Err(Error::usage("runs must be at least 1"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::usage("sizes must be strictly increasing"));
    }
    if let Some(&n) = ns.first() {
        let warmup = gen_mixture(&MixtureSpec { n, ..base.clone() })?;
        run_trials(&warmup.data, params)?;
    }
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut total = 0.0;
        for run in 0..runs {
            let mixture = gen_mixture(&MixtureSpec {
                n,
                seed: base.seed.wrapping_add(run as u64),
                ..base.clone()
            })?;
            let p = params.clone().with_seed(params.seed.wrapping_add(run as u64));
            let start = Instant::now();
            run_trials(&mixture.data, &p)?;
            total += start.elapsed().as_secs_f64();
        }
        rows.push(ScalingRow {
            n,
            seconds: total / runs as f64,
        });
    }
    Ok(rows)
}

pub fn write_csv(rows: &[ScalingRow], mut out: impl std::io::Write) -> Result<()> {
    writeln!(out, "n,seconds")?;
    for r in rows {
        writeln!(out, "{},{:?}", r.n, r.seconds)?;
    }
    Ok(())
}
