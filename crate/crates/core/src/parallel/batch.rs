//! Batched pair execution. `IntraPair` runs the meta-algorithms with `n_c`
//! workers per pair, one pair at a time; `PairPerWorker` dispatches whole
//! pairs onto `batch_workers` workers using the sequential kernels, which is
//! the batched CPU paradigm.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::measures::{evaluate, MeasureClass, MeasureSpec};
use crate::model::Trajectory;
use crate::parallel::{par_dp, par_enum, par_scan, ParallelConfig};
use crate::report::TimingBreakdown;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchMode {
    IntraPair,
    PairPerWorker,
}

impl BatchMode {
    pub fn name(self) -> &'static str {
        match self {
            BatchMode::IntraPair => "intra_pair",
            BatchMode::PairPerWorker => "pair_per_worker",
        }
    }
}

fn intra_pair(spec: &MeasureSpec, a: &Trajectory, b: &Trajectory, cfg: &ParallelConfig) -> Result<f64> {
    match spec.kind.class() {
        MeasureClass::LinearScan => par_scan(spec, a.points(), b.points(), cfg),
        MeasureClass::DynamicProgramming => par_dp(spec, a.points(), b.points(), cfg),
        MeasureClass::Enumeration => par_enum(spec, a.points(), b.points(), cfg),
    }
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

fn eval_sequentially(
    spec: &MeasureSpec,
    pairs: &[(&Trajectory, &Trajectory)],
    out: &mut [Result<f64>],
    deadline: Option<Instant>,
) {
    for (slot, (a, b)) in out.iter_mut().zip(pairs) {
        if expired(deadline) {
            *slot = Err(Error::Timeout);
            return;
        }
        *slot = evaluate(spec, a.points(), b.points());
    }
}

/// Scores every pair, in input order. Any pair failure aborts the batch and
/// reports the lowest failing pair index.
pub fn run_batch(
    spec: &MeasureSpec,
    pairs: &[(&Trajectory, &Trajectory)],
    cfg: &ParallelConfig,
    mode: BatchMode,
) -> Result<(Vec<f64>, TimingBreakdown)> {
    run_batch_deadline(spec, pairs, cfg, mode, None)
}

/// [`run_batch`] with a cooperative cutoff, checked between pairs.
pub fn run_batch_deadline(
    spec: &MeasureSpec,
    pairs: &[(&Trajectory, &Trajectory)],
    cfg: &ParallelConfig,
    mode: BatchMode,
    deadline: Option<Instant>,
) -> Result<(Vec<f64>, TimingBreakdown)> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("run_batch needs at least one pair".into()));
    }
    let start = Instant::now();
    spec.validate()?;
    let pre_s = start.elapsed().as_secs_f64();

    let cmp_start = Instant::now();
    let mut results: Vec<Result<f64>> = (0..pairs.len()).map(|_| Ok(0.0)).collect();
    match mode {
        BatchMode::IntraPair => {
            for (slot, (a, b)) in results.iter_mut().zip(pairs) {
                if expired(deadline) {
                    *slot = Err(Error::Timeout);
                    break;
                }
                *slot = intra_pair(spec, a, b, cfg);
            }
        }
        BatchMode::PairPerWorker => {
            let workers = cfg.batch_workers.min(pairs.len()).max(1);
            if workers == 1 {
                eval_sequentially(spec, pairs, &mut results, deadline);
            } else {
                let chunk = pairs.len().div_ceil(workers);
                #[cfg(feature = "parallel")]
                {
                    use rayon::prelude::*;
                    results
                        .par_chunks_mut(chunk)
                        .zip(pairs.par_chunks(chunk))
                        .for_each(|(out, ps)| eval_sequentially(spec, ps, out, deadline));
                }
                #[cfg(not(feature = "parallel"))]
                {
                    results
                        .chunks_mut(chunk)
                        .zip(pairs.chunks(chunk))
                        .for_each(|(out, ps)| eval_sequentially(spec, ps, out, deadline));
                }
            }
        }
    }

    let mut scores = Vec::with_capacity(results.len());
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => scores.push(v),
            Err(Error::Timeout) => return Err(Error::Timeout),
            Err(e) => {
                return Err(Error::BatchPair {
                    index,
                    source: Box::new(e),
                })
            }
        }
    }
    let cmp_s = cmp_start.elapsed().as_secs_f64();
    Ok((
        scores,
        TimingBreakdown {
            pre_s,
            emb_s: 0.0,
            cmp_s,
            total_s: start.elapsed().as_secs_f64(),
        },
    ))
}
