//! Multicore realizations of the three parallel meta-algorithms: par-scan
//! for linear-scan measures, par-DP (anti-diagonal wavefront) for DP
//! measures, and par-enum for enumeration measures, plus the batched
//! pair-per-worker executor.
//!
//! With the `parallel` feature (default) logical workers run on the rayon
//! pool; without it the same worker schedule executes on one thread, so
//! scores are identical either way.

mod batch;
mod dp;
mod enumeration;
mod scan;

pub use batch::{run_batch, run_batch_deadline, BatchMode};
pub use dp::{par_dp, par_dp_instrumented, AccessEvent, AccessKind, ScoreBuffer, WavefrontSchedule};
pub use enumeration::par_enum;
pub use scan::par_scan;

use crate::error::{Error, Result};

/// Column/item-to-worker strategies. Values are identical under both; the
/// paper's interleaving is kept selectable, contiguous chunks are the
/// cache-friendlier default on CPU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Assignment {
    Contiguous,
    Interleaved,
}

impl Assignment {
    pub fn name(self) -> &'static str {
        match self {
            Assignment::Contiguous => "contiguous",
            Assignment::Interleaved => "interleaved",
        }
    }
}

impl std::str::FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contiguous" => Ok(Assignment::Contiguous),
            "interleaved" => Ok(Assignment::Interleaved),
            other => Err(Error::InvalidArgument(format!("unknown assignment {other:?}"))),
        }
    }
}

/// Worker-pool configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParallelConfig {
    /// Workers cooperating on a single trajectory pair.
    pub n_c: usize,
    /// Pairs processed concurrently in batched pair-per-worker mode.
    pub batch_workers: usize,
    pub assignment: Assignment,
}

impl ParallelConfig {
    pub fn new(n_c: usize, batch_workers: usize, assignment: Assignment) -> Result<Self> {
        if n_c < 1 || batch_workers < 1 {
            return Err(Error::InvalidArgument(
                "n_c and batch_workers must be >= 1".into(),
            ));
        }
        Ok(ParallelConfig {
            n_c,
            batch_workers,
            assignment,
        })
    }

    pub fn with_n_c(n_c: usize) -> Self {
        ParallelConfig {
            n_c,
            ..Default::default()
        }
    }
}

impl Default for ParallelConfig {
    fn default() -> Self {
        ParallelConfig {
            n_c: 64,
            batch_workers: available_workers(),
            assignment: Assignment::Contiguous,
        }
    }
}

pub fn available_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Items of `0..n_items` owned by worker `w` under the given strategy.
/// Iteration is always in ascending item order.
pub(crate) fn owned_items(
    n_items: usize,
    n_c: usize,
    w: usize,
    assignment: Assignment,
) -> OwnedItems {
    match assignment {
        Assignment::Contiguous => {
            let base = n_items / n_c;
            let rem = n_items % n_c;
            let start = w * base + w.min(rem);
            let len = base + usize::from(w < rem);
            OwnedItems::Chunk(start..start + len)
        }
        Assignment::Interleaved => OwnedItems::Strided {
            next: w,
            end: n_items,
            stride: n_c,
        },
    }
}

pub(crate) enum OwnedItems {
    Chunk(std::ops::Range<usize>),
    Strided { next: usize, end: usize, stride: usize },
}

impl Iterator for OwnedItems {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self {
            OwnedItems::Chunk(r) => r.next(),
            OwnedItems::Strided { next, end, stride } => {
                if *next < *end {
                    let item = *next;
                    *next += *stride;
                    Some(item)
                } else {
                    None
                }
            }
        }
    }
}

/// Runs `f` once per logical worker and collects the results in ascending
/// worker order. Workers beyond the item count simply see no items.
pub(crate) fn map_workers<T, F>(n_workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if n_workers <= 1 {
        return vec![f(0)];
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n_workers).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_workers).map(f).collect()
    }
}

/// Per-slot rendezvous: runs `f` for every worker and returns only when all
/// workers have finished, which realizes the barrier between time slots.
pub(crate) fn for_each_worker<F>(n_workers: usize, f: F)
where
    F: Fn(usize) + Sync,
{
    if n_workers <= 1 {
        f(0);
        return;
    }
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n_workers).into_par_iter().for_each(f);
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_workers).for_each(f);
    }
}
