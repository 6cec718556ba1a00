//! Trajectory similarity toolkit.
//!
//! Non-learned similarity measures in three computational classes (linear
//! scan, dynamic programming, enumeration), their multicore meta-algorithms
//! (par-scan, par-DP, par-enum) plus a batched pair-per-worker executor, an
//! FFN trajectory encoder with FLAT/IVF vector indices for embedding-based
//! kNN, k-medoids clustering, and the accuracy metrics HR@k and Rand index.

pub mod analytics;
pub mod embedding;
pub mod error;
pub mod index;
pub mod measures;
pub mod model;
pub mod parallel;
pub mod report;

pub use error::{Error, Result};
pub use measures::{evaluate, MeasureKind, MeasureParams, MeasureSpec, Orientation};
pub use model::{Dataset, Point, Trajectory};
pub use parallel::{run_batch, Assignment, BatchMode, ParallelConfig};
pub use report::{BenchReport, TimingBreakdown};
