//! par-enum: point-to-trajectory scores are embarrassingly parallel, so the
//! outer point set is partitioned across workers and the per-worker partials
//! are harvested on a single worker.

use crate::error::{Error, Result};
use crate::measures::enumeration::{min_dist_to, owd_combine};
use crate::measures::{MeasureKind, MeasureSpec};
use crate::model::Point;
use crate::parallel::{map_workers, owned_items, ParallelConfig};

fn directed<F, G>(outer: &[Point], cfg: &ParallelConfig, per_point: F, reduce: G) -> f64
where
    F: Fn(usize) -> f64 + Sync,
    G: Fn(f64, f64) -> f64 + Copy,
{
    let workers = cfg.n_c.min(outer.len().max(1));
    let partials = map_workers(workers, |w| {
        owned_items(outer.len(), workers, w, cfg.assignment)
            .map(&per_point)
            .reduce(reduce)
    });
    partials
        .into_iter()
        .flatten()
        .reduce(reduce)
        .expect("outer trajectory is non-empty")
}

/// Evaluates an enumeration measure on `cfg.n_c` cooperating workers.
///
/// Hausdorff aggregates by max, which is order-independent and therefore
/// bit-identical to the sequential result; OWD sums partials in ascending
/// worker order.
pub fn par_enum(spec: &MeasureSpec, a: &[Point], b: &[Point], cfg: &ParallelConfig) -> Result<f64> {
    spec.validate()?;
    if !matches!(spec.kind, MeasureKind::Hausdorff | MeasureKind::Owd) {
        return Err(Error::WrongClass {
            measure: spec.kind.name(),
            class: "enumeration",
        });
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyTrajectory {
            measure: spec.kind.name(),
        });
    }
    match spec.kind {
        MeasureKind::Hausdorff => {
            let h_ab = directed(a, cfg, |i| min_dist_to(&a[i], b), f64::max);
            let h_ba = directed(b, cfg, |j| min_dist_to(&b[j], a), f64::max);
            Ok(h_ab.max(h_ba))
        }
        MeasureKind::Owd => {
            let sum_ab = directed(a, cfg, |i| min_dist_to(&a[i], b), |x, y| x + y);
            let sum_ba = directed(b, cfg, |j| min_dist_to(&b[j], a), |x, y| x + y);
            Ok(owd_combine(sum_ab, a.len(), sum_ba, b.len()))
        }
        _ => unreachable!(),
    }
}
