//! par-scan: the linear-scan measures pair points up front (by index or by
//! timestamp), then the per-pair scores are partitioned across workers and
//! the per-worker partials are reduced in ascending worker order.

use crate::error::{Error, Result};
use crate::measures::scan::{cdds_interval, paired_samples, sar_segment_pair, sax_words};
use crate::measures::{require_timestamps, MeasureKind, MeasureSpec};
use crate::model::{euclid, Point};
use crate::parallel::{map_workers, owned_items, ParallelConfig};

/// Sums `score(item)` over `0..n_items`, partitioned per the config, with a
/// deterministic ascending-worker reduction.
fn partitioned_sum<F>(n_items: usize, cfg: &ParallelConfig, score: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let workers = cfg.n_c.min(n_items.max(1));
    let partials = map_workers(workers, |w| {
        owned_items(n_items, workers, w, cfg.assignment)
            .map(&score)
            .sum::<f64>()
    });
    partials.into_iter().sum()
}

/// Evaluates a linear-scan measure on `cfg.n_c` cooperating workers.
pub fn par_scan(spec: &MeasureSpec, a: &[Point], b: &[Point], cfg: &ParallelConfig) -> Result<f64> {
    spec.validate()?;
    match spec.kind {
        MeasureKind::Spd => {
            if a.len() != b.len() {
                return Err(Error::LengthMismatch {
                    measure: "spd",
                    left: a.len(),
                    right: b.len(),
                });
            }
            Ok(partitioned_sum(a.len(), cfg, |i| euclid(&a[i], &b[i])))
        }
        MeasureKind::Cdds => {
            require_timestamps("cdds", a, b)?;
            let eps = spec.eps();
            let samples = paired_samples(a, b);
            let intervals = samples.len().saturating_sub(1);
            Ok(partitioned_sum(intervals, cfg, |k| cdds_interval(&samples, k, eps)))
        }
        MeasureKind::Sar => {
            require_timestamps("sar", a, b)?;
            let params = spec.sax_params()?;
            let (wa, wb) = sax_words(a, b, &params);
            Ok(partitioned_sum(params.word_length, cfg, |k| {
                (0..params.word_length)
                    .map(|l| sar_segment_pair(&wa, &wb, k, l, params.symbol_threshold))
                    .sum()
            }))
        }
        other => Err(Error::WrongClass {
            measure: other.name(),
            class: "linear scan",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{cdds, sar, spd, MeasureParams, SaxParams};
    use crate::parallel::Assignment;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn tpts(coords: &[(f64, f64, f64)]) -> Vec<Point> {
        coords
            .iter()
            .map(|&(x, y, t)| Point::timestamped(x, y, t))
            .collect()
    }

    fn cfg(n_c: usize, assignment: Assignment) -> ParallelConfig {
        ParallelConfig::new(n_c, 1, assignment).unwrap()
    }

    #[test]
    fn spd_three_workers() {
        let a = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = pts(&[(0.0, 1.0), (1.0, 1.0)]);
        let spec = MeasureSpec::plain(MeasureKind::Spd).unwrap();
        assert_eq!(par_scan(&spec, &a, &b, &cfg(3, Assignment::Contiguous)).unwrap(), 2.0);
    }

    #[test]
    fn single_worker_matches_sequential_exactly() {
        let a = pts(&[(0.0, 0.0), (1.5, 2.0), (3.0, 1.0)]);
        let b = pts(&[(0.5, 0.5), (1.0, 2.5), (2.0, 2.0)]);
        let spec = MeasureSpec::plain(MeasureKind::Spd).unwrap();
        let seq = spd(&a, &b).unwrap();
        let par = par_scan(&spec, &a, &b, &cfg(1, Assignment::Interleaved)).unwrap();
        assert_eq!(par.to_bits(), seq.to_bits());
    }

    #[test]
    fn cdds_four_workers() {
        let a = tpts(&[(0.0, 0.0, 0.0), (0.0, 0.0, 10.0)]);
        let b = tpts(&[(0.1, 0.0, 0.0), (0.2, 0.0, 10.0)]);
        let spec = MeasureSpec::new(MeasureKind::Cdds, MeasureParams::with_eps(1.0)).unwrap();
        let par = par_scan(&spec, &a, &b, &cfg(4, Assignment::Contiguous)).unwrap();
        assert_eq!(par, 10.0);
        assert_eq!(par, cdds(&a, &b, 1.0).unwrap());
    }

    #[test]
    fn sar_matches_sequential_within_tolerance() {
        let a = tpts(&[(0.0, 0.0, 0.0), (3.0, 1.0, 4.0), (5.0, 2.0, 8.0), (9.0, 3.0, 16.0)]);
        let b = tpts(&[(0.5, 0.0, 2.0), (3.5, 1.0, 6.0), (5.5, 2.0, 10.0)]);
        let spec = MeasureSpec::plain(MeasureKind::Sar).unwrap();
        let seq = sar(&a, &b, &SaxParams::default()).unwrap();
        for n_c in [1, 3, 16] {
            for assignment in [Assignment::Contiguous, Assignment::Interleaved] {
                let par = par_scan(&spec, &a, &b, &cfg(n_c, assignment)).unwrap();
                assert!((par - seq).abs() <= 1e-9 * seq.abs().max(1.0));
            }
        }
    }

    #[test]
    fn errors_propagate() {
        let spec = MeasureSpec::plain(MeasureKind::Spd).unwrap();
        let a = pts(&[(0.0, 0.0)]);
        let b = pts(&[(0.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(
            par_scan(&spec, &a, &b, &cfg(2, Assignment::Contiguous)),
            Err(Error::LengthMismatch { .. })
        ));
        let dtw_spec = MeasureSpec::plain(MeasureKind::Dtw).unwrap();
        assert!(matches!(
            par_scan(&dtw_spec, &a, &a, &cfg(2, Assignment::Contiguous)),
            Err(Error::WrongClass { .. })
        ));
    }
}
