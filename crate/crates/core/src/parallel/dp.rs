//! Anti-diagonal wavefront execution of the DP measures.
//!
//! The DP score matrix has `n_ts = |T| + |T'| + 1` anti-diagonals, counting
//! the boundary row and column. All cells on one anti-diagonal are mutually
//! independent, so each time slot computes one diagonal across the workers
//! and synchronizes before the next. Storage is a [`ScoreBuffer`] of three
//! rows: at slot `ts` the rows `ts % 3` and `(ts + 1) % 3` hold the two
//! previous diagonals and row `(ts + 2) % 3` receives the new one.

use std::marker::PhantomData;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::measures::dp::{
    DpKernel, DtwKernel, EdrKernel, ErpKernel, FrechetKernel, LcssKernel, StedrKernel,
};
use crate::measures::{require_timestamps, MeasureKind, MeasureSpec};
use crate::model::Point;
use crate::parallel::{for_each_worker, owned_items, Assignment, ParallelConfig};

/// The 3-row rolling working matrix of par-DP. Row r of a slot holds the
/// anti-diagonal whose index is congruent to r - 2 (mod 3).
pub struct ScoreBuffer {
    cols: usize,
    rows: [Vec<f64>; 3],
}

impl ScoreBuffer {
    pub fn new(cols: usize) -> Self {
        ScoreBuffer {
            cols,
            rows: [vec![0.0; cols], vec![0.0; cols], vec![0.0; cols]],
        }
    }

    pub fn rows(&self) -> usize {
        3
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.rows[r]
    }

    /// Splits into the two read rows and the write row for slot `ts`.
    fn split_for_slot(&mut self, ts: usize) -> (&[f64], &[f64], &mut [f64]) {
        let w = WavefrontSchedule::write_row(ts);
        let (r2, r1) = WavefrontSchedule::read_rows(ts);
        debug_assert!(r2 != r1 && r1 != w && r2 != w);
        let [a, b, c] = &mut self.rows;
        // The three row indices are distinct, so the borrows cannot alias.
        let ptrs: [*mut Vec<f64>; 3] = [a as *mut _, b as *mut _, c as *mut _];
        unsafe {
            (
                (*ptrs[r2]).as_slice(),
                (*ptrs[r1]).as_slice(),
                (*ptrs[w]).as_mut_slice(),
            )
        }
    }
}

/// Write handle shared by the workers of one slot. Soundness rests on the
/// schedule: within a slot every column is owned by exactly one worker.
struct RowWriter<'a> {
    ptr: *mut f64,
    len: usize,
    _marker: PhantomData<&'a mut [f64]>,
}

unsafe impl Sync for RowWriter<'_> {}

impl<'a> RowWriter<'a> {
    fn new(row: &'a mut [f64]) -> Self {
        RowWriter {
            ptr: row.as_mut_ptr(),
            len: row.len(),
            _marker: PhantomData,
        }
    }

    /// Safety: concurrent callers must use disjoint `j`.
    #[inline]
    unsafe fn set(&self, j: usize, v: f64) {
        debug_assert!(j < self.len);
        unsafe { *self.ptr.add(j) = v }
    }
}

/// The static wavefront plan: slot count, per-slot cell ranges, and the
/// column-to-worker assignment.
#[derive(Debug, Clone, Copy)]
pub struct WavefrontSchedule {
    /// |T|
    pub n_rows: usize,
    /// |T'|
    pub n_cols: usize,
    /// |T| + |T'| + 1 anti-diagonal time slots.
    pub n_ts: usize,
    pub n_c: usize,
    pub assignment: Assignment,
}

impl WavefrontSchedule {
    pub fn new(n_rows: usize, n_cols: usize, cfg: &ParallelConfig) -> Self {
        WavefrontSchedule {
            n_rows,
            n_cols,
            n_ts: n_rows + n_cols + 1,
            n_c: cfg.n_c,
            assignment: cfg.assignment,
        }
    }

    /// Buffer rows read at slot `ts`: the diagonals ts-2 and ts-1.
    pub fn read_rows(ts: usize) -> (usize, usize) {
        (ts % 3, (ts + 1) % 3)
    }

    /// Buffer row written at slot `ts`.
    pub fn write_row(ts: usize) -> usize {
        (ts + 2) % 3
    }

    /// Inclusive column range of the cells on anti-diagonal `ts`.
    pub fn slot_cols(&self, ts: usize) -> (usize, usize) {
        (ts.saturating_sub(self.n_rows), ts.min(self.n_cols))
    }

    /// Columns of slot `ts` computed by worker `w`, ascending.
    pub fn worker_cols(&self, ts: usize, w: usize) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = self.slot_cols(ts);
        owned_items(self.n_cols + 1, self.n_c, w, self.assignment)
            .filter(move |&j| j >= lo && j <= hi)
    }

    /// Workers that own at least one column; higher ids would idle.
    fn active_workers(&self) -> usize {
        self.n_c.min(self.n_cols + 1)
    }
}

/// Buffer access kinds recorded by the instrumented executor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccessKind {
    Read,
    Write,
}

/// One slot-tagged buffer access.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessEvent {
    pub slot: usize,
    pub row: usize,
    pub col: usize,
    pub kind: AccessKind,
}

trait AccessObserver: Sync {
    fn record(&self, event: AccessEvent);
}

struct NoopObserver;

impl AccessObserver for NoopObserver {
    #[inline]
    fn record(&self, _event: AccessEvent) {}
}

struct RecordingObserver {
    events: Mutex<Vec<AccessEvent>>,
}

impl AccessObserver for RecordingObserver {
    fn record(&self, event: AccessEvent) {
        self.events.lock().unwrap().push(event);
    }
}

fn run_wavefront<K, O>(kernel: &K, schedule: &WavefrontSchedule, observer: &O) -> f64
where
    K: DpKernel + ?Sized,
    O: AccessObserver,
{
    let mut buf = ScoreBuffer::new(schedule.n_cols + 1);
    let workers = schedule.active_workers();
    for ts in 0..schedule.n_ts {
        let (r2_idx, r1_idx) = WavefrontSchedule::read_rows(ts);
        let w_idx = WavefrontSchedule::write_row(ts);
        let (prev2, prev1, write) = buf.split_for_slot(ts);
        let writer = RowWriter::new(write);
        let compute = |w: usize| {
            for j in schedule.worker_cols(ts, w) {
                let i = ts - j;
                let v = if i == 0 || j == 0 {
                    kernel.boundary(i, j)
                } else {
                    observer.record(AccessEvent { slot: ts, row: r2_idx, col: j - 1, kind: AccessKind::Read });
                    observer.record(AccessEvent { slot: ts, row: r1_idx, col: j, kind: AccessKind::Read });
                    observer.record(AccessEvent { slot: ts, row: r1_idx, col: j - 1, kind: AccessKind::Read });
                    kernel.cell(i, j, prev2[j - 1], prev1[j], prev1[j - 1])
                };
                observer.record(AccessEvent { slot: ts, row: w_idx, col: j, kind: AccessKind::Write });
                // Safety: worker_cols assigns each column to one worker.
                unsafe { writer.set(j, v) };
            }
        };
        for_each_worker(workers, compute);
    }
    buf.row(WavefrontSchedule::write_row(schedule.n_ts - 1))[schedule.n_cols]
}

fn with_kernel<F, R>(spec: &MeasureSpec, a: &[Point], b: &[Point], f: F) -> Result<R>
where
    F: FnOnce(&dyn DpKernel) -> R,
{
    spec.validate()?;
    let non_empty = |measure: &'static str| -> Result<()> {
        if a.is_empty() || b.is_empty() {
            Err(Error::EmptyTrajectory { measure })
        } else {
            Ok(())
        }
    };
    match spec.kind {
        MeasureKind::Dtw => {
            non_empty("dtw")?;
            Ok(f(&DtwKernel { a, b }))
        }
        MeasureKind::FrechetDiscrete => {
            non_empty("frechet")?;
            Ok(f(&FrechetKernel { a, b }))
        }
        MeasureKind::Erp => Ok(f(&ErpKernel::new(a, b, spec.gap()))),
        MeasureKind::Edr => Ok(f(&EdrKernel { a, b, eps: spec.eps() })),
        MeasureKind::Lcss => Ok(f(&LcssKernel { a, b, eps: spec.eps() })),
        MeasureKind::Stedr => {
            require_timestamps("stedr", a, b)?;
            Ok(f(&StedrKernel { a, b, eps: spec.eps(), eps_t: spec.eps_t() }))
        }
        other => Err(Error::WrongClass {
            measure: other.name(),
            class: "dynamic programming",
        }),
    }
}

/// Evaluates a DP measure with the anti-diagonal wavefront on `cfg.n_c`
/// workers. Bit-identical to the sequential implementation.
pub fn par_dp(spec: &MeasureSpec, a: &[Point], b: &[Point], cfg: &ParallelConfig) -> Result<f64> {
    let schedule = WavefrontSchedule::new(a.len(), b.len(), cfg);
    with_kernel(spec, a, b, |kernel| run_wavefront(kernel, &schedule, &NoopObserver))
}

/// Like [`par_dp`] but records every slot-tagged buffer access, so tests can
/// verify that no cell is read in the slot that writes it.
pub fn par_dp_instrumented(
    spec: &MeasureSpec,
    a: &[Point],
    b: &[Point],
    cfg: &ParallelConfig,
) -> Result<(f64, Vec<AccessEvent>)> {
    let schedule = WavefrontSchedule::new(a.len(), b.len(), cfg);
    let observer = RecordingObserver {
        events: Mutex::new(Vec::new()),
    };
    let score = with_kernel(spec, a, b, |kernel| run_wavefront(kernel, &schedule, &observer))?;
    Ok((score, observer.events.into_inner().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{dtw, evaluate, MeasureParams};
    use crate::model::generate_synthetic;
    use std::collections::HashSet;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn cfg(n_c: usize, assignment: Assignment) -> ParallelConfig {
        ParallelConfig::new(n_c, 1, assignment).unwrap()
    }

    #[test]
    fn dtw_2x3_matches_sequential_bit_exactly() {
        let a = pts(&[(0.0, 0.0), (2.0, 0.0)]);
        let b = pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let spec = MeasureSpec::plain(MeasureKind::Dtw).unwrap();
        let seq = dtw(&a, &b).unwrap();
        assert_eq!(seq, 1.0);
        for n_c in [1, 2, 5] {
            for assignment in [Assignment::Contiguous, Assignment::Interleaved] {
                let par = par_dp(&spec, &a, &b, &cfg(n_c, assignment)).unwrap();
                assert_eq!(par.to_bits(), seq.to_bits());
            }
        }
    }

    #[test]
    fn schedule_has_m_plus_n_plus_one_slots() {
        let schedule = WavefrontSchedule::new(2, 3, &cfg(2, Assignment::Contiguous));
        assert_eq!(schedule.n_ts, 6);
        // every slot's columns partition across workers
        for ts in 0..schedule.n_ts {
            let (lo, hi) = schedule.slot_cols(ts);
            let mut seen = HashSet::new();
            for w in 0..schedule.n_c {
                for j in schedule.worker_cols(ts, w) {
                    assert!(j >= lo && j <= hi);
                    assert!(seen.insert(j), "column {j} assigned twice in slot {ts}");
                }
            }
            assert_eq!(seen.len(), hi - lo + 1);
        }
    }

    #[test]
    fn degenerate_single_worker_equals_sequential() {
        let ds = generate_synthetic(6, (1, 12), 11, false);
        let spec = MeasureSpec::plain(MeasureKind::Dtw).unwrap();
        for pair in ds.sample_pairs(10, 3).unwrap() {
            let seq = dtw(pair.0.points(), pair.1.points()).unwrap();
            let par = par_dp(&spec, pair.0.points(), pair.1.points(), &cfg(1, Assignment::Contiguous)).unwrap();
            assert_eq!(par.to_bits(), seq.to_bits());
        }
    }

    #[test]
    fn all_dp_measures_match_sequential_on_random_pairs() {
        let ds = generate_synthetic(10, (1, 20), 5, true);
        let pairs = ds.sample_pairs(20, 8).unwrap();
        let specs = [
            MeasureSpec::plain(MeasureKind::Dtw).unwrap(),
            MeasureSpec::plain(MeasureKind::FrechetDiscrete).unwrap(),
            MeasureSpec::new(MeasureKind::Erp, MeasureParams::with_gap(0.0, 0.0)).unwrap(),
            MeasureSpec::new(MeasureKind::Edr, MeasureParams::with_eps(3.0)).unwrap(),
            MeasureSpec::new(MeasureKind::Lcss, MeasureParams::with_eps(3.0)).unwrap(),
            MeasureSpec::new(
                MeasureKind::Stedr,
                MeasureParams {
                    eps_spatial: Some(3.0),
                    eps_temporal: Some(20.0),
                    ..Default::default()
                },
            )
            .unwrap(),
        ];
        for spec in &specs {
            for (a, b) in &pairs {
                let seq = evaluate(spec, a.points(), b.points()).unwrap();
                for n_c in [2, 7] {
                    for assignment in [Assignment::Contiguous, Assignment::Interleaved] {
                        let par = par_dp(spec, a.points(), b.points(), &cfg(n_c, assignment)).unwrap();
                        assert_eq!(par.to_bits(), seq.to_bits(), "{:?}", spec.kind);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_inputs_follow_sequential_rules() {
        let a = pts(&[(1.0, 0.0), (2.0, 0.0)]);
        let c = cfg(3, Assignment::Interleaved);
        let edr_spec = MeasureSpec::new(MeasureKind::Edr, MeasureParams::with_eps(0.5)).unwrap();
        assert_eq!(par_dp(&edr_spec, &[], &a, &c).unwrap(), 2.0);
        let erp_spec = MeasureSpec::new(MeasureKind::Erp, MeasureParams::with_gap(0.0, 0.0)).unwrap();
        assert_eq!(par_dp(&erp_spec, &a, &[], &c).unwrap(), 3.0);
        let dtw_spec = MeasureSpec::plain(MeasureKind::Dtw).unwrap();
        assert!(par_dp(&dtw_spec, &[], &a, &c).is_err());
    }

    #[test]
    fn wrong_class_is_rejected() {
        let spec = MeasureSpec::plain(MeasureKind::Hausdorff).unwrap();
        let a = pts(&[(0.0, 0.0)]);
        assert!(matches!(
            par_dp(&spec, &a, &a, &cfg(2, Assignment::Contiguous)),
            Err(Error::WrongClass { .. })
        ));
    }

    #[test]
    fn instrumented_run_has_no_same_slot_hazard() {
        let a = pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]);
        let b = pts(&[(0.0, 1.0), (2.0, 0.0)]);
        let spec = MeasureSpec::plain(MeasureKind::Dtw).unwrap();
        let (score, events) = par_dp_instrumented(&spec, &a, &b, &cfg(2, Assignment::Interleaved)).unwrap();
        assert_eq!(score.to_bits(), dtw(&a, &b).unwrap().to_bits());
        for ts in 0..(a.len() + b.len() + 1) {
            let written: HashSet<(usize, usize)> = events
                .iter()
                .filter(|e| e.slot == ts && e.kind == AccessKind::Write)
                .map(|e| (e.row, e.col))
                .collect();
            let read: HashSet<(usize, usize)> = events
                .iter()
                .filter(|e| e.slot == ts && e.kind == AccessKind::Read)
                .map(|e| (e.row, e.col))
                .collect();
            assert!(written.is_disjoint(&read), "slot {ts} reads a cell it writes");
        }
    }
}
