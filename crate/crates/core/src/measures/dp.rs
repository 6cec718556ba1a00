//! Dynamic-programming measures. Each measure is expressed as a [`DpKernel`]
//! (boundary values plus the interior cell recurrence) so the rolling-row
//! sequential executor and the wavefront parallel executor evaluate the
//! exact same cell expressions.

use crate::error::{Error, Result};
use crate::measures::require_timestamps;
use crate::model::{euclid, Point};

/// One DP recurrence over a (|T|+1) x (|T'|+1) score matrix.
///
/// `boundary` produces row 0 / column 0; `cell` computes an interior value
/// from its three upper-left neighbours. Indices are 1-based into the point
/// sequences.
pub(crate) trait DpKernel: Sync {
    fn boundary(&self, i: usize, j: usize) -> f64;
    fn cell(&self, i: usize, j: usize, diag: f64, up: f64, left: f64) -> f64;
}

#[inline]
fn min3(a: f64, b: f64, c: f64) -> f64 {
    a.min(b).min(c)
}

pub(crate) struct DtwKernel<'a> {
    pub a: &'a [Point],
    pub b: &'a [Point],
}

impl DpKernel for DtwKernel<'_> {
    fn boundary(&self, i: usize, j: usize) -> f64 {
        if i == 0 && j == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn cell(&self, i: usize, j: usize, diag: f64, up: f64, left: f64) -> f64 {
        euclid(&self.a[i - 1], &self.b[j - 1]) + min3(diag, up, left)
    }
}

pub(crate) struct FrechetKernel<'a> {
    pub a: &'a [Point],
    pub b: &'a [Point],
}

impl DpKernel for FrechetKernel<'_> {
    fn boundary(&self, i: usize, j: usize) -> f64 {
        if i == 0 && j == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn cell(&self, i: usize, j: usize, diag: f64, up: f64, left: f64) -> f64 {
        euclid(&self.a[i - 1], &self.b[j - 1]).max(min3(diag, up, left))
    }
}

pub(crate) struct ErpKernel<'a> {
    pub a: &'a [Point],
    pub b: &'a [Point],
    pub gap: Point,
    /// prefix_a[i] = sum of d(a_u, gap) for u <= i; likewise for b.
    prefix_a: Vec<f64>,
    prefix_b: Vec<f64>,
}

impl<'a> ErpKernel<'a> {
    pub fn new(a: &'a [Point], b: &'a [Point], gap: Point) -> Self {
        let prefix = |pts: &[Point]| {
            let mut acc = Vec::with_capacity(pts.len() + 1);
            let mut sum = 0.0;
            acc.push(0.0);
            for p in pts {
                sum += euclid(p, &gap);
                acc.push(sum);
            }
            acc
        };
        ErpKernel {
            a,
            b,
            gap,
            prefix_a: prefix(a),
            prefix_b: prefix(b),
        }
    }
}

impl DpKernel for ErpKernel<'_> {
    fn boundary(&self, i: usize, j: usize) -> f64 {
        if i == 0 {
            self.prefix_b[j]
        } else {
            self.prefix_a[i]
        }
    }

    fn cell(&self, i: usize, j: usize, diag: f64, up: f64, left: f64) -> f64 {
        let pa = &self.a[i - 1];
        let pb = &self.b[j - 1];
        min3(
            diag + euclid(pa, pb),
            up + euclid(pa, &self.gap),
            left + euclid(pb, &self.gap),
        )
    }
}

pub(crate) struct EdrKernel<'a> {
    pub a: &'a [Point],
    pub b: &'a [Point],
    pub eps: f64,
}

impl DpKernel for EdrKernel<'_> {
    fn boundary(&self, i: usize, j: usize) -> f64 {
        (i + j) as f64
    }

    fn cell(&self, i: usize, j: usize, diag: f64, up: f64, left: f64) -> f64 {
        let sub = if euclid(&self.a[i - 1], &self.b[j - 1]) <= self.eps {
            0.0
        } else {
            1.0
        };
        min3(diag + sub, up + 1.0, left + 1.0)
    }
}

pub(crate) struct LcssKernel<'a> {
    pub a: &'a [Point],
    pub b: &'a [Point],
    pub eps: f64,
}

impl DpKernel for LcssKernel<'_> {
    fn boundary(&self, _i: usize, _j: usize) -> f64 {
        0.0
    }

    fn cell(&self, i: usize, j: usize, diag: f64, up: f64, left: f64) -> f64 {
        if euclid(&self.a[i - 1], &self.b[j - 1]) <= self.eps {
            diag + 1.0
        } else {
            up.max(left)
        }
    }
}

pub(crate) struct StedrKernel<'a> {
    pub a: &'a [Point],
    pub b: &'a [Point],
    pub eps: f64,
    pub eps_t: f64,
}

impl DpKernel for StedrKernel<'_> {
    fn boundary(&self, i: usize, j: usize) -> f64 {
        (i + j) as f64
    }

    fn cell(&self, i: usize, j: usize, diag: f64, up: f64, left: f64) -> f64 {
        let pa = &self.a[i - 1];
        let pb = &self.b[j - 1];
        let dt = (pa.t.expect("validated") - pb.t.expect("validated")).abs();
        let sub = if euclid(pa, pb) <= self.eps && dt <= self.eps_t {
            0.0
        } else {
            1.0
        };
        min3(diag + sub, up + 1.0, left + 1.0)
    }
}

/// Runs a kernel with two rolling rows; O(|T'|) space.
pub(crate) fn run_sequential<K: DpKernel>(kernel: &K, n: usize, m: usize) -> f64 {
    let mut prev: Vec<f64> = (0..=m).map(|j| kernel.boundary(0, j)).collect();
    let mut cur = vec![0.0; m + 1];
    for i in 1..=n {
        cur[0] = kernel.boundary(i, 0);
        for j in 1..=m {
            cur[j] = kernel.cell(i, j, prev[j - 1], prev[j], cur[j - 1]);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m]
}

/// The materialized DP table, kept for diagnostics and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    pub rows: usize,
    pub cols: usize,
    values: Vec<f64>,
}

impl ScoreMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }
}

pub(crate) fn run_full<K: DpKernel>(kernel: &K, n: usize, m: usize) -> ScoreMatrix {
    let cols = m + 1;
    let mut values = vec![0.0; (n + 1) * cols];
    for j in 0..=m {
        values[j] = kernel.boundary(0, j);
    }
    for i in 1..=n {
        values[i * cols] = kernel.boundary(i, 0);
        for j in 1..=m {
            values[i * cols + j] = kernel.cell(
                i,
                j,
                values[(i - 1) * cols + j - 1],
                values[(i - 1) * cols + j],
                values[i * cols + j - 1],
            );
        }
    }
    ScoreMatrix {
        rows: n + 1,
        cols,
        values,
    }
}

fn require_non_empty(measure: &'static str, a: &[Point], b: &[Point]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        Err(Error::EmptyTrajectory { measure })
    } else {
        Ok(())
    }
}

/// Dynamic time warping with Euclidean ground distance.
pub fn dtw(a: &[Point], b: &[Point]) -> Result<f64> {
    require_non_empty("dtw", a, b)?;
    Ok(run_sequential(&DtwKernel { a, b }, a.len(), b.len()))
}

/// Discrete Fréchet distance.
pub fn frechet_discrete(a: &[Point], b: &[Point]) -> Result<f64> {
    require_non_empty("frechet", a, b)?;
    Ok(run_sequential(&FrechetKernel { a, b }, a.len(), b.len()))
}

/// Edit distance with real penalty against the gap point `g`.
pub fn erp(a: &[Point], b: &[Point], g: &Point) -> Result<f64> {
    let kernel = ErpKernel::new(a, b, Point::new(g.x, g.y));
    Ok(run_sequential(&kernel, a.len(), b.len()))
}

/// Edit distance on real sequence: unit edit cost, matches within `eps`.
pub fn edr(a: &[Point], b: &[Point], eps: f64) -> Result<usize> {
    Ok(run_sequential(&EdrKernel { a, b, eps }, a.len(), b.len()) as usize)
}

/// Longest common subsequence length under the `eps` match predicate.
pub fn lcss(a: &[Point], b: &[Point], eps: f64) -> Result<usize> {
    Ok(run_sequential(&LcssKernel { a, b, eps }, a.len(), b.len()) as usize)
}

/// EDR with an additional temporal threshold on matches.
pub fn stedr(a: &[Point], b: &[Point], eps: f64, eps_t: f64) -> Result<usize> {
    require_timestamps("stedr", a, b)?;
    Ok(run_sequential(&StedrKernel { a, b, eps, eps_t }, a.len(), b.len()) as usize)
}

/// Materializes the full score matrix of a DP measure for inspection.
pub fn score_matrix(spec: &crate::measures::MeasureSpec, a: &[Point], b: &[Point]) -> Result<ScoreMatrix> {
    use crate::measures::MeasureKind;
    spec.validate()?;
    match spec.kind {
        MeasureKind::Dtw => {
            require_non_empty("dtw", a, b)?;
            Ok(run_full(&DtwKernel { a, b }, a.len(), b.len()))
        }
        MeasureKind::FrechetDiscrete => {
            require_non_empty("frechet", a, b)?;
            Ok(run_full(&FrechetKernel { a, b }, a.len(), b.len()))
        }
        MeasureKind::Erp => Ok(run_full(&ErpKernel::new(a, b, spec.gap()), a.len(), b.len())),
        MeasureKind::Edr => Ok(run_full(
            &EdrKernel { a, b, eps: spec.eps() },
            a.len(),
            b.len(),
        )),
        MeasureKind::Lcss => Ok(run_full(
            &LcssKernel { a, b, eps: spec.eps() },
            a.len(),
            b.len(),
        )),
        MeasureKind::Stedr => {
            require_timestamps("stedr", a, b)?;
            Ok(run_full(
                &StedrKernel { a, b, eps: spec.eps(), eps_t: spec.eps_t() },
                a.len(),
                b.len(),
            ))
        }
        other => Err(Error::WrongClass {
            measure: other.name(),
            class: "dynamic programming",
        }),
    }
}
