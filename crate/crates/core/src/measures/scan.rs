//! Linear-scan measures: SPD, CDDS and the SAX-based SAR.

use crate::error::{Error, Result};
use crate::measures::require_timestamps;
use crate::model::{euclid, Point};

/// Sum-of-pair distance; requires equal-length trajectories.
pub fn spd(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            measure: "spd",
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(p, q)| euclid(p, q)).sum())
}

/// Timestamps within this tolerance are treated as simultaneous when
/// pairing samples for CDDS.
pub(crate) const CDDS_TIME_TOL: f64 = 1e-6;

/// One time-aligned sample pair: the shared timestamp and the spatial
/// distance between the two trajectories at that instant.
pub(crate) fn paired_samples(a: &[Point], b: &[Point]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let ta = a[i].t.expect("validated");
        let tb = b[j].t.expect("validated");
        if (ta - tb).abs() <= CDDS_TIME_TOL {
            out.push((ta, euclid(&a[i], &b[j])));
            i += 1;
            j += 1;
        } else if ta < tb {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

#[inline]
pub(crate) fn cdds_interval(samples: &[(f64, f64)], k: usize, eps: f64) -> f64 {
    let (t0, d0) = samples[k];
    let (t1, d1) = samples[k + 1];
    if d0 <= eps && d1 <= eps {
        t1 - t0
    } else {
        0.0
    }
}

/// Close-distance duration similarity: total duration of the maximal
/// intervals whose bounding time-aligned sample pairs both lie within `eps`.
pub fn cdds(a: &[Point], b: &[Point], eps: f64) -> Result<f64> {
    require_timestamps("cdds", a, b)?;
    let samples = paired_samples(a, b);
    let mut total = 0.0;
    for k in 0..samples.len().saturating_sub(1) {
        total += cdds_interval(&samples, k, eps);
    }
    Ok(total)
}

/// SAX segmentation parameters for SAR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaxParams {
    pub word_length: usize,
    pub alphabet: usize,
    pub symbol_threshold: usize,
}

impl SaxParams {
    pub const DEFAULT_WORD_LENGTH: usize = 8;
    pub const DEFAULT_ALPHABET: usize = 4;
    pub const DEFAULT_SYMBOL_THRESHOLD: usize = 0;

    pub fn new(word_length: usize, alphabet: usize, symbol_threshold: usize) -> Result<Self> {
        if word_length < 1 {
            return Err(Error::InvalidArgument("sax word length must be >= 1".into()));
        }
        if !(2..=20).contains(&alphabet) {
            return Err(Error::InvalidArgument(format!(
                "sax alphabet must be in [2, 20], got {alphabet}"
            )));
        }
        Ok(SaxParams {
            word_length,
            alphabet,
            symbol_threshold,
        })
    }
}

impl Default for SaxParams {
    fn default() -> Self {
        SaxParams {
            word_length: Self::DEFAULT_WORD_LENGTH,
            alphabet: Self::DEFAULT_ALPHABET,
            symbol_threshold: Self::DEFAULT_SYMBOL_THRESHOLD,
        }
    }
}

/// Standard-normal quantiles Phi^-1(i/a) for alphabet size a.
fn breakpoints(alphabet: usize) -> &'static [f64] {
    match alphabet {
        2 => &[0.0],
        3 => &[-0.43072729929545756, 0.43072729929545744],
        4 => &[-0.67448975019608171, 0.0, 0.67448975019608171],
        5 => &[
            -0.84162123357291418,
            -0.25334710313579972,
            0.25334710313579972,
            0.8416212335729143,
        ],
        6 => &[
            -0.96742156610170105,
            -0.43072729929545756,
            0.0,
            0.43072729929545744,
            0.96742156610170105,
        ],
        7 => &[
            -1.0675705238781414,
            -0.56594882193286311,
            -0.1800123697927051,
            0.18001236979270496,
            0.56594882193286311,
            1.0675705238781412,
        ],
        8 => &[
            -1.1503493803760079,
            -0.67448975019608171,
            -0.31863936396437514,
            0.0,
            0.31863936396437514,
            0.67448975019608171,
            1.1503493803760079,
        ],
        9 => &[
            -1.2206403488473501,
            -0.7647096737863871,
            -0.43072729929545756,
            -0.13971029888186212,
            0.13971029888186212,
            0.43072729929545744,
            0.7647096737863871,
            1.2206403488473496,
        ],
        10 => &[
            -1.2815515655446004,
            -0.84162123357291418,
            -0.52440051270804089,
            -0.25334710313579972,
            0.0,
            0.25334710313579972,
            0.52440051270804067,
            0.8416212335729143,
            1.2815515655446004,
        ],
        11 => &[
            -1.335177736118937,
            -0.90845786853738508,
            -0.60458534658323715,
            -0.34875569551704472,
            -0.11418529432142838,
            0.11418529432142824,
            0.34875569551704472,
            0.60458534658323715,
            0.9084578685373853,
            1.3351777361189363,
        ],
        12 => &[
            -1.3829941271006381,
            -0.96742156610170105,
            -0.67448975019608171,
            -0.43072729929545756,
            -0.2104283942479247,
            0.0,
            0.21042839424792484,
            0.43072729929545744,
            0.67448975019608171,
            0.96742156610170105,
            1.3829941271006381,
        ],
        13 => &[
            -1.4260768722728474,
            -1.0200762327862014,
            -0.73631591737612945,
            -0.50240222337335549,
            -0.29338123212119327,
            -0.096558615289639077,
            0.096558615289639077,
            0.29338123212119344,
            0.50240222337335549,
            0.73631591737612967,
            1.0200762327862014,
            1.4260768722728474,
        ],
        14 => &[
            -1.465233792685523,
            -1.0675705238781414,
            -0.79163860774337458,
            -0.56594882193286311,
            -0.36610635680056963,
            -0.1800123697927051,
            0.0,
            0.18001236979270496,
            0.3661063568005698,
            0.56594882193286311,
            0.79163860774337458,
            1.0675705238781412,
            1.465233792685523,
        ],
        15 => &[
            -1.5010859460440249,
            -1.1107716166367854,
            -0.84162123357291418,
            -0.62292572321008777,
            -0.43072729929545756,
            -0.25334710313579972,
            -0.083651733907129086,
            0.083651733907129086,
            0.25334710313579972,
            0.43072729929545744,
            0.62292572321008766,
            0.8416212335729143,
            1.1107716166367854,
            1.5010859460440249,
        ],
        16 => &[
            -1.5341205443525463,
            -1.1503493803760079,
            -0.88714655901887596,
            -0.67448975019608171,
            -0.48877641111466952,
            -0.31863936396437514,
            -0.1573106846101707,
            0.0,
            0.1573106846101707,
            0.31863936396437514,
            0.48877641111466952,
            0.67448975019608171,
            0.88714655901887596,
            1.1503493803760079,
            1.5341205443525463,
        ],
        17 => &[
            -1.5647264713617988,
            -1.1868314327558185,
            -0.9288994916472707,
            -0.7215222839823433,
            -0.54139508512908774,
            -0.37739194382855384,
            -0.2230078309403668,
            -0.073791273808272689,
            0.073791273808272689,
            0.2230078309403668,
            0.37739194382855396,
            0.54139508512908796,
            0.72152228398234319,
            0.9288994916472707,
            1.1868314327558185,
            1.5647264713617985,
        ],
        18 => &[
            -1.5932188180230507,
            -1.2206403488473501,
            -0.96742156610170105,
            -0.7647096737863871,
            -0.58945579784977831,
            -0.43072729929545756,
            -0.28221614706250814,
            -0.13971029888186212,
            0.0,
            0.13971029888186212,
            0.28221614706250825,
            0.43072729929545744,
            0.58945579784977831,
            0.7647096737863871,
            0.96742156610170105,
            1.2206403488473496,
            1.59321881802305,
        ],
        19 => &[
            -1.6198562586382699,
            -1.2521195202652196,
            -1.0031479676625337,
            -0.80459638036030023,
            -0.63364000077970106,
            -0.47950565333095019,
            -0.33603814037182317,
            -0.199201324789267,
            -0.066011812375840737,
            0.066011812375840598,
            0.199201324789267,
            0.33603814037182306,
            0.47950565333095019,
            0.63364000077970095,
            0.80459638036030023,
            1.0031479676625337,
            1.2521195202652196,
            1.6198562586382697,
        ],
        20 => &[
            -1.6448536269514729,
            -1.2815515655446004,
            -1.0364333894937898,
            -0.84162123357291418,
            -0.67448975019608171,
            -0.52440051270804089,
            -0.38532046640756773,
            -0.25334710313579972,
            -0.12566134685507402,
            0.0,
            0.12566134685507416,
            0.25334710313579972,
            0.38532046640756773,
            0.52440051270804067,
            0.67448975019608171,
            0.8416212335729143,
            1.0364333894937898,
            1.2815515655446004,
            1.6448536269514722,
        ],
        other => unreachable!("alphabet {other} rejected by SaxParams::new"),
    }
}

/// Symbol index: the number of breakpoints at or below `v`.
fn symbolize(v: f64, alphabet: usize) -> usize {
    breakpoints(alphabet).iter().take_while(|&&b| b <= v).count()
}

/// Per-trajectory SAX word over absolute time: segment boundaries plus the
/// (x, y) symbol pair of each equal-duration segment.
#[derive(Debug, Clone)]
pub(crate) struct SaxWord {
    /// word_length + 1 boundaries in seconds.
    pub bounds: Vec<f64>,
    pub symbols: Vec<(usize, usize)>,
}

/// Piecewise aggregate means over `word_length` equal-duration segments.
/// Empty segments inherit the previous segment's mean.
fn paa_means(pts: &[Point], word_length: usize) -> (Vec<f64>, Vec<(f64, f64)>) {
    let t0 = pts[0].t.expect("validated");
    let t1 = pts[pts.len() - 1].t.expect("validated");
    let span = t1 - t0;
    let bounds: Vec<f64> = (0..=word_length)
        .map(|k| t0 + span * k as f64 / word_length as f64)
        .collect();
    let mut sums = vec![(0.0, 0.0, 0usize); word_length];
    for p in pts {
        let t = p.t.expect("validated");
        let mut k = if span > 0.0 {
            (((t - t0) / span) * word_length as f64) as usize
        } else {
            0
        };
        if k >= word_length {
            k = word_length - 1;
        }
        sums[k].0 += p.x;
        sums[k].1 += p.y;
        sums[k].2 += 1;
    }
    let mut means = Vec::with_capacity(word_length);
    let mut last = (pts[0].x, pts[0].y);
    for &(sx, sy, n) in &sums {
        if n > 0 {
            last = (sx / n as f64, sy / n as f64);
        }
        means.push(last);
    }
    (bounds, means)
}

/// Symbolizes both trajectories with z-normalization statistics shared by
/// the pair, so symbol distance reflects absolute spatial proximity.
pub(crate) fn sax_words(a: &[Point], b: &[Point], params: &SaxParams) -> (SaxWord, SaxWord) {
    let (bounds_a, means_a) = paa_means(a, params.word_length);
    let (bounds_b, means_b) = paa_means(b, params.word_length);

    let dim_stats = |sel: fn(&(f64, f64)) -> f64| {
        let vals: Vec<f64> = means_a.iter().chain(means_b.iter()).map(sel).collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        (mean, var.sqrt())
    };
    let (mx, sx) = dim_stats(|m| m.0);
    let (my, sy) = dim_stats(|m| m.1);
    let znorm = |v: f64, mean: f64, sd: f64| if sd > 1e-12 { (v - mean) / sd } else { 0.0 };

    let word = |bounds: Vec<f64>, means: &[(f64, f64)]| SaxWord {
        bounds,
        symbols: means
            .iter()
            .map(|&(x, y)| {
                (
                    symbolize(znorm(x, mx, sx), params.alphabet),
                    symbolize(znorm(y, my, sy), params.alphabet),
                )
            })
            .collect(),
    };
    (word(bounds_a, &means_a), word(bounds_b, &means_b))
}

#[inline]
pub(crate) fn sar_segment_pair(
    wa: &SaxWord,
    wb: &SaxWord,
    k: usize,
    l: usize,
    threshold: usize,
) -> f64 {
    let overlap = wa.bounds[k + 1].min(wb.bounds[l + 1]) - wa.bounds[k].max(wb.bounds[l]);
    if overlap <= 0.0 {
        return 0.0;
    }
    let (ax, ay) = wa.symbols[k];
    let (bx, by) = wb.symbols[l];
    let sym_dist = ax.abs_diff(bx).max(ay.abs_diff(by));
    if sym_dist <= threshold {
        overlap
    } else {
        0.0
    }
}

/// SAX-based duration similarity: total time during which the two
/// trajectories' aligned segments carry symbols within the threshold.
pub fn sar(a: &[Point], b: &[Point], params: &SaxParams) -> Result<f64> {
    require_timestamps("sar", a, b)?;
    let (wa, wb) = sax_words(a, b, params);
    let mut total = 0.0;
    for k in 0..params.word_length {
        for l in 0..params.word_length {
            total += sar_segment_pair(&wa, &wb, k, l, params.symbol_threshold);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn tpts(coords: &[(f64, f64, f64)]) -> Vec<Point> {
        coords
            .iter()
            .map(|&(x, y, t)| Point::timestamped(x, y, t))
            .collect()
    }

    #[test]
    fn spd_examples() {
        let a = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = pts(&[(0.0, 1.0), (1.0, 1.0)]);
        assert_eq!(spd(&a, &b).unwrap(), 2.0);
        assert_eq!(spd(&a, &a).unwrap(), 0.0);
        assert_eq!(spd(&pts(&[(0.0, 0.0)]), &pts(&[(3.0, 4.0)])).unwrap(), 5.0);
        assert!(matches!(
            spd(&a, &pts(&[(0.0, 0.0)])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn cdds_examples() {
        let a = tpts(&[(0.0, 0.0, 0.0), (0.0, 0.0, 10.0)]);
        let b = tpts(&[(0.1, 0.0, 0.0), (0.2, 0.0, 10.0)]);
        // one interval, both endpoint pairs within eps
        assert_eq!(cdds(&a, &b, 1.0).unwrap(), 10.0);

        let disjoint = tpts(&[(0.0, 0.0, 100.0), (0.0, 0.0, 110.0)]);
        assert_eq!(cdds(&a, &disjoint, 1.0).unwrap(), 0.0);

        let walk = tpts(&[(0.0, 0.0, 0.0), (1.0, 2.0, 3.0), (4.0, 4.0, 9.0)]);
        assert_eq!(cdds(&walk, &walk, 0.0).unwrap(), 9.0);

        assert!(matches!(
            cdds(&a, &pts(&[(0.0, 0.0)]), 1.0),
            Err(Error::TimestampsRequired { .. })
        ));
    }

    #[test]
    fn cdds_breaks_interval_on_far_sample() {
        let a = tpts(&[(0.0, 0.0, 0.0), (0.0, 0.0, 5.0), (0.0, 0.0, 10.0)]);
        let b = tpts(&[(0.0, 0.0, 0.0), (9.0, 0.0, 5.0), (0.0, 0.0, 10.0)]);
        // middle pair is 9 apart, so neither adjacent interval counts
        assert_eq!(cdds(&a, &b, 1.0).unwrap(), 0.0);
        assert_eq!(cdds(&a, &b, 10.0).unwrap(), 10.0);
    }

    #[test]
    fn sar_identity_covers_full_duration() {
        let a = tpts(&[(0.0, 0.0, 0.0), (3.0, 1.0, 4.0), (5.0, 2.0, 8.0), (9.0, 3.0, 16.0)]);
        let params = SaxParams::default();
        let v = sar(&a, &a, &params).unwrap();
        assert!((v - 16.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn sar_no_temporal_overlap_is_zero() {
        let a = tpts(&[(0.0, 0.0, 0.0), (1.0, 0.0, 10.0)]);
        let b = tpts(&[(0.0, 0.0, 20.0), (1.0, 0.0, 30.0)]);
        assert_eq!(sar(&a, &b, &SaxParams::default()).unwrap(), 0.0);
    }

    #[test]
    fn sar_distant_constant_trajectories_score_zero() {
        // Both trajectories are constant; shared z-normalization puts them at
        // z = -1 and z = +1, i.e. symbols 0 and 3 of a 4-letter alphabet.
        let a = tpts(&[(0.0, 0.0, 0.0), (0.0, 0.0, 10.0)]);
        let b = tpts(&[(100.0, 100.0, 0.0), (100.0, 100.0, 10.0)]);
        let params = SaxParams::new(8, 4, 0).unwrap();
        assert_eq!(sar(&a, &b, &params).unwrap(), 0.0);
        // and a generous threshold admits the full overlap again
        let loose = SaxParams::new(8, 4, 3).unwrap();
        assert_eq!(sar(&a, &b, &loose).unwrap(), 10.0);
    }

    #[test]
    fn sar_rejects_bad_inputs() {
        let a = tpts(&[(0.0, 0.0, 0.0)]);
        assert!(matches!(
            sar(&a, &pts(&[(0.0, 0.0)]), &SaxParams::default()),
            Err(Error::TimestampsRequired { .. })
        ));
        assert!(SaxParams::new(8, 1, 0).is_err());
        assert!(SaxParams::new(8, 21, 0).is_err());
        assert!(SaxParams::new(0, 4, 0).is_err());
    }

    #[test]
    fn symbol_assignment_follows_breakpoints() {
        // alphabet 4 breakpoints: -0.674.., 0, +0.674..
        assert_eq!(symbolize(-1.0, 4), 0);
        assert_eq!(symbolize(-0.5, 4), 1);
        assert_eq!(symbolize(0.0, 4), 2);
        assert_eq!(symbolize(0.5, 4), 2);
        assert_eq!(symbolize(1.0, 4), 3);
    }
}
