//! Sequential reference implementations of the non-learned similarity
//! measures, grouped by computational class: linear scan, dynamic
//! programming, and enumeration.

pub mod dp;
pub mod enumeration;
pub mod scan;

pub use dp::{dtw, edr, erp, frechet_discrete, lcss, score_matrix, stedr, ScoreMatrix};
pub use enumeration::{hausdorff, owd};
pub use scan::{cdds, sar, spd, SaxParams};

use crate::error::{Error, Result};
use crate::model::{Point, Trajectory};

/// The measure identifiers supported by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    Spd,
    Cdds,
    Sar,
    Dtw,
    #[serde(rename = "frechet")]
    FrechetDiscrete,
    Lcss,
    Edr,
    Erp,
    Stedr,
    Hausdorff,
    Owd,
}

/// How point matches are computed, which decides the parallel meta-algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureClass {
    LinearScan,
    DynamicProgramming,
    Enumeration,
}

/// Whether higher scores mean more similar trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    LargerIsSimilar,
    SmallerIsSimilar,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 11] = [
        MeasureKind::Spd,
        MeasureKind::Cdds,
        MeasureKind::Sar,
        MeasureKind::Dtw,
        MeasureKind::FrechetDiscrete,
        MeasureKind::Lcss,
        MeasureKind::Edr,
        MeasureKind::Erp,
        MeasureKind::Stedr,
        MeasureKind::Hausdorff,
        MeasureKind::Owd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::Spd => "spd",
            MeasureKind::Cdds => "cdds",
            MeasureKind::Sar => "sar",
            MeasureKind::Dtw => "dtw",
            MeasureKind::FrechetDiscrete => "frechet",
            MeasureKind::Lcss => "lcss",
            MeasureKind::Edr => "edr",
            MeasureKind::Erp => "erp",
            MeasureKind::Stedr => "stedr",
            MeasureKind::Hausdorff => "hausdorff",
            MeasureKind::Owd => "owd",
        }
    }

    pub fn class(self) -> MeasureClass {
        match self {
            MeasureKind::Spd | MeasureKind::Cdds | MeasureKind::Sar => MeasureClass::LinearScan,
            MeasureKind::Dtw
            | MeasureKind::FrechetDiscrete
            | MeasureKind::Lcss
            | MeasureKind::Edr
            | MeasureKind::Erp
            | MeasureKind::Stedr => MeasureClass::DynamicProgramming,
            MeasureKind::Hausdorff | MeasureKind::Owd => MeasureClass::Enumeration,
        }
    }

    /// CDDS, SAR and LCSS grow with similarity; everything else is a distance.
    pub fn orientation(self) -> Orientation {
        match self {
            MeasureKind::Cdds | MeasureKind::Sar | MeasureKind::Lcss => Orientation::LargerIsSimilar,
            _ => Orientation::SmallerIsSimilar,
        }
    }

    pub fn needs_timestamps(self) -> bool {
        matches!(self, MeasureKind::Cdds | MeasureKind::Sar | MeasureKind::Stedr)
    }
}

impl std::str::FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown measure {s:?}")))
    }
}

/// Per-measure parameters; fields are only consulted by the measures that
/// need them.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct MeasureParams {
    /// Spatial matching threshold for LCSS, EDR, STEDR and CDDS.
    pub eps_spatial: Option<f64>,
    /// Temporal matching threshold in seconds for STEDR.
    pub eps_temporal: Option<f64>,
    /// ERP gap point coordinates.
    pub gap_point: Option<(f64, f64)>,
    pub sax_word_length: Option<usize>,
    pub sax_alphabet: Option<usize>,
    pub sax_symbol_threshold: Option<usize>,
}

impl MeasureParams {
    pub fn with_eps(eps: f64) -> Self {
        MeasureParams {
            eps_spatial: Some(eps),
            ..Default::default()
        }
    }

    pub fn with_gap(x: f64, y: f64) -> Self {
        MeasureParams {
            gap_point: Some((x, y)),
            ..Default::default()
        }
    }
}

/// A measure identifier bundled with validated parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MeasureSpec {
    pub kind: MeasureKind,
    pub params: MeasureParams,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind, params: MeasureParams) -> Result<Self> {
        let spec = MeasureSpec { kind, params };
        spec.validate()?;
        Ok(spec)
    }

    /// A spec for measures that take no parameters.
    pub fn plain(kind: MeasureKind) -> Result<Self> {
        MeasureSpec::new(kind, MeasureParams::default())
    }

    pub fn validate(&self) -> Result<()> {
        let need = |opt: Option<f64>, param: &'static str| -> Result<f64> {
            opt.ok_or(Error::MissingParam {
                measure: self.kind.name(),
                param,
            })
        };
        let non_negative = |v: f64, param: &str| -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!(
                    "{} {param} must be finite and >= 0, got {v}",
                    self.kind.name()
                )))
            }
        };
        match self.kind {
            MeasureKind::Lcss | MeasureKind::Edr | MeasureKind::Cdds => {
                non_negative(need(self.params.eps_spatial, "eps_spatial")?, "eps_spatial")?;
            }
            MeasureKind::Stedr => {
                non_negative(need(self.params.eps_spatial, "eps_spatial")?, "eps_spatial")?;
                non_negative(need(self.params.eps_temporal, "eps_temporal")?, "eps_temporal")?;
            }
            MeasureKind::Erp => {
                let (x, y) = self.params.gap_point.ok_or(Error::MissingParam {
                    measure: "erp",
                    param: "gap_point",
                })?;
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "erp gap point must be finite, got ({x}, {y})"
                    )));
                }
            }
            MeasureKind::Sar => {
                // SAR falls back to the documented defaults when unset.
                self.sax_params()?;
            }
            _ => {}
        }
        Ok(())
    }

    pub(crate) fn eps(&self) -> f64 {
        self.params.eps_spatial.expect("validated")
    }

    pub(crate) fn eps_t(&self) -> f64 {
        self.params.eps_temporal.expect("validated")
    }

    pub(crate) fn gap(&self) -> Point {
        let (x, y) = self.params.gap_point.expect("validated");
        Point::new(x, y)
    }

    pub(crate) fn sax_params(&self) -> Result<SaxParams> {
        SaxParams::new(
            self.params.sax_word_length.unwrap_or(SaxParams::DEFAULT_WORD_LENGTH),
            self.params.sax_alphabet.unwrap_or(SaxParams::DEFAULT_ALPHABET),
            self.params
                .sax_symbol_threshold
                .unwrap_or(SaxParams::DEFAULT_SYMBOL_THRESHOLD),
        )
    }
}

/// Evaluates `spec` on a pair of point sequences with the sequential kernels.
pub fn evaluate(spec: &MeasureSpec, a: &[Point], b: &[Point]) -> Result<f64> {
    spec.validate()?;
    match spec.kind {
        MeasureKind::Spd => spd(a, b),
        MeasureKind::Cdds => cdds(a, b, spec.eps()),
        MeasureKind::Sar => sar(a, b, &spec.sax_params()?),
        MeasureKind::Dtw => dtw(a, b),
        MeasureKind::FrechetDiscrete => frechet_discrete(a, b),
        MeasureKind::Lcss => lcss(a, b, spec.eps()).map(|v| v as f64),
        MeasureKind::Edr => edr(a, b, spec.eps()).map(|v| v as f64),
        MeasureKind::Erp => erp(a, b, &spec.gap()),
        MeasureKind::Stedr => stedr(a, b, spec.eps(), spec.eps_t()).map(|v| v as f64),
        MeasureKind::Hausdorff => hausdorff(a, b),
        MeasureKind::Owd => owd(a, b),
    }
}

/// Convenience wrapper over [`evaluate`] for dataset trajectories.
pub fn evaluate_trajectories(spec: &MeasureSpec, a: &Trajectory, b: &Trajectory) -> Result<f64> {
    evaluate(spec, a.points(), b.points())
}

pub(crate) fn require_timestamps(measure: &'static str, a: &[Point], b: &[Point]) -> Result<()> {
    if a.iter().chain(b.iter()).all(|p| p.t.is_some()) {
        Ok(())
    } else {
        Err(Error::TimestampsRequired { measure })
    }
}
