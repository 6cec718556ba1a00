//! Timing decomposition and benchmark report types. Reports serialize to
//! JSON with these exact field names; docs/report-schema.md documents the
//! layout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pre-processing / embedding / computation time split of one run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TimingBreakdown {
    /// Input pre-processing seconds.
    pub pre_s: f64,
    /// Embedding seconds; zero for non-learned measures.
    pub emb_s: f64,
    /// Similarity computation / index scan seconds.
    pub cmp_s: f64,
    /// Wall-clock seconds of the whole run.
    pub total_s: f64,
}

impl TimingBreakdown {
    pub fn validate(&self) -> Result<()> {
        let parts = [self.pre_s, self.emb_s, self.cmp_s, self.total_s];
        if parts.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Validation(format!("negative or non-finite timing: {self:?}")));
        }
        let max_part = self.pre_s.max(self.emb_s).max(self.cmp_s);
        // generous slack: components are timed inside the total
        if self.total_s + 1e-6 < max_part {
            return Err(Error::Validation(format!(
                "total_s {} below largest component {max_part}",
                self.total_s
            )));
        }
        Ok(())
    }

    pub fn mean(runs: &[TimingBreakdown]) -> TimingBreakdown {
        let n = runs.len().max(1) as f64;
        TimingBreakdown {
            pre_s: runs.iter().map(|r| r.pre_s).sum::<f64>() / n,
            emb_s: runs.iter().map(|r| r.emb_s).sum::<f64>() / n,
            cmp_s: runs.iter().map(|r| r.cmp_s).sum::<f64>() / n,
            total_s: runs.iter().map(|r| r.total_s).sum::<f64>() / n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub source: String,
    pub trajectories: usize,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexDescriptor {
    pub kind: String,
    pub metric: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nlist: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nprobe: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AccuracyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// Mean HR@k over the query set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hr_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hr_per_query: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rand_index: Option<f64>,
    /// Positives-only variant: ground-truth co-clustered pairs recovered.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rand_index_positive: Option<f64>,
}

/// One experiment run: configuration, timing decomposition per repetition,
/// their mean, and accuracy metrics when applicable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    /// "sim" | "knn" | "cluster" | "embed" | "index"
    pub experiment: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_params: Option<crate::measures::MeasureParams>,
    pub dataset: DatasetDescriptor,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub workers: usize,
    pub workers_per_pair: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<IndexDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub reps: usize,
    /// One timing decomposition per repetition.
    pub runs: Vec<TimingBreakdown>,
    /// Mean of `runs`.
    pub timing: TimingBreakdown,
    /// Process and data setup outside the measured calls.
    pub setup_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_build_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_truth_s: Option<f64>,
    /// One-off embedding time reused across clustering iterations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embed_once_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clustering_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accuracy: Option<AccuracyReport>,
}

impl BenchReport {
    pub fn new(experiment: &str, dataset: DatasetDescriptor) -> Self {
        BenchReport {
            experiment: experiment.to_string(),
            status: "ok".to_string(),
            measure: None,
            measure_params: None,
            dataset,
            mode: None,
            workers: 1,
            workers_per_pair: 1,
            assignment: None,
            pairs: None,
            batch_size: None,
            queries: None,
            k: None,
            d: None,
            index: None,
            seed: None,
            reps: 1,
            runs: Vec::new(),
            timing: TimingBreakdown::default(),
            setup_s: 0.0,
            index_build_s: None,
            ground_truth_s: None,
            embed_once_s: None,
            clustering_s: None,
            accuracy: None,
        }
    }

    /// Records the repetition timings and their mean.
    pub fn set_runs(&mut self, runs: Vec<TimingBreakdown>) {
        self.timing = TimingBreakdown::mean(&runs);
        self.reps = runs.len();
        self.runs = runs;
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 || self.runs.len() != self.reps {
            return Err(Error::Validation(format!(
                "reps {} inconsistent with {} recorded runs",
                self.reps,
                self.runs.len()
            )));
        }
        if self.status != "ok" && self.status != "OT" {
            return Err(Error::Validation(format!("unknown status {:?}", self.status)));
        }
        for run in &self.runs {
            run.validate()?;
        }
        let mean = TimingBreakdown::mean(&self.runs);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
        if !(close(mean.pre_s, self.timing.pre_s)
            && close(mean.emb_s, self.timing.emb_s)
            && close(mean.cmp_s, self.timing.cmp_s)
            && close(mean.total_s, self.timing.total_s))
        {
            return Err(Error::Validation("timing is not the mean of runs".into()));
        }
        if !self.setup_s.is_finite() || self.setup_s < 0.0 {
            return Err(Error::Validation(format!("bad setup_s {}", self.setup_s)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("bad report json: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(pre: f64, cmp: f64) -> TimingBreakdown {
        TimingBreakdown {
            pre_s: pre,
            emb_s: 0.0,
            cmp_s: cmp,
            total_s: pre + cmp + 0.001,
        }
    }

    #[test]
    fn report_round_trips_and_validates() {
        let mut report = BenchReport::new(
            "sim",
            DatasetDescriptor {
                source: "synthetic".into(),
                trajectories: 10,
                points: 100,
            },
        );
        report.measure = Some("dtw".into());
        report.set_runs(vec![run(0.1, 0.5), run(0.2, 0.4)]);
        report.validate().unwrap();
        let parsed = BenchReport::from_json(&report.to_json()).unwrap();
        assert_eq!(parsed, report);
        assert_eq!(parsed.reps, 2);
        assert!((parsed.timing.cmp_s - 0.45).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_inconsistency() {
        let mut report = BenchReport::new(
            "sim",
            DatasetDescriptor {
                source: "x".into(),
                trajectories: 1,
                points: 1,
            },
        );
        report.set_runs(vec![run(0.1, 0.5)]);
        report.timing.cmp_s = 99.0;
        assert!(report.validate().is_err());
        report.set_runs(vec![TimingBreakdown {
            pre_s: -1.0,
            ..Default::default()
        }]);
        assert!(report.validate().is_err());
        report.set_runs(vec![run(0.0, 0.0)]);
        report.status = "weird".into();
        assert!(report.validate().is_err());
    }
}
