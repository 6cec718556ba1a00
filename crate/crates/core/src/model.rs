//! Trajectory data model: points, trajectories, datasets, CSV ingestion and
//! the synthetic random-walk generator.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A single trajectory sample: planar coordinates plus an optional timestamp
/// in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub t: Option<f64>,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y, t: None }
    }

    pub fn timestamped(x: f64, y: f64, t: f64) -> Self {
        Point { x, y, t: Some(t) }
    }

    fn validate(&self) -> Result<()> {
        if !self.x.is_finite() || !self.y.is_finite() {
            return Err(Error::Validation(format!(
                "non-finite coordinates ({}, {})",
                self.x, self.y
            )));
        }
        if let Some(t) = self.t {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::Validation(format!("invalid timestamp {t}")));
            }
        }
        Ok(())
    }
}

/// Euclidean distance between two points, ignoring timestamps.
///
/// Every measure kernel goes through this single definition so that the
/// sequential and parallel paths evaluate bit-identical expressions.
#[inline]
pub fn euclid(a: &Point, b: &Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    (dx * dx + dy * dy).sqrt()
}

/// An ordered sequence of points sharing one timestamping convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    id: String,
    points: Vec<Point>,
}

impl Trajectory {
    /// Builds a trajectory, enforcing the type invariants: at least one
    /// point, finite values, all-or-none timestamps, non-decreasing time.
    pub fn new(id: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        let id = id.into();
        if points.is_empty() {
            return Err(Error::Validation(format!("trajectory {id} has no points")));
        }
        let timestamped = points[0].t.is_some();
        let mut last_t = f64::NEG_INFINITY;
        for p in &points {
            p.validate()?;
            match (timestamped, p.t) {
                (true, Some(t)) => {
                    if t < last_t {
                        return Err(Error::Validation(format!(
                            "trajectory {id}: timestamps decrease ({last_t} then {t})"
                        )));
                    }
                    last_t = t;
                }
                (false, None) => {}
                _ => {
                    return Err(Error::Validation(format!(
                        "trajectory {id} mixes timestamped and untimestamped points"
                    )));
                }
            }
        }
        Ok(Trajectory { id, points })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_timestamped(&self) -> bool {
        self.points[0].t.is_some()
    }

    /// Total time span in seconds; zero for untimestamped trajectories.
    pub fn duration(&self) -> f64 {
        match (self.points.first().and_then(|p| p.t), self.points.last().and_then(|p| p.t)) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }
}

/// Where a dataset came from, for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMeta {
    pub source: String,
}

/// An immutable collection of trajectories with unique ids.
#[derive(Debug, Clone)]
pub struct Dataset {
    trajectories: Vec<Trajectory>,
    index: HashMap<String, usize>,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn new(trajectories: Vec<Trajectory>, source: impl Into<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(trajectories.len());
        for (i, t) in trajectories.iter().enumerate() {
            if index.insert(t.id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate trajectory id {}", t.id)));
            }
        }
        Ok(Dataset {
            trajectories,
            index,
            meta: DatasetMeta { source: source.into() },
        })
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn get(&self, i: usize) -> &Trajectory {
        &self.trajectories[i]
    }

    pub fn by_id(&self, id: &str) -> Option<&Trajectory> {
        self.index.get(id).map(|&i| &self.trajectories[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Trajectory> {
        self.trajectories.iter()
    }

    pub fn total_points(&self) -> usize {
        self.trajectories.iter().map(|t| t.len()).sum()
    }

    /// Keeps trajectories with `min_n <= n <= max_n`, preserving order.
    /// Pass `usize::MAX` for an unbounded upper limit.
    pub fn filter_by_length(&self, min_n: usize, max_n: usize) -> Dataset {
        assert!(min_n >= 1 && min_n <= max_n, "require 1 <= min_n <= max_n");
        let kept: Vec<Trajectory> = self
            .trajectories
            .iter()
            .filter(|t| t.len() >= min_n && t.len() <= max_n)
            .cloned()
            .collect();
        Dataset::new(kept, self.meta.source.clone()).expect("ids stay unique under filtering")
    }

    /// Draws `n_pairs` trajectory pairs uniformly with replacement.
    pub fn sample_pairs(&self, n_pairs: usize, seed: u64) -> Result<Vec<(&Trajectory, &Trajectory)>> {
        if self.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot sample pairs from an empty dataset".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.trajectories.len();
        Ok((0..n_pairs)
            .map(|_| {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                (&self.trajectories[i], &self.trajectories[j])
            })
            .collect())
    }
}

const CSV_HEADER: [&str; 4] = ["traj_id", "x", "y", "t"];

/// Reads a dataset from the `traj_id,x,y,t` CSV format. Rows belonging to
/// one trajectory must be contiguous and in sequence order; an empty `t`
/// column marks untimestamped points.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if raw.trim().is_empty() {
        return Dataset::new(Vec::new(), path.display().to_string());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(raw.as_bytes());
    {
        let headers = reader.headers().map_err(|e| Error::Parse {
            path: path.into(),
            line: 1,
            msg: e.to_string(),
        })?;
        if headers != CSV_HEADER.as_slice() {
            return Err(Error::Parse {
                path: path.into(),
                line: 1,
                msg: format!("expected header traj_id,x,y,t, got {headers:?}"),
            });
        }
    }

    let mut trajectories = Vec::new();
    let mut current_id: Option<String> = None;
    let mut points: Vec<Point> = Vec::new();
    let mut flush = |id: Option<String>, pts: &mut Vec<Point>, out: &mut Vec<Trajectory>| -> Result<()> {
        if let Some(id) = id {
            out.push(Trajectory::new(id, std::mem::take(pts))?);
        }
        Ok(())
    };

    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.into(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let parse_err = |msg: String| Error::Parse {
            path: path.into(),
            line,
            msg,
        };
        if record.len() != 4 {
            return Err(parse_err(format!("expected 4 fields, got {}", record.len())));
        }
        let id = record[0].to_string();
        let x: f64 = record[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad x value {:?}", &record[1])))?;
        let y: f64 = record[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad y value {:?}", &record[2])))?;
        let t_field = record[3].trim();
        let t = if t_field.is_empty() {
            None
        } else {
            Some(
                t_field
                    .parse::<f64>()
                    .map_err(|_| parse_err(format!("bad t value {t_field:?}")))?,
            )
        };
        if current_id.as_deref() != Some(&id) {
            flush(current_id.take(), &mut points, &mut trajectories)?;
            current_id = Some(id);
        }
        points.push(Point { x, y, t });
    }
    flush(current_id, &mut points, &mut trajectories)?;
    Dataset::new(trajectories, path.display().to_string())
}

/// Writes a dataset in the CSV format accepted by [`load_csv`].
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    writeln!(buf, "traj_id,x,y,t").expect("vec write");
    for traj in ds.iter() {
        for p in traj.points() {
            match p.t {
                Some(t) => writeln!(buf, "{},{},{},{}", traj.id(), p.x, p.y, t),
                None => writeln!(buf, "{},{},{},", traj.id(), p.x, p.y),
            }
            .expect("vec write");
        }
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

const WALK_BOUND: f64 = 1000.0;
const STEP_MAX: f64 = 5.0;

fn reflect(v: f64) -> f64 {
    if v < 0.0 {
        -v
    } else if v > WALK_BOUND {
        2.0 * WALK_BOUND - v
    } else {
        v
    }
}

/// Generates `count` bounded random-walk trajectories with lengths drawn
/// uniformly from `n_range` (inclusive). Pure function of its arguments.
pub fn generate_synthetic(
    count: usize,
    n_range: (usize, usize),
    seed: u64,
    timestamped: bool,
) -> Dataset {
    let (min_n, max_n) = n_range;
    assert!(min_n >= 1 && min_n <= max_n, "require 1 <= min_n <= max_n");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trajectories = Vec::with_capacity(count);
    for idx in 0..count {
        let n = rng.random_range(min_n..=max_n);
        let mut x: f64 = rng.random_range(0.0..WALK_BOUND);
        let mut y: f64 = rng.random_range(0.0..WALK_BOUND);
        let mut t: f64 = 0.0;
        let mut points = Vec::with_capacity(n);
        for step in 0..n {
            if step > 0 {
                x = reflect(x + rng.random_range(-STEP_MAX..STEP_MAX));
                y = reflect(y + rng.random_range(-STEP_MAX..STEP_MAX));
                if timestamped {
                    t += rng.random_range(1.0..5.0);
                }
            }
            points.push(Point {
                x,
                y,
                t: timestamped.then_some(t),
            });
        }
        trajectories.push(Trajectory::new(format!("s{idx}"), points).expect("generated points are valid"));
    }
    Dataset::new(
        trajectories,
        format!("synthetic(count={count},n=[{min_n},{max_n}],seed={seed},timestamped={timestamped})"),
    )
    .expect("generated ids are unique")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn load_two_untimestamped_points() {
        let f = write_tmp("traj_id,x,y,t\na,0,0,\na,1,0,\n");
        let ds = load_csv(f.path()).unwrap();
        assert_eq!(ds.len(), 1);
        let t = ds.get(0);
        assert_eq!(t.id(), "a");
        assert_eq!(t.points(), &[Point::new(0.0, 0.0), Point::new(1.0, 0.0)]);
    }

    #[test]
    fn load_empty_file() {
        let f = write_tmp("");
        let ds = load_csv(f.path()).unwrap();
        assert_eq!(ds.len(), 0);
        let f = write_tmp("traj_id,x,y,t\n");
        assert_eq!(load_csv(f.path()).unwrap().len(), 0);
    }

    #[test]
    fn load_rejects_decreasing_timestamps() {
        let f = write_tmp("traj_id,x,y,t\na,0,0,5\na,1,0,3\n");
        let err = load_csv(f.path()).unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err}");
    }

    #[test]
    fn load_rejects_mixed_timestamping() {
        let f = write_tmp("traj_id,x,y,t\na,0,0,5\na,1,0,\n");
        assert!(matches!(load_csv(f.path()).unwrap_err(), Error::Validation(_)));
    }

    #[test]
    fn load_reports_line_of_malformed_row() {
        let f = write_tmp("traj_id,x,y,t\na,0,0,\na,oops,0,\n");
        match load_csv(f.path()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("expected parse error, got {e}"),
        }
    }

    #[test]
    fn load_rejects_duplicate_noncontiguous_id() {
        let f = write_tmp("traj_id,x,y,t\na,0,0,\nb,1,0,\na,2,0,\n");
        assert!(matches!(load_csv(f.path()).unwrap_err(), Error::Validation(_)));
    }

    #[test]
    fn csv_round_trip_preserves_dataset() {
        let ds = generate_synthetic(7, (1, 9), 42, true);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.csv");
        write_csv(&ds, &path).unwrap();
        let loaded = load_csv(&path).unwrap();
        assert_eq!(loaded.len(), ds.len());
        for (a, b) in ds.iter().zip(loaded.iter()) {
            assert_eq!(a.id(), b.id());
            assert_eq!(a.points(), b.points());
        }
    }

    #[test]
    fn filter_by_length_bounds() {
        let mk = |id: &str, n: usize| {
            Trajectory::new(id, (0..n).map(|i| Point::new(i as f64, 0.0)).collect()).unwrap()
        };
        let ds = Dataset::new(vec![mk("short", 19), mk("ok", 20), mk("long", 250)], "test").unwrap();
        let kept = ds.filter_by_length(20, 200);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept.get(0).id(), "ok");
        // identity when the bounds are vacuous
        let all = ds.filter_by_length(1, usize::MAX);
        assert_eq!(all.len(), 3);
        assert_eq!(all.get(0).id(), "short");
    }

    #[test]
    fn synthetic_is_deterministic_and_bounded() {
        let a = generate_synthetic(100, (20, 200), 7, false);
        let b = generate_synthetic(100, (20, 200), 7, false);
        assert_eq!(a.len(), 100);
        for (ta, tb) in a.iter().zip(b.iter()) {
            assert_eq!(ta, tb);
            assert!(ta.len() >= 20 && ta.len() <= 200);
            for p in ta.points() {
                assert!(p.x >= 0.0 && p.x <= WALK_BOUND);
                assert!(p.y >= 0.0 && p.y <= WALK_BOUND);
            }
        }
        assert_eq!(generate_synthetic(0, (1, 5), 1, false).len(), 0);
    }

    #[test]
    fn synthetic_timestamps_increase() {
        let ds = generate_synthetic(5, (2, 30), 3, true);
        for traj in ds.iter() {
            let ts: Vec<f64> = traj.points().iter().map(|p| p.t.unwrap()).collect();
            assert_eq!(ts[0], 0.0);
            assert!(ts.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn sample_pairs_behaviour() {
        let ds = generate_synthetic(10, (1, 4), 1, false);
        assert!(ds.sample_pairs(0, 9).unwrap().is_empty());
        let a = ds.sample_pairs(50, 9).unwrap();
        let b = ds.sample_pairs(50, 9).unwrap();
        assert_eq!(a.len(), 50);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.0.id(), y.0.id());
            assert_eq!(x.1.id(), y.1.id());
        }
        let empty = Dataset::new(Vec::new(), "empty").unwrap();
        assert!(empty.sample_pairs(1, 0).is_err());
    }

    #[test]
    fn trajectory_invariants() {
        assert!(Trajectory::new("e", vec![]).is_err());
        assert!(Trajectory::new("nan", vec![Point::new(f64::NAN, 0.0)]).is_err());
        assert!(Trajectory::new("negt", vec![Point::timestamped(0.0, 0.0, -1.0)]).is_err());
        let dup = Dataset::new(
            vec![
                Trajectory::new("a", vec![Point::new(0.0, 0.0)]).unwrap(),
                Trajectory::new("a", vec![Point::new(1.0, 0.0)]).unwrap(),
            ],
            "dup",
        );
        assert!(dup.is_err());
    }
}
