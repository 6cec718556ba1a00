//! Enumeration measures: Hausdorff and OWD examine all point pairs.

use crate::error::{Error, Result};
use crate::model::{euclid, Point};

/// Distance from `p` to the closest point of `traj`.
#[inline]
pub(crate) fn min_dist_to(p: &Point, traj: &[Point]) -> f64 {
    traj.iter().map(|q| euclid(p, q)).fold(f64::INFINITY, f64::min)
}

fn require_non_empty(measure: &'static str, a: &[Point], b: &[Point]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        Err(Error::EmptyTrajectory { measure })
    } else {
        Ok(())
    }
}

pub(crate) fn directed_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    a.iter()
        .map(|p| min_dist_to(p, b))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Symmetric Hausdorff distance.
pub fn hausdorff(a: &[Point], b: &[Point]) -> Result<f64> {
    require_non_empty("hausdorff", a, b)?;
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

pub(crate) fn directed_owd_sum(a: &[Point], b: &[Point]) -> f64 {
    a.iter().map(|p| min_dist_to(p, b)).sum()
}

#[inline]
pub(crate) fn owd_combine(sum_ab: f64, n_a: usize, sum_ba: f64, n_b: usize) -> f64 {
    (sum_ab / n_a as f64 + sum_ba / n_b as f64) / 2.0
}

/// One-way distance, symmetrized as the mean of the two directed averages.
pub fn owd(a: &[Point], b: &[Point]) -> Result<f64> {
    require_non_empty("owd", a, b)?;
    Ok(owd_combine(
        directed_owd_sum(a, b),
        a.len(),
        directed_owd_sum(b, a),
        b.len(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn hausdorff_examples() {
        let a = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = pts(&[(0.0, 1.0), (1.0, 1.0)]);
        // frozen from enumerating all point pairs
        assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&pts(&[(0.0, 0.0)]), &pts(&[(3.0, 4.0)])).unwrap(), 5.0);
        assert!(matches!(hausdorff(&a, &[]), Err(Error::EmptyTrajectory { .. })));
    }

    #[test]
    fn owd_examples() {
        let a = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let b = pts(&[(0.0, 1.0), (1.0, 1.0)]);
        // frozen from enumerating all point pairs and averaging
        assert_eq!(owd(&a, &b).unwrap(), 1.0);
        assert_eq!(owd(&a, &a).unwrap(), 0.0);
        assert_eq!(owd(&pts(&[(0.0, 0.0)]), &pts(&[(3.0, 4.0)])).unwrap(), 5.0);
        assert!(owd(&[], &b).is_err());
    }

    #[test]
    fn hausdorff_is_asymmetric_per_direction() {
        // subset relation: directed distance from the subset is small
        let a = pts(&[(0.0, 0.0)]);
        let b = pts(&[(0.0, 0.0), (10.0, 0.0)]);
        assert_eq!(directed_hausdorff(&a, &b), 0.0);
        assert_eq!(directed_hausdorff(&b, &a), 10.0);
        assert_eq!(hausdorff(&a, &b).unwrap(), 10.0);
    }
}
