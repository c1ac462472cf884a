//! Occupancy fields: batch-queryable point to inside/outside functions.
//!
//! A field reports a raw value per point; the label is `raw > iso_level`.
//! Binary fields report exactly 0.0 or 1.0. Continuous fields (logistic
//! smoothing, interpolated voxels) report values in `[0, 1]` that the
//! alignment metric and the linear-interpolation baseline can use.

mod analytic;
mod csg;
mod eval;
mod smooth;
mod voxels;
mod winding;

use std::sync::Arc;

pub use analytic::{AnalyticField, Shape};
pub use csg::CsgField;
pub use eval::{EvalStats, Evaluator, Stage, StageCount};
pub use smooth::SmoothedOccupancy;
pub use voxels::VoxelField;
pub use winding::{solid_angle, winding_number, MeshWindingField};

use crate::error::{Error, Result};
use crate::Point;

pub const DEFAULT_ISO_LEVEL: f64 = 0.5;

pub trait OccupancyField: Send + Sync {
    /// Writes one raw value per point into `out` (same length as `points`).
    fn eval_raw(&self, points: &[Point], out: &mut [f64]);

    fn iso_level(&self) -> f64 {
        DEFAULT_ISO_LEVEL
    }

    /// True when raw values carry more than the binary label.
    fn is_continuous(&self) -> bool {
        false
    }

    /// Signed distance (negative inside) when the field knows it.
    fn signed_distance(&self, _p: &Point) -> Option<f64> {
        None
    }
}

pub type SharedField = Arc<dyn OccupancyField>;

impl<F: OccupancyField + ?Sized> OccupancyField for Arc<F> {
    fn eval_raw(&self, points: &[Point], out: &mut [f64]) {
        (**self).eval_raw(points, out)
    }
    fn iso_level(&self) -> f64 {
        (**self).iso_level()
    }
    fn is_continuous(&self) -> bool {
        (**self).is_continuous()
    }
    fn signed_distance(&self, p: &Point) -> Option<f64> {
        (**self).signed_distance(p)
    }
}

/// Thresholds a raw value. A value exactly at the iso level is outside.
#[inline]
pub fn label_of(raw: f64, iso_level: f64) -> u8 {
    u8::from(raw > iso_level)
}

pub fn eval_labels(field: &dyn OccupancyField, points: &[Point]) -> Result<Vec<u8>> {
    if let Some(index) = points.iter().position(|p| !p.coords.iter().all(|c| c.is_finite())) {
        return Err(Error::NonFinitePoint { index });
    }
    let mut raw = vec![0.0; points.len()];
    field.eval_raw(points, &mut raw);
    let iso = field.iso_level();
    Ok(raw.into_iter().map(|r| label_of(r, iso)).collect())
}

/// Convenience single-point raw query.
pub fn eval_raw_one(field: &dyn OccupancyField, p: Point) -> f64 {
    let mut out = [0.0];
    field.eval_raw(&[p], &mut out);
    out[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    fn sphere() -> AnalyticField {
        AnalyticField::new(Shape::Sphere {
            center: Point::new(0.5, 0.5, 0.5),
            radius: 0.3,
        })
    }

    #[test]
    fn sphere_center_inside_and_far_point_outside() {
        let s = sphere();
        let labels = eval_labels(&s, &[Point::new(0.5, 0.5, 0.5), Point::new(0.99, 0.5, 0.5)]).unwrap();
        assert_eq!(labels, vec![1, 0]);
    }

    #[test]
    fn union_takes_max_label() {
        let a = sphere();
        let b = AnalyticField::new(Shape::Sphere {
            center: Point::new(2.0, 0.0, 0.0),
            radius: 0.5,
        });
        let u = CsgField::union(vec![Arc::new(a), Arc::new(b)]);
        let labels = eval_labels(&u, &[Point::new(2.1, 0.0, 0.0)]).unwrap();
        assert_eq!(labels, vec![1]);
    }

    #[test]
    fn non_finite_point_reports_index() {
        let s = sphere();
        let err = eval_labels(&s, &[Point::origin(), Point::new(f64::NAN, 0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFinitePoint { index: 1 }));
    }

    #[test]
    fn exact_iso_is_outside() {
        assert_eq!(label_of(0.5, 0.5), 0);
        assert_eq!(label_of(0.5000001, 0.5), 1);
    }

    #[test]
    fn evaluation_is_order_independent() {
        let s = SmoothedOccupancy::new(Arc::new(sphere()), 7.0).unwrap();
        let pts: Vec<Point> = (0..50)
            .map(|i| Point::from(Vector3::new(i as f64 * 0.02, 0.3, 0.6)))
            .collect();
        let mut fwd = vec![0.0; pts.len()];
        s.eval_raw(&pts, &mut fwd);
        let rev_pts: Vec<Point> = pts.iter().rev().copied().collect();
        let mut rev = vec![0.0; pts.len()];
        s.eval_raw(&rev_pts, &mut rev);
        rev.reverse();
        assert_eq!(fwd, rev);
    }
}
