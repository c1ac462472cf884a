use super::{OccupancyField, SharedField};
use crate::error::{Error, Result};
use crate::Point;

/// Logistic occupancy `1 / (1 + exp(k d))` over a field with signed distance.
///
/// The 0.5 level coincides with the zero set of `d`, so labels agree with the
/// base field everywhere `d != 0`.
pub struct SmoothedOccupancy {
    base: SharedField,
    sharpness: f64,
}

impl SmoothedOccupancy {
    pub fn new(base: SharedField, sharpness: f64) -> Result<Self> {
        if !(sharpness.is_finite() && sharpness > 0.0) {
            return Err(Error::Config(format!("smoothing sharpness must be positive, got {sharpness}")));
        }
        if base.signed_distance(&Point::origin()).is_none() {
            return Err(Error::Config("smoothed occupancy needs a base field with signed distance".into()));
        }
        Ok(Self { base, sharpness })
    }

    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    #[inline]
    pub fn logistic(sharpness: f64, d: f64) -> f64 {
        1.0 / (1.0 + (sharpness * d).exp())
    }
}

impl OccupancyField for SmoothedOccupancy {
    fn eval_raw(&self, points: &[Point], out: &mut [f64]) {
        for (p, o) in points.iter().zip(out.iter_mut()) {
            // Checked at construction.
            let d = self.base.signed_distance(p).unwrap_or(f64::INFINITY);
            *o = Self::logistic(self.sharpness, d);
        }
    }

    fn is_continuous(&self) -> bool {
        true
    }

    fn signed_distance(&self, p: &Point) -> Option<f64> {
        self.base.signed_distance(p)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::{eval_raw_one, AnalyticField, VoxelField};

    #[test]
    fn zero_level_maps_to_exactly_one_half() {
        let s = SmoothedOccupancy::new(Arc::new(AnalyticField::sphere(Point::origin(), 1.0)), 10.0).unwrap();
        assert_eq!(eval_raw_one(&s, Point::new(1.0, 0.0, 0.0)), 0.5);
        assert!(eval_raw_one(&s, Point::origin()) > 0.99);
    }

    #[test]
    fn rejects_field_without_distance() {
        let v = VoxelField::new([2, 2, 2], Point::origin(), Point::new(1.0, 1.0, 1.0), vec![0.0; 8]).unwrap();
        assert!(SmoothedOccupancy::new(Arc::new(v), 1.0).is_err());
    }
}
