use nalgebra::Isometry3;

use super::{label_of, OccupancyField, SharedField};
use crate::Point;

/// Boolean combination of fields, evaluated on labels.
///
/// Raw values are binary. Signed distance is the usual min/max bound, which
/// is exact in sign and zero set but only a bound in magnitude.
pub enum CsgField {
    Union(Vec<SharedField>),
    Intersection(Vec<SharedField>),
    Difference(SharedField, SharedField),
    Complement(SharedField),
    Transform {
        child: SharedField,
        /// Maps child-local coordinates to world coordinates.
        placement: Isometry3<f64>,
    },
}

impl CsgField {
    pub fn union(children: Vec<SharedField>) -> Self {
        CsgField::Union(children)
    }

    pub fn intersection(children: Vec<SharedField>) -> Self {
        CsgField::Intersection(children)
    }

    pub fn difference(a: SharedField, b: SharedField) -> Self {
        CsgField::Difference(a, b)
    }

    pub fn complement(a: SharedField) -> Self {
        CsgField::Complement(a)
    }

    pub fn transform(child: SharedField, placement: Isometry3<f64>) -> Self {
        CsgField::Transform { child, placement }
    }

    fn child_labels(child: &dyn OccupancyField, points: &[Point]) -> Vec<u8> {
        let mut raw = vec![0.0; points.len()];
        child.eval_raw(points, &mut raw);
        let iso = child.iso_level();
        raw.into_iter().map(|r| label_of(r, iso)).collect()
    }

    fn labels(&self, points: &[Point]) -> Vec<u8> {
        match self {
            CsgField::Union(children) => fold_children(children, points, 0, |a, b| a.max(b)),
            CsgField::Intersection(children) => fold_children(children, points, 1, |a, b| a.min(b)),
            CsgField::Difference(a, b) => {
                let la = Self::child_labels(a.as_ref(), points);
                let lb = Self::child_labels(b.as_ref(), points);
                la.into_iter().zip(lb).map(|(a, b)| a.min(1 - b)).collect()
            }
            CsgField::Complement(a) => Self::child_labels(a.as_ref(), points)
                .into_iter()
                .map(|l| 1 - l)
                .collect(),
            CsgField::Transform { child, placement } => {
                let inv = placement.inverse();
                let local: Vec<Point> = points.iter().map(|p| inv * p).collect();
                Self::child_labels(child.as_ref(), &local)
            }
        }
    }
}

fn fold_children(children: &[SharedField], points: &[Point], init: u8, op: impl Fn(u8, u8) -> u8) -> Vec<u8> {
    let mut acc = vec![init; points.len()];
    for child in children {
        let l = CsgField::child_labels(child.as_ref(), points);
        for (a, b) in acc.iter_mut().zip(l) {
            *a = op(*a, b);
        }
    }
    acc
}

impl OccupancyField for CsgField {
    fn eval_raw(&self, points: &[Point], out: &mut [f64]) {
        for (o, l) in out.iter_mut().zip(self.labels(points)) {
            *o = f64::from(l);
        }
    }

    fn signed_distance(&self, p: &Point) -> Option<f64> {
        match self {
            CsgField::Union(children) => children
                .iter()
                .map(|c| c.signed_distance(p))
                .try_fold(f64::INFINITY, |acc, d| d.map(|d| acc.min(d))),
            CsgField::Intersection(children) => children
                .iter()
                .map(|c| c.signed_distance(p))
                .try_fold(f64::NEG_INFINITY, |acc, d| d.map(|d| acc.max(d))),
            CsgField::Difference(a, b) => Some(a.signed_distance(p)?.max(-b.signed_distance(p)?)),
            CsgField::Complement(a) => a.signed_distance(p).map(|d| -d),
            CsgField::Transform { child, placement } => child.signed_distance(&(placement.inverse() * p)),
        }
    }
}
