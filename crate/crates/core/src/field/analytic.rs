use nalgebra::{Rotation3, Unit};

use super::OccupancyField;
use crate::{Point, Vector};

/// Closed-form solids with exact signed distance.
#[derive(Clone, Debug)]
pub enum Shape {
    Sphere {
        center: Point,
        radius: f64,
    },
    /// Oriented box; `rotation` maps box-local axes to world axes.
    Box {
        center: Point,
        half_extents: Vector,
        rotation: Rotation3<f64>,
    },
    /// Torus around the z axis through `center`.
    Torus {
        center: Point,
        major_radius: f64,
        minor_radius: f64,
    },
    /// Half-space; `normal` points to the outside.
    Plane {
        point: Point,
        normal: Unit<Vector>,
    },
}

#[derive(Clone, Debug)]
pub struct AnalyticField {
    shape: Shape,
}

impl AnalyticField {
    pub fn new(shape: Shape) -> Self {
        Self { shape }
    }

    pub fn sphere(center: Point, radius: f64) -> Self {
        Self::new(Shape::Sphere { center, radius })
    }

    pub fn cuboid(center: Point, half_extents: Vector, rotation: Rotation3<f64>) -> Self {
        Self::new(Shape::Box {
            center,
            half_extents,
            rotation,
        })
    }

    pub fn torus(center: Point, major_radius: f64, minor_radius: f64) -> Self {
        Self::new(Shape::Torus {
            center,
            major_radius,
            minor_radius,
        })
    }

    pub fn half_space(point: Point, outward_normal: Vector) -> Self {
        Self::new(Shape::Plane {
            point,
            normal: Unit::new_normalize(outward_normal),
        })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn distance(&self, p: &Point) -> f64 {
        match &self.shape {
            Shape::Sphere { center, radius } => (p - center).norm() - radius,
            Shape::Box {
                center,
                half_extents,
                rotation,
            } => {
                let local = rotation.inverse() * (p - center);
                let q = local.abs() - half_extents;
                let outside = q.map(|c| c.max(0.0)).norm();
                let inside = q.x.max(q.y).max(q.z).min(0.0);
                outside + inside
            }
            Shape::Torus {
                center,
                major_radius,
                minor_radius,
            } => {
                let d = p - center;
                let ring = (d.x * d.x + d.y * d.y).sqrt() - major_radius;
                (ring * ring + d.z * d.z).sqrt() - minor_radius
            }
            Shape::Plane { point, normal } => normal.dot(&(p - point)),
        }
    }
}

impl OccupancyField for AnalyticField {
    fn eval_raw(&self, points: &[Point], out: &mut [f64]) {
        for (p, o) in points.iter().zip(out.iter_mut()) {
            *o = if self.distance(p) < 0.0 { 1.0 } else { 0.0 };
        }
    }

    fn signed_distance(&self, p: &Point) -> Option<f64> {
        Some(self.distance(p))
    }
}
