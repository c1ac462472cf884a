use std::f64::consts::PI;

use super::OccupancyField;
use crate::error::{Error, Result};
use crate::meshlab::{Bvh, Mesh};
use crate::{Point, Vector};

const ON_SURFACE_TOLERANCE: f64 = 1e-12;

/// Signed solid angle of triangle `(a, b, c)` seen from `p` (Van Oosterom and
/// Strackee). Positive when `p` is behind the counter-clockwise face.
pub fn solid_angle(p: &Point, a: &Point, b: &Point, c: &Point) -> f64 {
    let a = a - p;
    let b = b - p;
    let c = c - p;
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    let det = a.dot(&b.cross(&c));
    let den = la * lb * lc + a.dot(&b) * lc + a.dot(&c) * lb + b.dot(&c) * la;
    2.0 * det.atan2(den)
}

fn on_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> bool {
    let n = (b - a).cross(&(c - a));
    let len = n.norm();
    if len == 0.0 {
        return false;
    }
    if (n.dot(&(p - a)) / len).abs() > ON_SURFACE_TOLERANCE {
        return false;
    }
    // Inside test via edge-function signs against the face normal.
    let e0 = (b - a).cross(&(p - a)).dot(&n);
    let e1 = (c - b).cross(&(p - b)).dot(&n);
    let e2 = (a - c).cross(&(p - c)).dot(&n);
    e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0
}

/// Generalized winding number: total signed solid angle over `4π`.
pub fn winding_number(mesh: &Mesh, p: &Point) -> Result<f64> {
    if mesh.triangles.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let mut total = 0.0;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let [a, b, c] = mesh.corners(tri);
        if on_triangle(p, &a, &b, &c) {
            return Err(Error::SurfaceCoincidence { triangle: t });
        }
        total += solid_angle(p, &a, &b, &c);
    }
    Ok(total / (4.0 * PI))
}

/// Occupancy from the winding number of a triangle mesh: inside iff `w > 0.5`.
pub struct MeshWindingField {
    mesh: Mesh,
    bvh: Bvh,
    nudge: Vector,
}

impl MeshWindingField {
    pub fn new(mesh: Mesh) -> Result<Self> {
        if mesh.triangles.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let bvh = Bvh::build(&mesh);
        let (lo, hi) = mesh.bounds();
        let diag = (hi - lo).norm().max(1e-300);
        let nudge = Vector::new(1.0, 2.0, 3.0).normalize() * (diag * 1e-9);
        Ok(Self { mesh, bvh, nudge })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    /// Winding number, nudging the query off the surface when it lands on a triangle.
    pub fn winding(&self, p: &Point) -> f64 {
        let mut q = *p;
        for _ in 0..4 {
            match winding_number(&self.mesh, &q) {
                Ok(w) => return w,
                Err(_) => q += self.nudge,
            }
        }
        // Still coincident after repeated nudges: treat as boundary, which is outside.
        0.5
    }
}

impl OccupancyField for MeshWindingField {
    fn eval_raw(&self, points: &[Point], out: &mut [f64]) {
        for (p, o) in points.iter().zip(out.iter_mut()) {
            *o = if self.winding(p) > 0.5 { 1.0 } else { 0.0 };
        }
    }

    fn signed_distance(&self, p: &Point) -> Option<f64> {
        let d = self.bvh.closest_point(&self.mesh, p).distance;
        Some(if self.winding(p) > 0.5 { -d } else { d })
    }
}
