#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use nalgebra::{Point2, Vector2};
use odc::cli::scene::Scene;
use odc::field::{AnalyticField, CsgField};
use odc::{GridSpec, Point, SharedField, Vector};

/// The analytic manifold suite, as scene file stems.
pub const SUITE: [&str; 5] = ["sphere", "torus", "rotated_box", "csg_union", "csg_difference"];

pub fn scene_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/scenes").join(format!("{name}.json"))
}

pub fn load(name: &str, resolution: usize) -> (GridSpec, SharedField) {
    let scene = Scene::load(scene_path(name)).expect("scene");
    let grid = scene.grid(resolution).expect("grid");
    let field = scene.build_field(&grid).expect("field");
    (grid, field)
}

/// A wedge on the `z = 0` face through `u`, bounded by the rays `u + s e1`
/// and `u + s e2` (`s >= 0`); inside is swept counter-clockwise from `e1` to `e2`.
#[derive(Clone, Copy, Debug)]
pub struct Wedge {
    pub u: Point2<f64>,
    pub e1: Vector2<f64>,
    pub e2: Vector2<f64>,
}

fn cross(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

impl Wedge {
    pub fn convex(&self) -> bool {
        cross(&self.e1, &self.e2) > 0.0
    }

    pub fn field(&self) -> SharedField {
        let p = Point::new(self.u.x, self.u.y, 0.0);
        let a = Arc::new(AnalyticField::half_space(p, Vector::new(self.e1.y, -self.e1.x, 0.0))) as SharedField;
        let b = Arc::new(AnalyticField::half_space(p, Vector::new(-self.e2.y, self.e2.x, 0.0))) as SharedField;
        if self.convex() {
            Arc::new(CsgField::intersection(vec![a, b]))
        } else {
            Arc::new(CsgField::union(vec![a, b]))
        }
    }

    /// Distances along `o + t d` where it meets either boundary ray, with the ray index.
    pub fn hits(&self, o: &Point2<f64>, d: &Vector2<f64>) -> Vec<(f64, usize)> {
        let mut out = Vec::new();
        for (k, e) in [self.e1, self.e2].iter().enumerate() {
            let den = cross(d, e);
            if den.abs() < 1e-12 {
                continue;
            }
            let w = self.u - o;
            let t = cross(&w, e) / den;
            let s = cross(&w, d) / den;
            if t > 0.0 && s >= 0.0 {
                out.push((t, k));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }
}

/// Exit point of the ray `u + s e` from the unit square, with the exit side.
pub fn square_exit(u: &Point2<f64>, e: &Vector2<f64>) -> (Point2<f64>, usize) {
    let mut best = (f64::INFINITY, 0);
    for (side, (axis, bound)) in [(1, 0.0), (0, 1.0), (1, 1.0), (0, 0.0)].into_iter().enumerate() {
        let d = e[axis];
        if d.abs() < 1e-15 {
            continue;
        }
        let s = (bound - u[axis]) / d;
        if s > 0.0 && s < best.0 {
            best = (s, side);
        }
    }
    (u + e * best.0, best.1)
}
