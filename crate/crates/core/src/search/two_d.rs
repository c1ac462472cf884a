use nalgebra::{Point2, Vector2};
use serde::Serialize;

use super::{line_binary_search, Ray, SearchBudget};
use crate::error::{Error, Result};
use crate::field::{Evaluator, Stage};
use crate::grid::{coord_point, face_axes, Coord, EdgeId, FaceId, FACE_CORNERS};
use crate::{Point, Vector};

/// `q` closer than this to the midpoint (cell units) counts as coincident.
pub const COINCIDENCE_EPS: f64 = 1e-4;
/// 2D points are kept within the face rectangle grown by this margin (cell units).
pub const CLAMP_MARGIN: f64 = 0.5;
const PARALLEL_SIN: f64 = 1e-6;

/// Two 1D points on one grid face that bound the same curve segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FacePair {
    pub face: FaceId,
    pub lower: Coord,
    pub normal: u8,
    pub corner_labels: [u8; 4],
    pub edges: [EdgeId; 2],
    pub p1: Point,
    pub p2: Point,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Point2DStatus {
    Exact,
    MidpointFallback,
    Clamped,
    RangeExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2D {
    pub face: FaceId,
    pub edges: [EdgeId; 2],
    pub position: Point,
    pub status: Point2DStatus,
}

/// Plane frame of a face: `(u, v)` along its two in-plane axes, origin at the lower corner.
struct FaceFrame {
    b: usize,
    c: usize,
    origin: Point,
}

impl FaceFrame {
    fn new(lower: Coord, normal: usize) -> Self {
        let (b, c) = face_axes(normal);
        Self {
            b,
            c,
            origin: coord_point(lower),
        }
    }

    fn to_2d(&self, p: &Point) -> Point2<f64> {
        Point2::new(p[self.b] - self.origin[self.b], p[self.c] - self.origin[self.c])
    }

    fn to_3d(&self, p: &Point2<f64>) -> Point {
        let mut out = self.origin;
        out[self.b] += p.x;
        out[self.c] += p.y;
        out
    }

    fn dir_3d(&self, d: &Vector2<f64>) -> Vector {
        let mut out = Vector::zeros();
        out[self.b] = d.x;
        out[self.c] = d.y;
        out
    }
}

#[inline]
fn cross2(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Side of the line through the pair (as a unit normal of it) on which the
/// nearest corner with a label different from the midpoint lies.
fn ray_direction(pair: &FacePair, frame: &FaceFrame, m: &Point2<f64>, m_label: u8) -> Result<Vector2<f64>> {
    let l = frame.to_2d(&pair.p2) - frame.to_2d(&pair.p1);
    let perp = Vector2::new(-l.y, l.x).normalize();
    let mut best: Option<(f64, f64)> = None;
    for (k, &(du, dv)) in FACE_CORNERS.iter().enumerate() {
        if pair.corner_labels[k] == m_label {
            continue;
        }
        let off = Point2::new(du as f64, dv as f64) - m;
        let side = perp.dot(&off);
        if side == 0.0 {
            continue;
        }
        let dist = off.norm();
        if best.is_none_or(|(d, _)| dist < d) {
            best = Some((dist, side.signum()));
        }
    }
    match best {
        Some((_, s)) => Ok(perp * s),
        None => Err(Error::Contract(format!(
            "face {:?}: no corner differs from the midpoint label",
            pair.face
        ))),
    }
}

/// Moves `p` toward `m` onto the grown face rectangle if it lies outside.
fn clamp_to_face(m: &Point2<f64>, p: &Point2<f64>) -> Option<Point2<f64>> {
    let lo = -CLAMP_MARGIN;
    let hi = 1.0 + CLAMP_MARGIN;
    if (lo..=hi).contains(&p.x) && (lo..=hi).contains(&p.y) {
        return None;
    }
    let d = p - m;
    let mut lambda: f64 = 1.0;
    for a in 0..2 {
        if d[a] > 0.0 && p[a] > hi {
            lambda = lambda.min((hi - m[a]) / d[a]);
        } else if d[a] < 0.0 && p[a] < lo {
            lambda = lambda.min((lo - m[a]) / d[a]);
        }
    }
    Some(m + d * lambda.max(0.0))
}

/// Batched 2D point search over face pairs.
///
/// One probe batch reads the label of every midpoint `m`; then three
/// line-binary searches run lock-step for every pair (the ray from `m`
/// perpendicular to the pair's line, then the two rays from its hit parallel
/// to the line). All three rays are searched for every pair so the cost is
/// exactly `budget.evals_per_2d_point()` per pair.
pub fn find_2d_points(pairs: &[FacePair], budget: &SearchBudget, eval: &Evaluator) -> Result<Vec<Point2D>> {
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let frames: Vec<FaceFrame> = pairs.iter().map(|p| FaceFrame::new(p.lower, p.normal as usize)).collect();
    let mids3: Vec<Point> = pairs.iter().map(|p| nalgebra::center(&p.p1, &p.p2)).collect();
    let m_labels = eval.labels(Stage::Probe, &mids3);

    let mut rays = Vec::with_capacity(pairs.len());
    for ((pair, frame), (m3, &lab)) in pairs.iter().zip(&frames).zip(mids3.iter().zip(&m_labels)) {
        let m = frame.to_2d(m3);
        let dir = ray_direction(pair, frame, &m, lab)?;
        rays.push(Ray {
            origin: *m3,
            dir: frame.dir_3d(&dir),
            ref_label: lab,
        });
    }
    let q_hits = line_binary_search(&rays, &budget.step1, eval, Stage::Search2d);

    let mut side_rays = Vec::with_capacity(2 * pairs.len());
    for (pair, (hit, &lab)) in pairs.iter().zip(q_hits.iter().zip(&m_labels)) {
        let m = nalgebra::center(&pair.p1, &pair.p2);
        for target in [pair.p1, pair.p2] {
            let d = target - m;
            side_rays.push(Ray {
                origin: hit.point,
                dir: d / d.norm(),
                ref_label: lab,
            });
        }
    }
    let side_hits = line_binary_search(&side_rays, &budget.step2, eval, Stage::Search2d);

    let mut out = Vec::with_capacity(pairs.len());
    for (i, (pair, frame)) in pairs.iter().zip(&frames).enumerate() {
        let m3 = mids3[i];
        let q = q_hits[i];
        let (h1, h2) = (side_hits[2 * i], side_hits[2 * i + 1]);
        let make = |position: Point, status| Point2D {
            face: pair.face,
            edges: pair.edges,
            position,
            status,
        };
        if (q.point - m3).norm() <= COINCIDENCE_EPS {
            out.push(make(m3, Point2DStatus::Exact));
            continue;
        }
        let m = frame.to_2d(&m3);
        let a1 = frame.to_2d(&pair.p1);
        let a2 = frame.to_2d(&pair.p2);
        let d1 = frame.to_2d(&h1.point) - a1;
        let d2 = frame.to_2d(&h2.point) - a2;
        let denom = cross2(&d1, &d2);
        let scale = d1.norm() * d2.norm();
        if scale <= 0.0 || (denom / scale).abs() < PARALLEL_SIN {
            out.push(make(m3, Point2DStatus::MidpointFallback));
            continue;
        }
        let s = cross2(&(a2 - a1), &d2) / denom;
        let p = a1 + d1 * s;
        let exhausted = !(q.found && h1.found && h2.found);
        let (p, status) = match clamp_to_face(&m, &p) {
            Some(c) => (c, Point2DStatus::Clamped),
            None if exhausted => (p, Point2DStatus::RangeExhausted),
            None => (p, Point2DStatus::Exact),
        };
        out.push(make(frame.to_3d(&p), status));
    }
    Ok(out)
}
