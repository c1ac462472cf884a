use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::Mesh;
use crate::{Point, Vector};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub manifold: bool,
    /// Every edge has exactly two triangles.
    pub closed: bool,
    /// Every two-triangle edge is used once in each direction.
    pub oriented: bool,
    pub boundary_edges: usize,
    /// Edges with more than two triangles.
    pub nonmanifold_edges: Vec<(u32, u32)>,
    /// Vertices whose triangles form more than one edge-connected fan.
    pub pinched_vertices: Vec<u32>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Number of edge-connected triangle fans around each vertex.
pub(crate) fn fan_components(mesh: &Mesh, v: u32, incident: &[u32]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..incident.len()).collect();
    let mut by_neighbor: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (k, &t) in incident.iter().enumerate() {
        for &w in &mesh.triangles[t as usize] {
            if w != v {
                by_neighbor.entry(w).or_default().push(k);
            }
        }
    }
    for ks in by_neighbor.values() {
        for w in ks.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..incident.len()).map(|k| find(&mut parent, k)).collect()
}

/// Triangles incident to each vertex, ascending.
pub(crate) fn vertex_triangles(mesh: &Mesh) -> Vec<Vec<u32>> {
    let mut inc = vec![Vec::new(); mesh.vertices.len()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for &v in tri {
            inc[v as usize].push(t as u32);
        }
    }
    inc
}

pub fn validate_manifold(mesh: &Mesh) -> ManifoldReport {
    // (low, high) -> (count, directed uses low -> high)
    let mut edges: BTreeMap<(u32, u32), (u32, u32)> = BTreeMap::new();
    for t in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let e = edges.entry((a.min(b), a.max(b))).or_default();
            e.0 += 1;
            e.1 += u32::from(a < b);
        }
    }
    let mut report = ManifoldReport {
        closed: true,
        oriented: true,
        ..Default::default()
    };
    for (&e, &(count, forward)) in &edges {
        match count {
            1 => {
                report.boundary_edges += 1;
                report.closed = false;
            }
            2 => report.oriented &= forward == 1,
            _ => {
                report.nonmanifold_edges.push(e);
                report.closed = false;
                report.oriented = false;
            }
        }
    }
    for (v, inc) in vertex_triangles(mesh).iter().enumerate() {
        if inc.len() > 1 {
            let roots = fan_components(mesh, v as u32, inc);
            if roots.iter().any(|&r| r != 0) {
                report.pinched_vertices.push(v as u32);
            }
        }
    }
    report.manifold = report.nonmanifold_edges.is_empty() && report.pinched_vertices.is_empty();
    report
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelfIntersectionParams {
    /// Distance tolerance in unit-box-normalized coordinates.
    pub tolerance: f64,
    /// Twice-area threshold below which a triangle is skipped.
    pub area_epsilon: f64,
}

impl Default for SelfIntersectionParams {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            area_epsilon: 1e-20,
        }
    }
}

/// Interval of a triangle's cut with the other plane, as coordinates along the cut line.
fn cut_interval(p: [f64; 3], d: [f64; 3]) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut push = |x: f64| {
        lo = lo.min(x);
        hi = hi.max(x);
    };
    for i in 0..3 {
        let j = (i + 1) % 3;
        if d[i] == 0.0 {
            push(p[i]);
        }
        if d[i] * d[j] < 0.0 {
            push(p[i] + (p[j] - p[i]) * d[i] / (d[i] - d[j]));
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn plane_distances(tri: &[Point; 3], n: &Vector, origin: &Point, tol: f64) -> [f64; 3] {
    tri.map(|p| {
        let d = n.dot(&(p - origin));
        if d.abs() < tol {
            0.0
        } else {
            d
        }
    })
}

fn coplanar_overlap(a: &[Point; 3], b: &[Point; 3], n: &Vector, tol: f64) -> bool {
    let drop = n.abs().imax();
    let (i, j) = ((drop + 1) % 3, (drop + 2) % 3);
    let pa = a.map(|p| (p[i], p[j]));
    let pb = b.map(|p| (p[i], p[j]));
    for tri in [&pa, &pb] {
        for k in 0..3 {
            let (x0, y0) = tri[k];
            let (x1, y1) = tri[(k + 1) % 3];
            let axis = (y0 - y1, x1 - x0);
            let proj = |t: &[(f64, f64); 3]| {
                t.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, y)| {
                    let s = axis.0 * x + axis.1 * y;
                    (lo.min(s), hi.max(s))
                })
            };
            let (alo, ahi) = proj(&pa);
            let (blo, bhi) = proj(&pb);
            let len = (axis.0 * axis.0 + axis.1 * axis.1).sqrt();
            if ahi.min(bhi) - alo.max(blo) <= tol * len {
                return false;
            }
        }
    }
    true
}

/// True when two triangles intersect in a set of positive length or area.
pub fn triangles_intersect(a: &[Point; 3], b: &[Point; 3], tol: f64) -> bool {
    let na = (a[1] - a[0]).cross(&(a[2] - a[0]));
    let nb = (b[1] - b[0]).cross(&(b[2] - b[0]));
    let (la, lb) = (na.norm(), nb.norm());
    if la == 0.0 || lb == 0.0 {
        return false;
    }
    let (na, nb) = (na / la, nb / lb);
    let da = plane_distances(a, &nb, &b[0], tol);
    if (da[0] > 0.0 && da[1] > 0.0 && da[2] > 0.0) || (da[0] < 0.0 && da[1] < 0.0 && da[2] < 0.0) {
        return false;
    }
    let db = plane_distances(b, &na, &a[0], tol);
    if (db[0] > 0.0 && db[1] > 0.0 && db[2] > 0.0) || (db[0] < 0.0 && db[1] < 0.0 && db[2] < 0.0) {
        return false;
    }
    if da.iter().all(|&d| d == 0.0) {
        return coplanar_overlap(a, b, &na, tol);
    }
    let dir = na.cross(&nb);
    if dir.norm() < tol {
        // Parallel planes that were not classified coplanar do not meet.
        return false;
    }
    let dir = dir.normalize();
    let pa = a.map(|p| dir.dot(&p.coords));
    let pb = b.map(|p| dir.dot(&p.coords));
    match (cut_interval(pa, da), cut_interval(pb, db)) {
        (Some((a0, a1)), Some((b0, b1))) => a1.min(b1) - a0.max(b0) > tol,
        _ => false,
    }
}

/// Segment `p -> q` crosses the open triangle at an interior segment parameter.
pub fn segment_hits_triangle(p: &Point, q: &Point, tri: &[Point; 3], tol: f64) -> bool {
    let d = q - p;
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let h = d.cross(&e2);
    let det = e1.dot(&h);
    if det.abs() < 1e-300 {
        return false;
    }
    let inv = 1.0 / det;
    let s = p - tri[0];
    let u = inv * s.dot(&h);
    let qv = s.cross(&e1);
    let v = inv * d.dot(&qv);
    let t = inv * e2.dot(&qv);
    u > tol && v > tol && u + v < 1.0 - tol && t > tol && t < 1.0 - tol
}

fn normalized_triangles(mesh: &Mesh) -> Vec<[Point; 3]> {
    let (lo, hi) = mesh.bounds();
    let ext = (hi - lo).max();
    let s = if ext > 0.0 { 1.0 / ext } else { 1.0 };
    mesh.triangles
        .iter()
        .map(|t| mesh.corners(t).map(|p| Point::from((p - lo) * s)))
        .collect()
}

/// Triangle pairs with positive-measure intersection, excluding pairs that share a vertex index.
pub fn count_self_intersections(mesh: &Mesh) -> usize {
    count_self_intersections_with(mesh, &SelfIntersectionParams::default())
}

pub fn count_self_intersections_with(mesh: &Mesh, params: &SelfIntersectionParams) -> usize {
    if mesh.triangles.len() < 2 {
        return 0;
    }
    let tris = normalized_triangles(mesh);
    let keep: Vec<bool> = tris
        .iter()
        .map(|t| (t[1] - t[0]).cross(&(t[2] - t[0])).norm() >= params.area_epsilon)
        .collect();
    let boxes: Vec<(Point, Point)> = tris
        .iter()
        .map(|t| {
            let lo = t[0].inf(&t[1]).inf(&t[2]);
            let hi = t[0].sup(&t[1]).sup(&t[2]);
            (lo.map(|c| c - params.tolerance), hi.map(|c| c + params.tolerance))
        })
        .collect();
    let mean_ext = boxes.iter().map(|(lo, hi)| (hi - lo).max()).sum::<f64>() / boxes.len() as f64;
    let cell = (2.0 * mean_ext).max(1e-6);
    let key = |p: &Point| -> [i64; 3] { std::array::from_fn(|i| (p[i] / cell).floor() as i64) };

    let mut grid: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
    for (t, (lo, hi)) in boxes.iter().enumerate() {
        if !keep[t] {
            continue;
        }
        let (a, b) = (key(lo), key(hi));
        for x in a[0]..=b[0] {
            for y in a[1]..=b[1] {
                for z in a[2]..=b[2] {
                    grid.entry([x, y, z]).or_default().push(t as u32);
                }
            }
        }
    }
    let cells: Vec<(&[i64; 3], &Vec<u32>)> = grid.iter().collect();
    cells
        .par_iter()
        .map(|(k, members)| {
            let mut n = 0usize;
            for (i, &ti) in members.iter().enumerate() {
                for &tj in &members[i + 1..] {
                    let (bi, bj) = (&boxes[ti as usize], &boxes[tj as usize]);
                    let lo = bi.0.sup(&bj.0);
                    let hi = bi.1.inf(&bj.1);
                    if lo.x > hi.x || lo.y > hi.y || lo.z > hi.z {
                        continue;
                    }
                    // Count each pair only in the cell holding the low corner of the box overlap.
                    let owner = key(&lo);
                    if owner != **k {
                        continue;
                    }
                    let (a, b) = (&mesh.triangles[ti as usize], &mesh.triangles[tj as usize]);
                    if a.iter().any(|v| b.contains(v)) {
                        continue;
                    }
                    if triangles_intersect(&tris[ti as usize], &tris[tj as usize], params.tolerance) {
                        n += 1;
                    }
                }
            }
            n
        })
        .sum()
}
