//! Cell partitions (primal faces), per-partition plane samples and QEF vertex placement.

pub mod qef;
pub mod table;

use serde::Serialize;

pub use qef::{mass_point, qef_residual, solve_qef, PlaneSample, QefSolution, DEFAULT_TRUNCATION};
pub use table::{trace_cycles, Cycle};

use crate::error::{Error, Result};
use crate::field::{Evaluator, Stage};
use crate::grid::{coord_point, step, ActiveSets, CellId, Coord, CrossingEdge, FaceId, GridSpec, LabelVolume};
use crate::search::{FacePair, Point1D, Point2D};
use crate::{Point, Vector};

/// Cross products shorter than this (cell units squared) count as collinear.
pub const COLLINEAR_EPS: f64 = 1e-9;

/// Face-center labels of the ambiguous crossing faces, sorted by face id.
#[derive(Clone, Debug, Default)]
pub struct FaceCenters {
    ids: Vec<FaceId>,
    labels: Vec<u8>,
}

impl FaceCenters {
    pub fn get(&self, id: FaceId) -> Option<u8> {
        self.ids.binary_search(&id).ok().map(|i| self.labels[i])
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// One probe batch at the center of every face with four crossing edges.
pub fn probe_face_centers(active: &ActiveSets, eval: &Evaluator) -> FaceCenters {
    let faces: Vec<_> = active.faces.iter().filter(|f| f.is_ambiguous()).collect();
    if faces.is_empty() {
        return FaceCenters::default();
    }
    let centers: Vec<Point> = faces.iter().map(|f| f.center()).collect();
    let labels = eval.labels(Stage::Probe, &centers);
    FaceCenters {
        ids: faces.iter().map(|f| f.id).collect(),
        labels,
    }
}

/// Face pairs in ascending (face, slot) order, with an index for lookups.
#[derive(Clone, Debug, Default)]
pub struct FacePairs {
    pub pairs: Vec<FacePair>,
    keys: Vec<(FaceId, [u8; 2])>,
}

impl FacePairs {
    pub fn find(&self, face: FaceId, slots: [u8; 2]) -> Option<usize> {
        self.keys.binary_search(&(face, slots)).ok()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn build_face_pairs(
    grid: &GridSpec,
    active: &ActiveSets,
    centers: &FaceCenters,
    points1d: &[Point1D],
) -> Result<FacePairs> {
    let mut out = FacePairs::default();
    for face in &active.faces {
        let normal = face.normal as usize;
        let center = if face.is_ambiguous() {
            Some(centers.get(face.id).ok_or_else(|| Error::Contract(format!("face {:?} was not probed", face.id)))?)
        } else {
            None
        };
        for (a, b) in table::pair_slots(face.corner_labels, center) {
            let ends = [a, b].map(|k| {
                let (lower, axis) = crate::grid::face_edge(face.lower, normal, k);
                grid.edge_id(lower, axis)
            });
            let idx = ends.map(|id| active.edge_index(id));
            let (Some(i1), Some(i2)) = (idx[0], idx[1]) else {
                return Err(Error::Contract(format!("face {:?} pairs a non-crossing edge", face.id)));
            };
            out.pairs.push(FacePair {
                face: face.id,
                lower: face.lower,
                normal: face.normal,
                corner_labels: face.corner_labels,
                edges: ends,
                p1: points1d[i1].position,
                p2: points1d[i2].position,
            });
            out.keys.push((face.id, [a as u8, b as u8]));
        }
    }
    Ok(out)
}

/// One primal face: crossing-edge indices (into `ActiveSets::edges`) and,
/// between consecutive edges, the face-pair index of the 2D point joining them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCycle {
    pub edges: Vec<u32>,
    pub pairs: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPartition {
    pub cell: CellId,
    pub lower: Coord,
    pub config: u8,
    pub cycles: Vec<PartitionCycle>,
    /// Partition of each cube edge, `u8::MAX` where the edge does not cross.
    pub edge_partition: [u8; 12],
}

impl CellPartition {
    pub fn partition_of_cube_edge(&self, e: usize) -> Option<usize> {
        let p = self.edge_partition[e];
        (p != u8::MAX).then_some(p as usize)
    }
}

fn cell_config(labels: &LabelVolume, lower: Coord) -> u8 {
    crate::grid::cell_config(labels, lower)
}

/// Groups the crossing edges of one cell into primal faces.
pub fn partition_cell(
    grid: &GridSpec,
    labels: &LabelVolume,
    active: &ActiveSets,
    centers: &FaceCenters,
    pairs: &FacePairs,
    cell: CellId,
) -> Result<CellPartition> {
    let lower = grid.cell_coord(cell);
    let config = cell_config(labels, lower);
    let mut face_bits = 0u8;
    for f in table::ambiguous_faces(config) {
        let id = cube_face_id(grid, lower, f);
        let l = centers
            .get(id)
            .ok_or_else(|| Error::Contract(format!("ambiguous face {id:?} of cell {cell:?} was not probed")))?;
        face_bits |= l << f;
    }
    let mut edge_partition = [u8::MAX; 12];
    let mut out_cycles = Vec::new();
    for (ci, cyc) in table::cycles(config, face_bits).iter().enumerate() {
        let n = cyc.len();
        let mut edges = Vec::with_capacity(n);
        let mut pair_ids = Vec::with_capacity(n);
        for i in 0..n {
            let e = cyc.edges[i] as usize;
            edge_partition[e] = ci as u8;
            let id = cube_edge_id(grid, lower, e);
            let idx = active
                .edge_index(id)
                .ok_or_else(|| Error::Contract(format!("cell {cell:?} edge {e} missing from crossing set")))?;
            edges.push(idx as u32);

            let f = cyc.faces[i] as usize;
            let next = cyc.edges[(i + 1) % n] as usize;
            let slots = table::cube_face_edges(f);
            let sa = slots.iter().position(|&x| x == e).unwrap() as u8;
            let sb = slots.iter().position(|&x| x == next).unwrap() as u8;
            let face = cube_face_id(grid, lower, f);
            let p = pairs
                .find(face, [sa.min(sb), sa.max(sb)])
                .ok_or_else(|| Error::Contract(format!("no face pair on {face:?} for cell {cell:?}")))?;
            pair_ids.push(p as u32);
        }
        out_cycles.push(PartitionCycle { edges, pairs: pair_ids });
    }
    Ok(CellPartition {
        cell,
        lower,
        config,
        cycles: out_cycles,
        edge_partition,
    })
}

pub fn cube_edge_id(grid: &GridSpec, cell_lower: Coord, e: usize) -> crate::grid::EdgeId {
    let (o, axis) = table::cube_edge_lower(e);
    grid.edge_id([cell_lower[0] + o[0], cell_lower[1] + o[1], cell_lower[2] + o[2]], axis)
}

pub fn cube_face_id(grid: &GridSpec, cell_lower: Coord, f: usize) -> FaceId {
    let (n, side) = (f / 2, (f % 2) as u32);
    let mut l = cell_lower;
    l[n] += side;
    grid.face_id(l, n)
}

/// Normal of the plane through a 1D point and its two neighbouring 2D points,
/// oriented from the inside end of the edge toward the outside end.
///
/// Falls back to the edge direction (flag set) when the points are collinear.
pub fn estimate_normal(p_e: &Point, q_a: &Point, q_b: &Point, v_in: &Point, v_out: &Point) -> (Vector, bool) {
    let edge = v_out - v_in;
    let n = (q_a - p_e).cross(&(q_b - p_e));
    let len = n.norm();
    if !(len >= COLLINEAR_EPS) {
        return (edge.normalize(), true);
    }
    let n = n / len;
    (if n.dot(&edge) < 0.0 { -n } else { n }, false)
}

/// Where plane-sample normals come from.
pub enum NormalSource<'a> {
    /// 2D points, one per face pair.
    TwoD(&'a [Point2D]),
    /// One (unnormalized) normal per crossing edge, e.g. a field gradient.
    PerEdge(&'a [Vector]),
}

/// Vertex of the dual mesh: one per primal face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point3D {
    pub cell: CellId,
    pub partition: u8,
    pub position: Point,
    pub rank: u8,
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DualStats {
    pub partitions: u64,
    pub normal_fallbacks: u64,
    /// Count of QEF solves by kept rank 0..=3.
    pub qef_rank: [u64; 4],
}

pub fn plane_samples(
    cycle: &PartitionCycle,
    edges: &[CrossingEdge],
    points1d: &[Point1D],
    normals: &NormalSource,
) -> Vec<PlaneSample> {
    let n = cycle.edges.len();
    (0..n)
        .map(|i| {
            let ei = cycle.edges[i] as usize;
            let edge = &edges[ei];
            let p_e = points1d[ei].position;
            let (v_in, v_out) = (edge.v_in(), edge.v_out());
            let (normal, fallback) = match normals {
                NormalSource::TwoD(points2d) => {
                    let q_a = points2d[cycle.pairs[(i + n - 1) % n] as usize].position;
                    let q_b = points2d[cycle.pairs[i] as usize].position;
                    estimate_normal(&p_e, &q_a, &q_b, &v_in, &v_out)
                }
                NormalSource::PerEdge(g) => {
                    let d = v_out - v_in;
                    let g = g[ei];
                    if g.norm() > 0.0 && g.iter().all(|c| c.is_finite()) {
                        let g = g.normalize();
                        (if g.dot(&d) < 0.0 { -g } else { g }, false)
                    } else {
                        (d.normalize(), true)
                    }
                }
            };
            PlaneSample {
                position: p_e,
                normal,
                fallback,
            }
        })
        .collect()
}

/// One QEF solve per partition, in (cell, partition) order.
pub fn place_3d_points(
    partitions: &[CellPartition],
    edges: &[CrossingEdge],
    points1d: &[Point1D],
    normals: &NormalSource,
    truncation: f64,
) -> (Vec<Point3D>, DualStats) {
    use rayon::prelude::*;
    let per_cell: Vec<(Vec<Point3D>, DualStats)> = partitions
        .par_iter()
        .map(|cp| {
            let lo = coord_point(cp.lower);
            let hi = coord_point(step(step(step(cp.lower, 0), 1), 2));
            let mut stats = DualStats::default();
            let pts = cp
                .cycles
                .iter()
                .enumerate()
                .map(|(i, cyc)| {
                    let samples = plane_samples(cyc, edges, points1d, normals);
                    stats.partitions += 1;
                    stats.normal_fallbacks += samples.iter().filter(|s| s.fallback).count() as u64;
                    let sol = solve_qef(&samples, &lo, &hi, truncation);
                    stats.qef_rank[sol.rank as usize] += 1;
                    Point3D {
                        cell: cp.cell,
                        partition: i as u8,
                        position: sol.position,
                        rank: sol.rank,
                        residual: sol.residual,
                    }
                })
                .collect();
            (pts, stats)
        })
        .collect();
    let mut points = Vec::new();
    let mut stats = DualStats::default();
    for (p, s) in per_cell {
        points.extend(p);
        stats.partitions += s.partitions;
        stats.normal_fallbacks += s.normal_fallbacks;
        for r in 0..4 {
            stats.qef_rank[r] += s.qef_rank[r];
        }
    }
    (points, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_from_three_points_on_plane() {
        let nu = Vector::new(0.2, 0.3, 0.9).normalize();
        // Three points on the plane nu . x = 0.1 around an edge along z.
        let on = |x: f64, y: f64| Point::new(x, y, (0.1 - nu.x * x - nu.y * y) / nu.z);
        let p_e = on(0.0, 0.0);
        let (n, fb) = estimate_normal(&p_e, &on(1.0, 0.0), &on(0.0, 1.0), &Point::new(0.0, 0.0, -1.0), &Point::new(0.0, 0.0, 1.0));
        assert!(!fb);
        assert!(n.angle(&nu) < 1e-12);
        // Mirrored order gives the same oriented normal.
        let (m, _) = estimate_normal(&p_e, &on(0.0, 1.0), &on(1.0, 0.0), &Point::new(0.0, 0.0, -1.0), &Point::new(0.0, 0.0, 1.0));
        assert!((m - n).norm() < 1e-15);
        // Reversed edge flips the orientation.
        let (r, _) = estimate_normal(&p_e, &on(1.0, 0.0), &on(0.0, 1.0), &Point::new(0.0, 0.0, 1.0), &Point::new(0.0, 0.0, -1.0));
        assert!((r + n).norm() < 1e-15);
    }

    #[test]
    fn degenerate_points_fall_back_to_edge_direction() {
        let p = Point::new(0.5, 0.0, 0.0);
        let (n, fb) = estimate_normal(&p, &p, &p, &Point::new(1.0, 0.0, 0.0), &Point::new(0.0, 0.0, 0.0));
        assert!(fb);
        assert_eq!(n, Vector::new(-1.0, 0.0, 0.0));
    }
}
