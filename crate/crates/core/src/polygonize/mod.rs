//! Quad per crossing edge, split by the concave-vertex analysis, then a
//! vertex-duplication repair for residual non-manifold elements.

mod repair;

pub use repair::{repair_nonmanifold, RepairStats};

use serde::{Deserialize, Serialize};

use crate::dualize::{table, CellPartition, Point3D};
use crate::error::{Error, Result};
use crate::grid::{face_axes, CellId, CrossingEdge, GridSpec};
use crate::meshlab::{Mesh, VertexTag};
use crate::search::Point1D;
use crate::Point;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    /// Diagonal chosen by the concave tests, fan through the 1D point when neither fits.
    #[default]
    Ic,
    /// Always the (c1, c3) diagonal.
    Mdc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SplitCase {
    /// Diagonal (c1, c3).
    Diagonal13,
    /// Diagonal (c2, c4).
    Diagonal24,
    /// Four triangles around the edge's 1D point.
    Fan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitDecision {
    pub case: SplitCase,
    pub concave: [bool; 4],
}

impl SplitDecision {
    /// Triangles as quad slots; slot 4 is the 1D point.
    pub fn triangles(&self) -> &'static [[usize; 3]] {
        match self.case {
            SplitCase::Diagonal13 => &[[0, 1, 2], [0, 2, 3]],
            SplitCase::Diagonal24 => &[[0, 1, 3], [1, 2, 3]],
            SplitCase::Fan => &[[4, 0, 1], [4, 1, 2], [4, 2, 3], [4, 3, 0]],
        }
    }
}

/// The four 3D points around a crossing edge, ordered so that
/// `(c1, c2, c3)` turns counter-clockwise about `v_in -> v_out`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeQuad {
    pub edge: usize,
    /// Indices into the 3D point list.
    pub points: [usize; 4],
    pub p_e: Point,
    pub v_in: Point,
    pub v_out: Point,
}

/// `p` is concave against the diagonal `(a, b)` when it lies behind the
/// plane through the diagonal and `v_out`, or in front of the one through `v_in`.
pub fn is_concave_vertex(p: &Point, v_in: &Point, v_out: &Point, a: &Point, b: &Point) -> bool {
    let upper = (p - v_out).dot(&(a - v_out).cross(&(b - v_out)));
    let lower = (p - v_in).dot(&(a - v_in).cross(&(b - v_in)));
    upper < 0.0 || lower > 0.0
}

pub fn split_quad(c: &[Point; 4], v_in: &Point, v_out: &Point) -> SplitDecision {
    let concave: [bool; 4] = std::array::from_fn(|k| is_concave_vertex(&c[k], v_in, v_out, &c[(k + 3) % 4], &c[(k + 1) % 4]));
    let case = if !concave[1] && !concave[3] {
        SplitCase::Diagonal13
    } else if !concave[0] && !concave[2] {
        SplitCase::Diagonal24
    } else {
        SplitCase::Fan
    };
    SplitDecision { case, concave }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PolygonizeStats {
    pub quads: u64,
    pub case_diagonal_13: u64,
    pub case_diagonal_24: u64,
    pub case_fan: u64,
    /// Crossing edges on the domain boundary (fewer than four cells), left open.
    pub boundary_edges: u64,
}

/// Cell-min offsets on the two axes after `a`, in counter-clockwise order about `+a`.
const QUAD_OFFSETS: [(i64, i64); 4] = [(-1, -1), (0, -1), (0, 0), (-1, 0)];

struct PartitionLookup<'a> {
    cells: Vec<CellId>,
    first_point: Vec<usize>,
    partitions: &'a [CellPartition],
}

impl<'a> PartitionLookup<'a> {
    fn new(partitions: &'a [CellPartition]) -> Self {
        let mut first_point = Vec::with_capacity(partitions.len());
        let mut n = 0;
        for p in partitions {
            first_point.push(n);
            n += p.cycles.len();
        }
        Self {
            cells: partitions.iter().map(|p| p.cell).collect(),
            first_point,
            partitions,
        }
    }

    fn point_of(&self, cell: CellId, cube_edge: usize) -> Option<usize> {
        let i = self.cells.binary_search(&cell).ok()?;
        let part = self.partitions[i].partition_of_cube_edge(cube_edge)?;
        Some(self.first_point[i] + part)
    }
}

/// Quads for every interior crossing edge, in edge order.
pub fn edge_quads(
    grid: &GridSpec,
    edges: &[CrossingEdge],
    points1d: &[Point1D],
    partitions: &[CellPartition],
) -> Result<(Vec<EdgeQuad>, u64)> {
    let lookup = PartitionLookup::new(partitions);
    let mut quads = Vec::with_capacity(edges.len());
    let mut boundary = 0;
    for (ei, e) in edges.iter().enumerate() {
        let a = e.axis as usize;
        let (b, c) = face_axes(a);
        let mut points = [0usize; 4];
        let mut open = false;
        for (k, &(ob, oc)) in QUAD_OFFSETS.iter().enumerate() {
            let mut lower = e.lower.map(i64::from);
            lower[b] += ob;
            lower[c] += oc;
            if !grid.cell_in_range(lower) {
                open = true;
                break;
            }
            let cell_lower = lower.map(|x| x as u32);
            let mut o = [0u32; 3];
            o[b] = (-ob) as u32;
            o[c] = (-oc) as u32;
            let cube_edge = table::cube_edge(a, o);
            let cell = grid.cell_id(cell_lower);
            points[k] = lookup.point_of(cell, cube_edge).ok_or_else(|| {
                Error::Contract(format!("edge {:?} has no partition in cell {cell:?}", e.id))
            })?;
        }
        if open {
            boundary += 1;
            continue;
        }
        if !e.lower_inside {
            points = [points[0], points[3], points[2], points[1]];
        }
        quads.push(EdgeQuad {
            edge: ei,
            points,
            p_e: points1d[ei].position,
            v_in: e.v_in(),
            v_out: e.v_out(),
        });
    }
    Ok((quads, boundary))
}

/// Assembles the mesh in grid coordinates.
pub fn build_mesh(
    grid: &GridSpec,
    edges: &[CrossingEdge],
    points1d: &[Point1D],
    partitions: &[CellPartition],
    points3d: &[Point3D],
    mode: SplitMode,
) -> Result<(Mesh, PolygonizeStats)> {
    let (quads, boundary) = edge_quads(grid, edges, points1d, partitions)?;
    let mut stats = PolygonizeStats {
        boundary_edges: boundary,
        ..Default::default()
    };
    let mut mesh = Mesh::default();
    let mut slot_of_point = vec![u32::MAX; points3d.len()];
    let mut vertex_of = |mesh: &mut Mesh, i: usize| -> u32 {
        if slot_of_point[i] == u32::MAX {
            let p = &points3d[i];
            slot_of_point[i] = mesh.vertices.len() as u32;
            mesh.vertices.push(p.position);
            mesh.provenance.push(VertexTag::Cell {
                cell: p.cell,
                partition: p.partition,
            });
        }
        slot_of_point[i]
    };
    for q in &quads {
        let corners = q.points.map(|i| points3d[i].position);
        let decision = match mode {
            SplitMode::Ic => split_quad(&corners, &q.v_in, &q.v_out),
            SplitMode::Mdc => SplitDecision {
                case: SplitCase::Diagonal13,
                concave: [false; 4],
            },
        };
        stats.quads += 1;
        match decision.case {
            SplitCase::Diagonal13 => stats.case_diagonal_13 += 1,
            SplitCase::Diagonal24 => stats.case_diagonal_24 += 1,
            SplitCase::Fan => stats.case_fan += 1,
        }
        let mut slots = [0u32; 5];
        for k in 0..4 {
            slots[k] = vertex_of(&mut mesh, q.points[k]);
        }
        if decision.case == SplitCase::Fan {
            slots[4] = mesh.vertices.len() as u32;
            mesh.vertices.push(q.p_e);
            mesh.provenance.push(VertexTag::Edge { edge: edges[q.edge].id });
        }
        for t in decision.triangles() {
            mesh.triangles.push(t.map(|s| slots[s]));
        }
    }
    mesh.check_indices().map_err(Error::Contract)?;
    Ok((mesh, stats))
}
