//! Uniform grid topology, vertex labels and surface-crossing elements.
//!
//! Index encoding (stable, used in reports and provenance):
//! - vertex `(x, y, z)` -> `x + y*S + z*S^2` with `S = R + 1`;
//! - edge -> `3 * vertex(lower end) + axis`;
//! - face -> `3 * vertex(lower corner) + normal axis`;
//! - cell -> `x + y*R + z*R^2` over its lower corner.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{label_of, Evaluator, Stage};
use crate::{Point, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FaceId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CellId(pub u64);

pub type Coord = [u32; 3];

#[inline]
pub fn unit(axis: usize) -> Vector {
    let mut v = Vector::zeros();
    v[axis] = 1.0;
    v
}

#[inline]
pub fn coord_point(c: Coord) -> Point {
    Point::new(c[0] as f64, c[1] as f64, c[2] as f64)
}

#[inline]
pub fn step(c: Coord, axis: usize) -> Coord {
    let mut out = c;
    out[axis] += 1;
    out
}

/// In-plane axes of a face with the given normal axis, in cyclic order.
#[inline]
pub fn face_axes(normal: usize) -> (usize, usize) {
    ((normal + 1) % 3, (normal + 2) % 3)
}

/// Face-local corners, counter-clockwise in `(u, v)`.
pub const FACE_CORNERS: [(u32, u32); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

/// Face-local edges as `(lower corner (u, v), runs along v)`.
/// Edge `k` joins corners `k` and `k + 1 (mod 4)`.
pub const FACE_EDGES: [((u32, u32), bool); 4] = [((0, 0), false), ((1, 0), true), ((0, 1), false), ((0, 0), true)];

/// Global lower end and axis of face-local edge `k`.
pub fn face_edge(face_lower: Coord, normal: usize, k: usize) -> (Coord, usize) {
    let (b, c) = face_axes(normal);
    let ((du, dv), along_v) = FACE_EDGES[k];
    let mut lower = face_lower;
    lower[b] += du;
    lower[c] += dv;
    (lower, if along_v { c } else { b })
}

pub fn face_corner(face_lower: Coord, normal: usize, k: usize) -> Coord {
    let (b, c) = face_axes(normal);
    let (du, dv) = FACE_CORNERS[k];
    let mut out = face_lower;
    out[b] += du;
    out[c] += dv;
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    min: Point,
    max: Point,
    resolution: usize,
}

impl GridSpec {
    pub fn new(min: Point, max: Point, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidGrid(format!("resolution must be at least 2, got {resolution}")));
        }
        if resolution > 2048 {
            return Err(Error::InvalidGrid(format!("resolution {resolution} exceeds index range")));
        }
        if (0..3).any(|a| !(max[a] > min[a]) || !min[a].is_finite() || !max[a].is_finite()) {
            return Err(Error::InvalidGrid("domain box must be finite with positive extent".into()));
        }
        Ok(Self { min, max, resolution })
    }

    pub fn unit_cube(resolution: usize) -> Result<Self> {
        Self::new(Point::origin(), Point::new(1.0, 1.0, 1.0), resolution)
    }

    pub fn min(&self) -> Point {
        self.min
    }

    pub fn max(&self) -> Point {
        self.max
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Vertices per axis.
    pub fn side(&self) -> usize {
        self.resolution + 1
    }

    pub fn cell_size(&self) -> Vector {
        (self.max - self.min) / self.resolution as f64
    }

    pub fn num_vertices(&self) -> usize {
        self.side().pow(3)
    }

    pub fn num_edges(&self) -> usize {
        3 * self.resolution * self.side().pow(2)
    }

    pub fn num_faces(&self) -> usize {
        3 * self.resolution.pow(2) * self.side()
    }

    pub fn num_cells(&self) -> usize {
        self.resolution.pow(3)
    }

    pub fn to_world(&self, p: &Point) -> Point {
        self.min + p.coords.component_mul(&self.cell_size())
    }

    pub fn vertex_index(&self, c: Coord) -> u64 {
        let s = self.side() as u64;
        c[0] as u64 + c[1] as u64 * s + c[2] as u64 * s * s
    }

    pub fn vertex_coord(&self, index: u64) -> Coord {
        let s = self.side() as u64;
        [(index % s) as u32, ((index / s) % s) as u32, (index / (s * s)) as u32]
    }

    pub fn edge_id(&self, lower: Coord, axis: usize) -> EdgeId {
        EdgeId(self.vertex_index(lower) * 3 + axis as u64)
    }

    pub fn edge_of(&self, id: EdgeId) -> (Coord, usize) {
        (self.vertex_coord(id.0 / 3), (id.0 % 3) as usize)
    }

    pub fn face_id(&self, lower: Coord, normal: usize) -> FaceId {
        FaceId(self.vertex_index(lower) * 3 + normal as u64)
    }

    pub fn face_of(&self, id: FaceId) -> (Coord, usize) {
        (self.vertex_coord(id.0 / 3), (id.0 % 3) as usize)
    }

    pub fn cell_id(&self, lower: Coord) -> CellId {
        let r = self.resolution as u64;
        CellId(lower[0] as u64 + lower[1] as u64 * r + lower[2] as u64 * r * r)
    }

    pub fn cell_coord(&self, id: CellId) -> Coord {
        let r = self.resolution as u64;
        [(id.0 % r) as u32, ((id.0 / r) % r) as u32, (id.0 / (r * r)) as u32]
    }

    pub fn cell_in_range(&self, lower: [i64; 3]) -> bool {
        lower.iter().all(|&c| c >= 0 && (c as usize) < self.resolution)
    }

    /// All vertex positions in grid coordinates, in vertex-index order.
    pub fn vertex_points(&self) -> Vec<Point> {
        let s = self.side() as u32;
        let mut out = Vec::with_capacity(self.num_vertices());
        for z in 0..s {
            for y in 0..s {
                for x in 0..s {
                    out.push(coord_point([x, y, z]));
                }
            }
        }
        out
    }

    pub fn all_edges(&self) -> impl Iterator<Item = (Coord, usize)> + '_ {
        let r = self.resolution as u32;
        (0..self.num_vertices() as u64).flat_map(move |v| {
            let c = self.vertex_coord(v);
            (0..3).filter(move |&a| c[a] < r).map(move |a| (c, a))
        })
    }

    pub fn all_faces(&self) -> impl Iterator<Item = (Coord, usize)> + '_ {
        let r = self.resolution as u32;
        (0..self.num_vertices() as u64).flat_map(move |v| {
            let c = self.vertex_coord(v);
            (0..3)
                .filter(move |&n| {
                    let (b, cc) = face_axes(n);
                    c[b] < r && c[cc] < r
                })
                .map(move |n| (c, n))
        })
    }
}

/// Labels (and raw values) at every grid vertex.
#[derive(Clone, Debug)]
pub struct LabelVolume {
    side: usize,
    labels: Vec<u8>,
    raw: Vec<f64>,
}

impl LabelVolume {
    pub fn from_labels(grid: &GridSpec, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != grid.num_vertices() {
            return Err(Error::InvalidGrid("label count does not match grid".into()));
        }
        let raw = labels.iter().map(|&l| f64::from(l)).collect();
        Ok(Self {
            side: grid.side(),
            labels,
            raw,
        })
    }

    #[inline]
    pub fn label(&self, c: Coord) -> u8 {
        self.labels[c[0] as usize + c[1] as usize * self.side + c[2] as usize * self.side * self.side]
    }

    #[inline]
    pub fn raw(&self, c: Coord) -> f64 {
        self.raw[c[0] as usize + c[1] as usize * self.side + c[2] as usize * self.side * self.side]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// True if any vertex on the outer shell of the grid is inside.
    pub fn boundary_inside(&self) -> bool {
        let last = (self.side - 1) as u32;
        let s = self.side as u32;
        for z in 0..s {
            for y in 0..s {
                for x in 0..s {
                    let on_shell = [x, y, z].iter().any(|&c| c == 0 || c == last);
                    if on_shell && self.label([x, y, z]) == 1 {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// One batch evaluation of the field at all `(R+1)^3` grid vertices.
pub fn sample_labels(eval: &Evaluator, grid: &GridSpec) -> LabelVolume {
    let raw = eval.raw(Stage::Labels, &grid.vertex_points());
    let iso = eval.iso_level();
    let labels = raw.iter().map(|&r| label_of(r, iso)).collect();
    LabelVolume {
        side: grid.side(),
        labels,
        raw,
    }
}

/// Grid edge whose endpoints have different labels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingEdge {
    pub id: EdgeId,
    pub lower: Coord,
    pub axis: u8,
    /// Whether the lower end is the inside vertex.
    pub lower_inside: bool,
}

impl CrossingEdge {
    pub fn upper(&self) -> Coord {
        step(self.lower, self.axis as usize)
    }

    pub fn v_in(&self) -> Point {
        coord_point(if self.lower_inside { self.lower } else { self.upper() })
    }

    pub fn v_out(&self) -> Point {
        coord_point(if self.lower_inside { self.upper() } else { self.lower })
    }

    /// Unit vector from the inside end to the outside end.
    pub fn direction(&self) -> Vector {
        let d = unit(self.axis as usize);
        if self.lower_inside {
            d
        } else {
            -d
        }
    }
}

/// Grid face with two or four crossing edges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingFace {
    pub id: FaceId,
    pub lower: Coord,
    pub normal: u8,
    /// Face-local corner labels (see [`FACE_CORNERS`]).
    pub corner_labels: [u8; 4],
    /// Face-local edges that cross (see [`FACE_EDGES`]).
    pub crossing: [bool; 4],
}

impl CrossingFace {
    pub fn crossing_count(&self) -> usize {
        self.crossing.iter().filter(|&&c| c).count()
    }

    pub fn is_ambiguous(&self) -> bool {
        self.crossing_count() == 4
    }

    /// Center in grid coordinates.
    pub fn center(&self) -> Point {
        let (b, c) = face_axes(self.normal as usize);
        let mut p = coord_point(self.lower);
        p[b] += 0.5;
        p[c] += 0.5;
        p
    }
}

#[derive(Clone, Debug, Default)]
pub struct ActiveSets {
    pub edges: Vec<CrossingEdge>,
    pub faces: Vec<CrossingFace>,
    pub cells: Vec<CellId>,
}

impl ActiveSets {
    pub fn edge_index(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn face_index(&self, id: FaceId) -> Option<usize> {
        self.faces.binary_search_by_key(&id, |f| f.id).ok()
    }
}

pub fn extract_active(labels: &LabelVolume, grid: &GridSpec) -> ActiveSets {
    let mut sets = ActiveSets::default();
    for (lower, axis) in grid.all_edges() {
        let a = labels.label(lower);
        let b = labels.label(step(lower, axis));
        if a != b {
            sets.edges.push(CrossingEdge {
                id: grid.edge_id(lower, axis),
                lower,
                axis: axis as u8,
                lower_inside: a == 1,
            });
        }
    }
    for (lower, normal) in grid.all_faces() {
        let corner_labels: [u8; 4] = std::array::from_fn(|k| labels.label(face_corner(lower, normal, k)));
        let crossing: [bool; 4] = std::array::from_fn(|k| corner_labels[k] != corner_labels[(k + 1) % 4]);
        if crossing.iter().filter(|&&c| c).count() >= 2 {
            sets.faces.push(CrossingFace {
                id: grid.face_id(lower, normal),
                lower,
                normal: normal as u8,
                corner_labels,
                crossing,
            });
        }
    }
    let r = grid.resolution() as u32;
    for z in 0..r {
        for y in 0..r {
            for x in 0..r {
                let c = cell_config(labels, [x, y, z]);
                if c != 0 && c != 0xff {
                    sets.cells.push(grid.cell_id([x, y, z]));
                }
            }
        }
    }
    sets
}

/// 8-bit corner configuration; bit `i` holds the label of corner
/// `lower + (i & 1, (i >> 1) & 1, (i >> 2) & 1)`.
pub fn cell_config(labels: &LabelVolume, lower: Coord) -> u8 {
    let mut config = 0u8;
    for i in 0..8u32 {
        let c = [lower[0] + (i & 1), lower[1] + ((i >> 1) & 1), lower[2] + ((i >> 2) & 1)];
        config |= labels.label(c) << i;
    }
    config
}
