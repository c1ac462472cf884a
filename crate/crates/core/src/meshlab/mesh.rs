use std::collections::BTreeSet;

use serde::Serialize;

use crate::grid::{CellId, EdgeId};
use crate::{Point, Vector};

/// Where an output vertex came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VertexTag {
    /// 3D point of partition `partition` in `cell`.
    Cell { cell: CellId, partition: u8 },
    /// 1D point of a crossing edge.
    Edge { edge: EdgeId },
    /// Read from a file or built by hand.
    External,
}

/// Indexed triangle mesh. `provenance` is either empty or one tag per vertex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[u32; 3]>,
    pub provenance: Vec<VertexTag>,
}

impl Mesh {
    pub fn new(vertices: Vec<Point>, triangles: Vec<[u32; 3]>) -> Self {
        Self {
            vertices,
            triangles,
            provenance: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn corners(&self, t: &[u32; 3]) -> [Point; 3] {
        t.map(|i| self.vertices[i as usize])
    }

    /// Unnormalized normal `(b - a) x (c - a)`.
    pub fn face_cross(&self, t: &[u32; 3]) -> Vector {
        let [a, b, c] = self.corners(t);
        (b - a).cross(&(c - a))
    }

    pub fn face_normal(&self, t: &[u32; 3]) -> Vector {
        let n = self.face_cross(t);
        let len = n.norm();
        if len > 0.0 {
            n / len
        } else {
            Vector::zeros()
        }
    }

    pub fn area(&self, t: &[u32; 3]) -> f64 {
        0.5 * self.face_cross(t).norm()
    }

    pub fn total_area(&self) -> f64 {
        self.triangles.iter().map(|t| self.area(t)).sum()
    }

    /// Axis-aligned bounds of all vertices.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Checks index range and repeated indices.
    pub fn check_indices(&self) -> Result<(), String> {
        let n = self.vertices.len() as u32;
        for (i, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(format!("triangle {i} has an index out of range"));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(format!("triangle {i} repeats a vertex"));
            }
        }
        if !self.provenance.is_empty() && self.provenance.len() != self.vertices.len() {
            return Err("provenance length differs from vertex count".into());
        }
        Ok(())
    }

    /// Undirected edges, each as `(low, high)`.
    pub fn edges(&self) -> BTreeSet<(u32, u32)> {
        let mut set = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        set
    }

    /// `V - E + F`, counting only vertices referenced by a triangle.
    pub fn euler_characteristic(&self) -> i64 {
        let used: BTreeSet<u32> = self.triangles.iter().flatten().copied().collect();
        used.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    /// Applies `f` to every vertex.
    pub fn map_vertices(&mut self, f: impl Fn(&Point) -> Point) {
        for v in &mut self.vertices {
            *v = f(v);
        }
    }
}
