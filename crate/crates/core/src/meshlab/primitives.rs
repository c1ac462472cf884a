//! Closed, outward-oriented reference meshes.

use std::collections::HashMap;

use nalgebra::Rotation3;

use super::{Mesh, VertexTag};
use crate::{Point, Vector};

fn external(vertices: Vec<Point>, triangles: Vec<[u32; 3]>) -> Mesh {
    let provenance = vec![VertexTag::External; vertices.len()];
    Mesh {
        vertices,
        triangles,
        provenance,
    }
}

/// Regular tetrahedron inscribed in the cube `[0, 1]^3`.
pub fn tetrahedron() -> Mesh {
    let v = vec![
        Point::new(0.0, 0.0, 0.0),
        Point::new(1.0, 1.0, 0.0),
        Point::new(1.0, 0.0, 1.0),
        Point::new(0.0, 1.0, 1.0),
    ];
    external(v, vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
}

/// Oriented box with 12 triangles.
pub fn box_mesh(center: Point, half_extents: Vector, rotation: Rotation3<f64>) -> Mesh {
    let v: Vec<Point> = (0..8)
        .map(|i| {
            let s = Vector::new(
                if i & 1 == 1 { 1.0 } else { -1.0 },
                if i & 2 == 2 { 1.0 } else { -1.0 },
                if i & 4 == 4 { 1.0 } else { -1.0 },
            );
            center + rotation * s.component_mul(&half_extents)
        })
        .collect();
    let quads = [
        [0, 2, 3, 1], // -z
        [4, 5, 7, 6], // +z
        [0, 1, 5, 4], // -y
        [2, 6, 7, 3], // +y
        [0, 4, 6, 2], // -x
        [1, 3, 7, 5], // +x
    ];
    let t = quads.iter().flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]).collect();
    external(v, t)
}

/// Axis-aligned cube.
pub fn cube(center: Point, half: f64) -> Mesh {
    box_mesh(center, Vector::repeat(half), Rotation3::identity())
}

/// Subdivided icosahedron projected onto a sphere.
pub fn icosphere(center: Point, radius: f64, subdivisions: u32) -> Mesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v: Vec<Vector> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vector::new(x, y, z).normalize())
    .collect();
    let mut t: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut mid: HashMap<(u32, u32), u32> = HashMap::new();
        let mut midpoint = |a: u32, b: u32, v: &mut Vec<Vector>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                v.push((v[a as usize] + v[b as usize]).normalize());
                (v.len() - 1) as u32
            })
        };
        let mut next = Vec::with_capacity(t.len() * 4);
        for [a, b, c] in t {
            let ab = midpoint(a, b, &mut v);
            let bc = midpoint(b, c, &mut v);
            let ca = midpoint(c, a, &mut v);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        t = next;
    }
    external(v.into_iter().map(|d| center + d * radius).collect(), t)
}

/// Square `[0, size]^2` in the plane `z = z0`, split into two triangles, normal `+z`.
pub fn square(size: f64, z0: f64) -> Mesh {
    let v = vec![
        Point::new(0.0, 0.0, z0),
        Point::new(size, 0.0, z0),
        Point::new(size, size, z0),
        Point::new(0.0, size, z0),
    ];
    external(v, vec![[0, 1, 2], [0, 2, 3]])
}
