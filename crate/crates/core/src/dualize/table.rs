//! Cube topology and the primal-face table.
//!
//! Corners are numbered by offset bits `x | y << 1 | z << 2`. Cube edge
//! `axis * 4 + ob + 2 * oc` runs along `axis` from the corner with offsets
//! `ob`, `oc` on the two cyclically following axes. Cube face
//! `normal * 2 + side` lies at `offset[normal] == side`.
//!
//! Primal faces are traced directly from the label configuration: on each
//! cube face the crossing edges are paired (two crossings pair trivially;
//! four crossings pair around the corners whose label differs from the
//! face-center label), and chaining the pairs across faces closes the
//! cycles. The table caches the cycles for every configuration and every
//! choice of face-center labels.

use std::sync::OnceLock;

use crate::grid::{face_axes, FACE_CORNERS, FACE_EDGES};

pub type Offset = [u32; 3];

pub const CORNERS: [Offset; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [1, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

pub fn corner_index(o: Offset) -> usize {
    (o[0] + 2 * o[1] + 4 * o[2]) as usize
}

pub fn cube_edge(axis: usize, offset: Offset) -> usize {
    let (b, c) = face_axes(axis);
    axis * 4 + (offset[b] + 2 * offset[c]) as usize
}

/// Lower corner offset and axis of a cube edge.
pub fn cube_edge_lower(e: usize) -> (Offset, usize) {
    let axis = e / 4;
    let (b, c) = face_axes(axis);
    let mut o = [0; 3];
    o[b] = (e % 4 % 2) as u32;
    o[c] = (e % 4 / 2) as u32;
    (o, axis)
}

pub fn cube_edge_corners(e: usize) -> (usize, usize) {
    let (o, axis) = cube_edge_lower(e);
    let mut hi = o;
    hi[axis] = 1;
    (corner_index(o), corner_index(hi))
}

/// Cube edges of face `f` in face-local order.
pub fn cube_face_edges(f: usize) -> [usize; 4] {
    let (n, side) = (f / 2, (f % 2) as u32);
    let (b, c) = face_axes(n);
    std::array::from_fn(|k| {
        let ((du, dv), along_v) = FACE_EDGES[k];
        let mut o = [0; 3];
        o[n] = side;
        o[b] = du;
        o[c] = dv;
        cube_edge(if along_v { c } else { b }, o)
    })
}

pub fn cube_face_corners(f: usize) -> [usize; 4] {
    let (n, side) = (f / 2, (f % 2) as u32);
    let (b, c) = face_axes(n);
    std::array::from_fn(|k| {
        let (du, dv) = FACE_CORNERS[k];
        let mut o = [0; 3];
        o[n] = side;
        o[b] = du;
        o[c] = dv;
        corner_index(o)
    })
}

/// The two cube faces containing edge `e`, ascending.
pub fn edge_faces(e: usize) -> [usize; 2] {
    let (o, axis) = cube_edge_lower(e);
    let (b, c) = face_axes(axis);
    let mut f = [b * 2 + o[b] as usize, c * 2 + o[c] as usize];
    f.sort_unstable();
    f
}

#[inline]
pub fn corner_label(config: u8, corner: usize) -> u8 {
    (config >> corner) & 1
}

pub fn edge_crosses(config: u8, e: usize) -> bool {
    let (a, b) = cube_edge_corners(e);
    corner_label(config, a) != corner_label(config, b)
}

pub fn face_crossings(config: u8, f: usize) -> usize {
    cube_face_edges(f).iter().filter(|&&e| edge_crosses(config, e)).count()
}

/// Pairs of face-local edge slots joined by the surface on one face.
///
/// `corner_labels` are in face-local order. With four crossings the face is
/// ambiguous and `center` (the face-center label) decides: the corners whose
/// label differs from the center are cut off individually.
pub fn pair_slots(corner_labels: [u8; 4], center: Option<u8>) -> Vec<(usize, usize)> {
    let slots: Vec<usize> = (0..4).filter(|&k| corner_labels[k] != corner_labels[(k + 1) % 4]).collect();
    match slots.len() {
        2 => vec![(slots[0], slots[1])],
        4 => {
            let center = center.unwrap_or(0);
            // Corner k touches slots k - 1 and k.
            (0..4)
                .filter(|&k| corner_labels[k] != center)
                .map(|k| {
                    let a = (k + 3) % 4;
                    (a.min(k), a.max(k))
                })
                .collect()
        }
        _ => Vec::new(),
    }
}

/// [`pair_slots`] for cube face `f` of a configuration.
pub fn face_pairs(config: u8, f: usize, center_inside: bool) -> Vec<(usize, usize)> {
    let corners = cube_face_corners(f);
    pair_slots(corners.map(|c| corner_label(config, c)), Some(u8::from(center_inside)))
}

/// Closed chain of crossing cube edges; `faces[i]` joins `edges[i]` and `edges[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<u8>,
    pub faces: Vec<u8>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Bit `f` of `face_bits` is the face-center label of cube face `f`.
pub fn trace_cycles(config: u8, face_bits: u8) -> Vec<Cycle> {
    // partner[f][e] = edge paired with e on face f
    let mut partner = [[u8::MAX; 12]; 6];
    for f in 0..6 {
        let edges = cube_face_edges(f);
        for (a, b) in face_pairs(config, f, (face_bits >> f) & 1 == 1) {
            partner[f][edges[a]] = edges[b] as u8;
            partner[f][edges[b]] = edges[a] as u8;
        }
    }
    let mut visited = [false; 12];
    let mut cycles = Vec::new();
    for start in 0..12 {
        if visited[start] || !edge_crosses(config, start) {
            continue;
        }
        let mut cycle = Cycle {
            edges: Vec::new(),
            faces: Vec::new(),
        };
        let mut cur = start;
        let mut face = edge_faces(start)[0];
        loop {
            visited[cur] = true;
            cycle.edges.push(cur as u8);
            cycle.faces.push(face as u8);
            let next = partner[face][cur] as usize;
            debug_assert!(next < 12, "unpaired crossing edge");
            let nf = edge_faces(next);
            face = if nf[0] == face { nf[1] } else { nf[0] };
            if next == start {
                break;
            }
            cur = next;
        }
        cycles.push(cycle);
    }
    cycles
}

static TABLE: OnceLock<Vec<Vec<Cycle>>> = OnceLock::new();

/// Cached primal faces for a configuration and face-center bits.
pub fn cycles(config: u8, face_bits: u8) -> &'static [Cycle] {
    let table = TABLE.get_or_init(|| {
        (0..256usize * 64)
            .map(|i| trace_cycles((i / 64) as u8, (i % 64) as u8))
            .collect()
    });
    &table[config as usize * 64 + (face_bits & 0x3f) as usize]
}

/// Faces of a configuration with four crossing edges.
pub fn ambiguous_faces(config: u8) -> impl Iterator<Item = usize> {
    (0..6).filter(move |&f| face_crossings(config, f) == 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_is_consistent() {
        for e in 0..12 {
            let (o, axis) = cube_edge_lower(e);
            assert_eq!(cube_edge(axis, o), e);
            for f in edge_faces(e) {
                assert!(cube_face_edges(f).contains(&e));
            }
        }
        for f in 0..6 {
            let edges = cube_face_edges(f);
            let corners = cube_face_corners(f);
            for k in 0..4 {
                let (a, b) = cube_edge_corners(edges[k]);
                let (c0, c1) = (corners[k], corners[(k + 1) % 4]);
                assert!((a, b) == (c0, c1) || (a, b) == (c1, c0), "face {f} slot {k}");
            }
        }
    }

    #[test]
    fn one_corner_gives_one_triangle_cycle() {
        let cs = trace_cycles(0b0000_0001, 0);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].len(), 3);
    }

    #[test]
    fn face_diagonal_splits_or_joins_on_center_label() {
        // Corners 0 and 3 share face z = 0 (cube face 4) diagonally.
        let config = 0b0000_1001;
        assert_eq!(ambiguous_faces(config).collect::<Vec<_>>(), vec![4]);
        let apart = trace_cycles(config, 0);
        assert_eq!(apart.iter().map(Cycle::len).collect::<Vec<_>>(), vec![3, 3]);
        let joined = trace_cycles(config, 1 << 4);
        assert_eq!(joined.iter().map(Cycle::len).collect::<Vec<_>>(), vec![6]);
    }

    #[test]
    fn full_and_empty_cells_have_no_cycles() {
        assert!(trace_cycles(0, 0).is_empty());
        assert!(trace_cycles(0xff, 0x3f).is_empty());
    }

    #[test]
    fn every_configuration_partitions_its_crossing_edges() {
        for config in 0..=255u8 {
            for bits in 0..64u8 {
                let cs = cycles(config, bits);
                let mut seen = [0u8; 12];
                for c in cs {
                    assert!(c.len() >= 3);
                    for (i, &e) in c.edges.iter().enumerate() {
                        seen[e as usize] += 1;
                        // Consecutive edges share the recorded face; each edge uses both of its faces.
                        let next = c.edges[(i + 1) % c.len()] as usize;
                        let f = c.faces[i] as usize;
                        assert!(cube_face_edges(f).contains(&(e as usize)));
                        assert!(cube_face_edges(f).contains(&next));
                        let prev_f = c.faces[(i + c.len() - 1) % c.len()];
                        assert_ne!(prev_f, c.faces[i]);
                    }
                }
                for e in 0..12 {
                    assert_eq!(seen[e], u8::from(edge_crosses(config, e)), "config {config:#010b} edge {e}");
                }
            }
        }
    }
}
