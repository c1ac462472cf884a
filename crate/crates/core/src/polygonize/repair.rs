use std::collections::BTreeMap;

use serde::Serialize;

use crate::meshlab::Mesh;
use crate::Vector;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RepairStats {
    pub nonmanifold_edges: u64,
    pub duplicated_vertices: u64,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (a, b) = (find(parent, a), find(parent, b));
    if a != b {
        parent[a.max(b)] = a.min(b);
    }
}

fn opposite(t: &[u32; 3], a: u32, b: u32) -> u32 {
    *t.iter().find(|&&v| v != a && v != b).unwrap()
}

fn is_forward(t: &[u32; 3], a: u32, b: u32) -> bool {
    (0..3).any(|k| t[k] == a && t[(k + 1) % 3] == b)
}

/// Splits the triangles around a non-manifold edge into sheets of two.
///
/// Triangles are sorted by angle about `a -> b`. A triangle using `a -> b`
/// bounds the solid on its clockwise side, so it pairs with its clockwise
/// neighbour, which must use `b -> a`. Inconsistent orientation falls back to
/// consecutive pairs.
fn edge_sheets(mesh: &Mesh, a: u32, b: u32, tris: &[u32]) -> Vec<usize> {
    let pa = mesh.vertices[a as usize];
    let d = (mesh.vertices[b as usize] - pa).normalize();
    let e1 = if d.x.abs() < 0.9 { Vector::x() } else { Vector::y() };
    let e1 = (e1 - d * d.dot(&e1)).normalize();
    let e2 = d.cross(&e1);
    let mut order: Vec<(f64, usize)> = tris
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let c = mesh.vertices[opposite(&mesh.triangles[t as usize], a, b) as usize] - pa;
            (c.dot(&e2).atan2(c.dot(&e1)), k)
        })
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let n = order.len();
    let fwd: Vec<bool> = order
        .iter()
        .map(|&(_, k)| is_forward(&mesh.triangles[tris[k] as usize], a, b))
        .collect();
    let mut group = vec![usize::MAX; tris.len()];
    let mut ok = n.is_multiple_of(2);
    if ok {
        for i in 0..n {
            if fwd[i] {
                let j = (i + n - 1) % n;
                if fwd[j] || group[order[j].1] != usize::MAX {
                    ok = false;
                    break;
                }
                group[order[i].1] = i;
                group[order[j].1] = i;
            }
        }
        ok &= group.iter().all(|&g| g != usize::MAX);
    }
    if !ok {
        for i in 0..n {
            group[order[i].1] = i / 2;
        }
    }
    group
}

/// Duplicates vertices so every vertex has one edge-connected fan, treating
/// each sheet of a non-manifold edge as its own connection.
pub fn repair_nonmanifold(mesh: &Mesh) -> (Mesh, RepairStats) {
    let mut stats = RepairStats::default();
    let mut edge_tris: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            edge_tris.entry((a.min(b), a.max(b))).or_default().push(t as u32);
        }
    }
    // (edge, triangle) -> sheet id, only for non-manifold edges.
    let mut sheet: BTreeMap<((u32, u32), u32), usize> = BTreeMap::new();
    for (&(a, b), tris) in &edge_tris {
        if tris.len() > 2 {
            stats.nonmanifold_edges += 1;
            for (k, g) in edge_sheets(mesh, a, b, tris).into_iter().enumerate() {
                sheet.insert(((a, b), tris[k]), g);
            }
        }
    }

    let mut incident = vec![Vec::new(); mesh.vertices.len()];
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for &v in tri {
            incident[v as usize].push(t as u32);
        }
    }
    let mut out = mesh.clone();
    for (v, inc) in incident.iter().enumerate() {
        if inc.len() < 2 {
            continue;
        }
        let v = v as u32;
        let mut parent: Vec<usize> = (0..inc.len()).collect();
        let mut by_neighbor: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (k, &t) in inc.iter().enumerate() {
            for &w in &mesh.triangles[t as usize] {
                if w != v {
                    by_neighbor.entry(w).or_default().push(k);
                }
            }
        }
        for (&w, ks) in &by_neighbor {
            let e = (v.min(w), v.max(w));
            if edge_tris[&e].len() > 2 {
                for i in 0..ks.len() {
                    for j in i + 1..ks.len() {
                        if sheet[&(e, inc[ks[i]])] == sheet[&(e, inc[ks[j]])] {
                            union(&mut parent, ks[i], ks[j]);
                        }
                    }
                }
            } else {
                for w in ks.windows(2) {
                    union(&mut parent, w[0], w[1]);
                }
            }
        }
        let mut new_index: BTreeMap<usize, u32> = BTreeMap::new();
        for k in 0..inc.len() {
            let root = find(&mut parent, k);
            if root == 0 {
                continue;
            }
            let idx = *new_index.entry(root).or_insert_with(|| {
                out.vertices.push(mesh.vertices[v as usize]);
                if !mesh.provenance.is_empty() {
                    out.provenance.push(mesh.provenance[v as usize]);
                }
                stats.duplicated_vertices += 1;
                (out.vertices.len() - 1) as u32
            });
            for s in out.triangles[inc[k] as usize].iter_mut() {
                if *s == v {
                    *s = idx;
                }
            }
        }
    }
    (out, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meshlab::{primitives, validate_manifold};
    use crate::Point;

    #[test]
    fn manifold_mesh_is_unchanged() {
        let m = primitives::icosphere(Point::origin(), 1.0, 1);
        let (r, s) = repair_nonmanifold(&m);
        assert_eq!(r, m);
        assert_eq!(s.duplicated_vertices, 0);
    }

    #[test]
    fn double_cone_apex_is_duplicated() {
        // Two tetrahedra sharing only vertex 0.
        let mut v = vec![Point::origin()];
        let mut t = Vec::new();
        for s in [1.0, -1.0] {
            let base = v.len() as u32;
            v.extend([Point::new(1.0, 0.0, s), Point::new(-0.5, 0.8, s), Point::new(-0.5, -0.8, s)]);
            let (a, b, c) = (base, base + 1, base + 2);
            t.extend([[0, a, b], [0, b, c], [0, c, a], [a, c, b]]);
        }
        let m = Mesh::new(v, t);
        assert!(!validate_manifold(&m).manifold);
        let (r, s) = repair_nonmanifold(&m);
        assert_eq!(s.duplicated_vertices, 1);
        assert_eq!(r.vertices.len(), m.vertices.len() + 1);
        assert!(validate_manifold(&r).manifold);
    }

    #[test]
    fn four_fins_on_one_edge_become_two_sheets() {
        let v = vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(0.0, 0.0, 1.0),
            Point::new(1.0, 0.0, 0.5),
            Point::new(0.0, 1.0, 0.5),
            Point::new(-1.0, 0.0, 0.5),
            Point::new(0.0, -1.0, 0.5),
        ];
        // Two wedges: fins at 0 and 90 degrees, fins at 180 and 270 degrees.
        let t = vec![[1, 0, 2], [0, 1, 3], [1, 0, 4], [0, 1, 5]];
        let m = Mesh::new(v, t);
        assert_eq!(validate_manifold(&m).nonmanifold_edges, vec![(0, 1)]);
        let (r, s) = repair_nonmanifold(&m);
        assert_eq!(s.nonmanifold_edges, 1);
        let rep = validate_manifold(&r);
        assert!(rep.manifold, "{rep:?}");
        let mut counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for tri in &r.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        assert_eq!(counts.values().filter(|&&c| c == 2).count(), 2);
        assert!(counts.values().all(|&c| c <= 2));
    }
}
