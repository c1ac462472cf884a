use super::Mesh;
use crate::{Point, Vector};

const LEAF_SIZE: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosestHit {
    pub point: Point,
    pub distance: f64,
    pub triangle: usize,
}

/// Closest point on triangle `(a, b, c)` to `p` (Voronoi-region walk).
pub fn closest_point_on_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> Point {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

#[derive(Clone, Copy, Debug)]
struct Aabb {
    lo: Point,
    hi: Point,
}

impl Aabb {
    fn empty() -> Self {
        Self {
            lo: Point::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
            hi: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        }
    }

    fn grow(&mut self, p: &Point) {
        self.lo = self.lo.inf(p);
        self.hi = self.hi.sup(p);
    }

    fn merge(&mut self, o: &Aabb) {
        self.lo = self.lo.inf(&o.lo);
        self.hi = self.hi.sup(&o.hi);
    }

    fn dist2(&self, p: &Point) -> f64 {
        let d = Vector::from_fn(|i, _| (self.lo[i] - p[i]).max(0.0).max(p[i] - self.hi[i]));
        d.norm_squared()
    }
}

#[derive(Clone, Debug)]
enum Node {
    Leaf { bounds: Aabb, start: u32, end: u32 },
    Inner { bounds: Aabb, left: u32, right: u32 },
}

impl Node {
    fn bounds(&self) -> &Aabb {
        match self {
            Node::Leaf { bounds, .. } | Node::Inner { bounds, .. } => bounds,
        }
    }
}

/// Bounding-volume hierarchy over a mesh's triangles for closest-point queries.
#[derive(Clone, Debug)]
pub struct Bvh {
    nodes: Vec<Node>,
    order: Vec<u32>,
}

impl Bvh {
    pub fn build(mesh: &Mesh) -> Self {
        let boxes: Vec<Aabb> = mesh
            .triangles
            .iter()
            .map(|t| {
                let mut b = Aabb::empty();
                for p in mesh.corners(t) {
                    b.grow(&p);
                }
                b
            })
            .collect();
        let centroids: Vec<Point> = boxes.iter().map(|b| nalgebra::center(&b.lo, &b.hi)).collect();
        let mut bvh = Bvh {
            nodes: Vec::new(),
            order: (0..mesh.triangles.len() as u32).collect(),
        };
        if !boxes.is_empty() {
            bvh.split(0, boxes.len(), &boxes, &centroids);
        }
        bvh
    }

    fn split(&mut self, start: usize, end: usize, boxes: &[Aabb], centroids: &[Point]) -> u32 {
        let mut bounds = Aabb::empty();
        let mut cb = Aabb::empty();
        for &t in &self.order[start..end] {
            bounds.merge(&boxes[t as usize]);
            cb.grow(&centroids[t as usize]);
        }
        let id = self.nodes.len() as u32;
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf {
                bounds,
                start: start as u32,
                end: end as u32,
            });
            return id;
        }
        let ext = cb.hi - cb.lo;
        let axis = ext.imax();
        let mid = (start + end) / 2;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            centroids[a as usize][axis].total_cmp(&centroids[b as usize][axis]).then(a.cmp(&b))
        });
        self.nodes.push(Node::Leaf { bounds, start: 0, end: 0 });
        let left = self.split(start, mid, boxes, centroids);
        let right = self.split(mid, end, boxes, centroids);
        self.nodes[id as usize] = Node::Inner { bounds, left, right };
        id
    }

    /// Nearest point on the mesh. Ties go to the lowest triangle index.
    pub fn closest_point(&self, mesh: &Mesh, p: &Point) -> ClosestHit {
        let mut best = ClosestHit {
            point: *p,
            distance: f64::INFINITY,
            triangle: usize::MAX,
        };
        if self.nodes.is_empty() {
            return best;
        }
        let mut best_d2 = f64::INFINITY;
        let mut stack = vec![0u32];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n as usize];
            if node.bounds().dist2(p) > best_d2 {
                continue;
            }
            match *node {
                Node::Leaf { start, end, .. } => {
                    for &t in &self.order[start as usize..end as usize] {
                        let [a, b, c] = mesh.corners(&mesh.triangles[t as usize]);
                        let q = closest_point_on_triangle(p, &a, &b, &c);
                        let d2 = (q - p).norm_squared();
                        if d2 < best_d2 || (d2 == best_d2 && (t as usize) < best.triangle) {
                            best_d2 = d2;
                            best = ClosestHit {
                                point: q,
                                distance: 0.0,
                                triangle: t as usize,
                            };
                        }
                    }
                }
                Node::Inner { left, right, .. } => {
                    let dl = self.nodes[left as usize].bounds().dist2(p);
                    let dr = self.nodes[right as usize].bounds().dist2(p);
                    if dl <= dr {
                        stack.push(right);
                        stack.push(left);
                    } else {
                        stack.push(left);
                        stack.push(right);
                    }
                }
            }
        }
        best.distance = best_d2.sqrt();
        best
    }
}
