use std::sync::Arc;

use nalgebra::Rotation3;
use odc::field::{
    eval_labels, solid_angle, winding_number, AnalyticField, CsgField, MeshWindingField, SmoothedOccupancy,
};
use odc::meshlab::primitives;
use odc::{OccupancyField, Point, SharedField, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn shapes() -> Vec<(&'static str, Arc<AnalyticField>)> {
    let c = Point::new(0.5, 0.5, 0.5);
    let rot = Rotation3::from_euler_angles(0.5, 0.3, 0.1);
    vec![
        ("sphere", Arc::new(AnalyticField::sphere(c, 0.3))),
        ("box", Arc::new(AnalyticField::cuboid(c, Vector::new(0.2, 0.25, 0.3), rot))),
        ("torus", Arc::new(AnalyticField::torus(c, 0.25, 0.1))),
        ("plane", Arc::new(AnalyticField::half_space(c, Vector::new(1.0, 2.0, -0.5)))),
    ]
}

fn random_points(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point::new(rng.random_range(-0.1..1.1), rng.random_range(-0.1..1.1), rng.random_range(-0.1..1.1)))
        .collect()
}

fn inside(f: &AnalyticField, p: &Point) -> bool {
    f.distance(p) < 0.0
}

#[test]
fn smoothed_labels_match_base_labels_off_the_surface() {
    let pts = random_points(100_000, 11);
    for (name, base) in shapes() {
        for k in [4.0, 128.0, 4096.0] {
            let smooth = SmoothedOccupancy::new(base.clone(), k).unwrap();
            let a = eval_labels(&smooth, &pts).unwrap();
            let b = eval_labels(base.as_ref(), &pts).unwrap();
            for (i, p) in pts.iter().enumerate() {
                if base.distance(p) != 0.0 {
                    assert_eq!(a[i], b[i], "{name} k={k} at {p:?}");
                }
            }
        }
    }
}

#[test]
fn csg_labels_follow_set_algebra() {
    let pts = random_points(100_000, 12);
    let s = shapes();
    let (a, b, c) = (s[0].1.clone(), s[1].1.clone(), s[2].1.clone());
    let (da, db, dc): (SharedField, SharedField, SharedField) = (a.clone(), b.clone(), c.clone());
    let union = CsgField::union(vec![da.clone(), db.clone(), dc.clone()]);
    let inter = CsgField::intersection(vec![da.clone(), db.clone()]);
    let diff = CsgField::difference(db.clone(), da.clone());
    let comp = CsgField::complement(dc.clone());
    let nested = CsgField::difference(Arc::new(CsgField::union(vec![da, db])), dc);
    let lu = eval_labels(&union, &pts).unwrap();
    let li = eval_labels(&inter, &pts).unwrap();
    let ld = eval_labels(&diff, &pts).unwrap();
    let lc = eval_labels(&comp, &pts).unwrap();
    let ln = eval_labels(&nested, &pts).unwrap();
    for (i, p) in pts.iter().enumerate() {
        let (ia, ib, ic) = (inside(&a, p), inside(&b, p), inside(&c, p));
        assert_eq!(lu[i] == 1, ia || ib || ic);
        assert_eq!(li[i] == 1, ia && ib);
        assert_eq!(ld[i] == 1, ib && !ia);
        assert_eq!(lc[i] == 1, !ic);
        assert_eq!(ln[i] == 1, (ia || ib) && !ic);
    }
}

#[test]
fn winding_of_closed_tessellations_agrees_with_the_solid() {
    let c = Point::new(0.5, 0.5, 0.5);
    let rot = Rotation3::from_euler_angles(0.4, -0.2, 0.7);
    let half = Vector::new(0.2, 0.25, 0.3);
    let solid = AnalyticField::cuboid(c, half, rot);
    let field = MeshWindingField::new(primitives::box_mesh(c, half, rot)).unwrap();
    let mut checked = 0;
    for p in random_points(20_000, 13) {
        let d = solid.distance(&p);
        if d.abs() < 1e-3 {
            continue;
        }
        let w = field.winding(&p);
        let expected = if d < 0.0 { 1.0 } else { 0.0 };
        assert!((w - expected).abs() < 1e-6, "winding {w} at {p:?}, distance {d}");
        checked += 1;
    }
    assert!(checked > 19_000);
}

#[test]
fn single_triangle_winding_matches_monte_carlo_solid_angle() {
    let tri = [Point::new(0.0, 0.0, 0.0), Point::new(1.0, 0.0, 0.0), Point::new(0.0, 1.0, 0.0)];
    let p = Point::new(1.0 / 3.0, 1.0 / 3.0, 0.4);
    let mesh = odc::Mesh::new(tri.to_vec(), vec![[0, 1, 2]]);
    let w = winding_number(&mesh, &p).unwrap();
    let omega = solid_angle(&p, &tri[0], &tri[1], &tri[2]);
    assert!((w - omega / (4.0 * std::f64::consts::PI)).abs() < 1e-12);

    // Fraction of uniform directions from p whose ray hits the triangle.
    let n = 10_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut hits = 0usize;
    for _ in 0..n {
        let z: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).sqrt();
        let d = Vector::new(r * phi.cos(), r * phi.sin(), z);
        if d.z >= 0.0 {
            continue;
        }
        let t = -p.z / d.z;
        let (x, y) = (p.x + t * d.x, p.y + t * d.y);
        hits += usize::from(x >= 0.0 && y >= 0.0 && x + y <= 1.0);
    }
    let mc = hits as f64 / n as f64;
    // The triangle faces +z, so a point above it sees a negative winding.
    assert!((w.abs() - mc).abs() < 1e-3, "winding {w}, monte carlo {mc}");
}

#[test]
fn spec_field_examples() {
    let c = Point::new(0.5, 0.5, 0.5);
    let s = AnalyticField::sphere(c, 0.3);
    assert_eq!(eval_labels(&s, &[c, Point::new(0.99, 0.5, 0.5)]).unwrap(), vec![1, 0]);
    let b: SharedField = Arc::new(AnalyticField::sphere(Point::new(2.0, 0.0, 0.0), 0.5));
    let u = CsgField::union(vec![Arc::new(s), b]);
    assert_eq!(eval_labels(&u, &[Point::new(2.1, 0.0, 0.0)]).unwrap(), vec![1]);
    let cube = MeshWindingField::new(primitives::cube(Point::origin(), 0.5)).unwrap();
    assert!((cube.winding(&Point::origin()) - 1.0).abs() < 1e-9);
    assert!(cube.winding(&Point::new(3.0, 0.0, 0.0)).abs() < 1e-9);
}

proptest! {
    #[test]
    fn raw_values_are_binary_for_analytic_fields(x in -1.0f64..2.0, y in -1.0f64..2.0, z in -1.0f64..2.0) {
        for (_, f) in shapes() {
            let mut out = [0.0];
            f.eval_raw(&[Point::new(x, y, z)], &mut out);
            prop_assert!(out[0] == 0.0 || out[0] == 1.0);
        }
    }

    #[test]
    fn smoothed_raw_is_logistic_of_distance(x in -0.5f64..1.5, y in -0.5f64..1.5, z in -0.5f64..1.5, k in 1.0f64..500.0) {
        let base = Arc::new(AnalyticField::sphere(Point::new(0.5, 0.5, 0.5), 0.3));
        let f = SmoothedOccupancy::new(base.clone(), k).unwrap();
        let p = Point::new(x, y, z);
        let mut out = [0.0];
        f.eval_raw(&[p], &mut out);
        prop_assert!((out[0] - SmoothedOccupancy::logistic(k, base.distance(&p))).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&out[0]));
    }
}
