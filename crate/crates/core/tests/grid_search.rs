use std::sync::Arc;

use odc::field::{eval_labels, AnalyticField, CsgField, Evaluator, Stage};
use odc::grid::{cell_config, extract_active, sample_labels, LabelVolume};
use odc::search::{
    find_1d_points, find_2d_points, line_binary_search, FacePair, LineSearchParams, Point2DStatus, Ray,
};
use odc::{extract, ExtractOptions, GridSpec, OccupancyField, Point, SearchBudget, SharedField, Vector};
use proptest::prelude::*;

fn blob(centers: &[(f64, f64, f64, f64)], cut: Option<(f64, f64, f64, f64)>) -> SharedField {
    let kids: Vec<SharedField> = centers
        .iter()
        .map(|&(x, y, z, r)| Arc::new(AnalyticField::sphere(Point::new(x, y, z), r)) as SharedField)
        .collect();
    let u: SharedField = Arc::new(CsgField::union(kids));
    match cut {
        Some((x, y, z, r)) => Arc::new(CsgField::difference(u, Arc::new(AnalyticField::sphere(Point::new(x, y, z), r)))),
        None => u,
    }
}

fn sphere_strategy() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.2f64..0.8, 0.2f64..0.8, 0.2f64..0.8, 0.05f64..0.25)
}

/// Crossing counts of the twelve cube edges and of each of the six cube faces.
fn cell_crossings(labels: &LabelVolume, lower: [u32; 3]) -> (usize, [usize; 6]) {
    let at = |d: [u32; 3]| labels.label([lower[0] + d[0], lower[1] + d[1], lower[2] + d[2]]);
    let mut edges = 0;
    let mut faces = [0usize; 6];
    for axis in 0..3 {
        let (b, c) = ((axis + 1) % 3, (axis + 2) % 3);
        for (ob, oc) in [(0u32, 0u32), (1, 0), (0, 1), (1, 1)] {
            let mut p = [0u32; 3];
            p[b] = ob;
            p[c] = oc;
            let mut q = p;
            q[axis] = 1;
            if at(p) != at(q) {
                edges += 1;
                // The edge lies on the cube faces normal to b and to c.
                faces[2 * b + ob as usize] += 1;
                faces[2 * c + oc as usize] += 1;
            }
        }
    }
    (edges, faces)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn crossing_faces_and_cells_have_even_edge_counts(
        spheres in prop::collection::vec(sphere_strategy(), 1..4),
        cut in prop::option::of(sphere_strategy()),
        r in 4usize..14,
    ) {
        let field = blob(&spheres, cut);
        let grid = GridSpec::unit_cube(r).unwrap();
        let eval = Evaluator::new(field.as_ref(), &grid);
        let labels = sample_labels(&eval, &grid);
        let active = extract_active(&labels, &grid);
        for f in &active.faces {
            let n = f.crossing_count();
            prop_assert!(n == 2 || n == 4, "face with {n} crossings");
        }
        for &c in &active.cells {
            let lower = grid.cell_coord(c);
            let cfg = cell_config(&labels, lower);
            prop_assert!(cfg != 0 && cfg != 255);
            let (edges, faces) = cell_crossings(&labels, lower);
            // One inside corner gives three crossing edges, so only face counts are even.
            prop_assert!(edges >= 3);
            prop_assert!(faces.iter().all(|n| n % 2 == 0), "{faces:?}");
        }
    }

    #[test]
    fn line_search_stays_in_range_on_the_reference_side(
        ox in -1.0f64..1.0, oy in -1.0f64..1.0, oz in -1.0f64..1.0,
        dx in -1.0f64..1.0, dy in -1.0f64..1.0, dz in 0.1f64..1.0,
        cx in -1.0f64..1.0, cy in -1.0f64..1.0, cz in -1.0f64..1.0, radius in 0.05f64..1.0,
        n_linear in 1u32..6, n_binary in 0u32..14, range in 0.1f64..2.0,
    ) {
        let field = AnalyticField::sphere(Point::new(cx, cy, cz), radius);
        let eval = Evaluator::identity(&field);
        let origin = Point::new(ox, oy, oz);
        let ref_label = eval_labels(&field, &[origin]).unwrap()[0];
        let ray = Ray { origin, dir: Vector::new(dx, dy, dz).normalize(), ref_label };
        let params = LineSearchParams { n_linear, n_binary, max_range: range };
        let hit = line_binary_search(&[ray], &params, &eval, Stage::Search2d)[0];
        prop_assert!(hit.distance >= 0.0 && hit.distance <= range);
        prop_assert_eq!(eval_labels(&field, &[hit.point]).unwrap()[0], ref_label);
        prop_assert_eq!(eval.stats().search_2d.batches, u64::from(n_linear + n_binary));
    }
}

#[test]
fn extraction_is_bit_identical_across_runs() {
    let field = blob(&[(0.4, 0.5, 0.5, 0.2), (0.6, 0.55, 0.45, 0.18)], Some((0.5, 0.3, 0.5, 0.12)));
    let opts = ExtractOptions::new(GridSpec::unit_cube(24).unwrap());
    let a = extract(field.as_ref(), &opts).unwrap();
    let b = extract(field.as_ref(), &opts).unwrap();
    assert_eq!(a.mesh, b.mesh);
    assert_eq!(a.stats, b.stats);
}

fn plane_edges(offset: f64, r: usize) -> (GridSpec, AnalyticField) {
    let grid = GridSpec::unit_cube(r).unwrap();
    let f = AnalyticField::half_space(Point::new(offset, 0.0, 0.0), Vector::x());
    (grid, f)
}

#[test]
fn bisection_meets_the_third_and_keeps_a_valid_bracket_at_every_iteration() {
    // Crossing at t = 1/3 along each x edge of the first layer.
    let r = 4;
    let (grid, f) = plane_edges(1.0 / (3.0 * r as f64), r);
    let eval = Evaluator::new(&f, &grid);
    let labels = sample_labels(&eval, &grid);
    let active = extract_active(&labels, &grid);
    assert_eq!(active.edges.len(), (r + 1) * (r + 1));
    for iters in 1..=15 {
        let ev = Evaluator::new(&f, &grid);
        let pts = find_1d_points(&active.edges, &labels, &ev, iters).unwrap();
        assert_eq!(ev.stats().search_1d.batches, u64::from(iters));
        assert_eq!(ev.stats().search_1d.points, u64::from(iters) * active.edges.len() as u64);
        let half = 2f64.powi(-(iters as i32) - 1);
        for (e, p) in active.edges.iter().zip(&pts) {
            let at = |t: f64| e.v_in() + (e.v_out() - e.v_in()) * t;
            let l = ev.labels(Stage::Search1d, &[at(p.t - half), at(p.t + half)]);
            assert_eq!(l, vec![1, 0], "bracket after {iters} iterations");
            if iters == 15 {
                assert!((p.t - 1.0 / 3.0).abs() <= 2f64.powi(-15));
            }
        }
    }
}

#[test]
fn bisection_of_a_midpoint_crossing_lands_within_half_a_step() {
    let r = 4;
    let (grid, f) = plane_edges(0.5 / r as f64, r);
    let eval = Evaluator::new(&f, &grid);
    let labels = sample_labels(&eval, &grid);
    let active = extract_active(&labels, &grid);
    for p in find_1d_points(&active.edges, &labels, &eval, 15).unwrap() {
        assert!((p.t - 0.5).abs() <= 2f64.powi(-16));
    }
}

fn face_pair(p1: Point, p2: Point, corner_labels: [u8; 4]) -> FacePair {
    let grid = GridSpec::unit_cube(2).unwrap();
    FacePair {
        face: grid.face_id([0, 0, 0], 2),
        lower: [0, 0, 0],
        normal: 2,
        corner_labels,
        edges: [grid.edge_id([0, 0, 0], 0), grid.edge_id([0, 1, 0], 0)],
        p1,
        p2,
    }
}

#[test]
fn flat_boundary_returns_the_midpoint() {
    // Inside is x < 0.3 + 0.2 y.
    let f = AnalyticField::half_space(Point::new(0.3, 0.0, 0.0), Vector::new(1.0, -0.2, 0.0));
    let corners = [Point::new(0.0, 0.0, 0.0), Point::new(1.0, 0.0, 0.0), Point::new(1.0, 1.0, 0.0), Point::new(0.0, 1.0, 0.0)];
    let l = eval_labels(&f, &corners).unwrap();
    let pair = face_pair(Point::new(0.3, 0.0, 0.0), Point::new(0.5, 1.0, 0.0), [l[0], l[1], l[2], l[3]]);
    let eval = Evaluator::identity(&f);
    let p = find_2d_points(&[pair], &SearchBudget::default(), &eval).unwrap()[0];
    assert_eq!(p.status, Point2DStatus::Exact);
    assert!((p.position - Point::new(0.4, 0.5, 0.0)).norm() <= 1e-3);
}

/// Outside inside the band `0 <= x <= 1, y <= 0.8`, inside elsewhere.
struct Band;

impl OccupancyField for Band {
    fn eval_raw(&self, points: &[Point], out: &mut [f64]) {
        for (p, o) in points.iter().zip(out.iter_mut()) {
            *o = if p.x < 0.0 || p.x > 1.0 || p.y > 0.8 { 1.0 } else { 0.0 };
        }
    }
}

#[test]
fn parallel_boundary_lines_fall_back_to_the_midpoint() {
    // The ray from m = (0.5, 0.5) leaves the band upward; the side rays then stop on
    // the two vertical walls through p1 and p2, which never meet.
    let pair = face_pair(Point::new(0.0, 0.5, 0.0), Point::new(1.0, 0.5, 0.0), [0, 0, 1, 1]);
    let mut budget = SearchBudget::default();
    // Walls land on bracket samples, so both side hits are exact.
    budget.step2.max_range = 0.75;
    let p = find_2d_points(&[pair], &budget, &Evaluator::identity(&Band)).unwrap()[0];
    assert_eq!(p.status, Point2DStatus::MidpointFallback);
    assert_eq!(p.position, Point::new(0.5, 0.5, 0.0));
}

#[test]
fn evaluation_count_matches_the_accounting_formula() {
    let field = blob(&[(0.5, 0.5, 0.5, 0.3)], None);
    let grid = GridSpec::unit_cube(32).unwrap();
    let out = extract(field.as_ref(), &ExtractOptions::new(grid)).unwrap();
    let s = &out.stats;
    let ev = &s.evaluations;
    assert_eq!(ev.labels.points, 33 * 33 * 33);
    assert_eq!(ev.search_1d.points, 15 * s.crossing_edges);
    assert_eq!(ev.search_2d.points, 45 * s.points_2d);
    assert_eq!(ev.probe.points, s.ambiguous_faces + s.points_2d);
    assert_eq!(ev.gradient.points, 0);
    assert_eq!(ev.total_points(), ev.labels.points + 15 * s.crossing_edges + 45 * s.points_2d + ev.probe.points);
}

#[test]
fn all_outside_labels_leave_every_set_empty() {
    let grid = GridSpec::unit_cube(4).unwrap();
    let labels = LabelVolume::from_labels(&grid, vec![0; 125]).unwrap();
    let a = extract_active(&labels, &grid);
    assert!(a.edges.is_empty() && a.faces.is_empty() && a.cells.is_empty());
}
