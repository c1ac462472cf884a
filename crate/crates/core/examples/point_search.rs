//! The 1D and 2D point searches on a single face cut by a circle.
//!
//! ```text
//! cargo run --release --example point_search
//! ```

use odc::field::{eval_labels, AnalyticField, Evaluator};
use odc::grid::{extract_active, sample_labels};
use odc::search::{find_1d_points, find_2d_points, FacePair, SearchBudget};
use odc::{GridSpec, Point};

fn main() -> odc::Result<()> {
    // Grid units equal world units on a 2-cell grid of side 2.
    let grid = GridSpec::new(Point::origin(), Point::new(2.0, 2.0, 2.0), 2)?;
    let circle = AnalyticField::sphere(Point::new(0.0, 0.0, 0.0), 0.7);
    let eval = Evaluator::new(&circle, &grid);
    let labels = sample_labels(&eval, &grid);
    let active = extract_active(&labels, &grid);
    let points = find_1d_points(&active.edges, &labels, &eval, 15)?;
    for p in &points {
        println!("1d point on {:?}: t = {:.6}, at {:.6?}", p.edge, p.t, p.position.coords.as_slice());
    }

    // The face z = 0 of cell (0, 0, 0): edges along x at y = 0 and along y at x = 0.
    let e1 = grid.edge_id([0, 0, 0], 0);
    let e2 = grid.edge_id([0, 0, 0], 1);
    let find = |id| points.iter().find(|p| p.edge == id).unwrap().position;
    let corners = [Point::new(0.0, 0.0, 0.0), Point::new(1.0, 0.0, 0.0), Point::new(1.0, 1.0, 0.0), Point::new(0.0, 1.0, 0.0)];
    let l = eval_labels(&circle, &corners)?;
    let pair = FacePair {
        face: grid.face_id([0, 0, 0], 2),
        lower: [0, 0, 0],
        normal: 2,
        corner_labels: [l[0], l[1], l[2], l[3]],
        edges: [e1, e2],
        p1: find(e1),
        p2: find(e2),
    };
    let q = find_2d_points(&[pair], &SearchBudget::default(), &eval)?[0];
    let radius = q.position.coords.norm();
    println!("2d point {:.6?} ({:?}), radius {radius:.6}", q.position.coords.as_slice(), q.status);
    println!("evaluations: {:?}", eval.stats());
    Ok(())
}
