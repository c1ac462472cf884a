//! Mesh a box with a spherical bite and a ring handle; the result has genus 1.
//!
//! ```text
//! cargo run --release --example csg -- 48
//! ```

use std::sync::Arc;

use nalgebra::Rotation3;
use odc::field::{AnalyticField, CsgField};
use odc::meshlab::{count_self_intersections, validate_manifold};
use odc::{extract, ExtractOptions, GridSpec, Point, SharedField, Vector};

fn main() -> odc::Result<()> {
    let r: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(48);
    let c = Point::new(0.55, 0.5, 0.5);
    let block: SharedField = Arc::new(AnalyticField::cuboid(c, Vector::new(0.3, 0.2, 0.2), Rotation3::identity()));
    let bite: SharedField = Arc::new(AnalyticField::sphere(Point::new(0.8, 0.65, 0.6), 0.2));
    let ring: SharedField = Arc::new(AnalyticField::torus(Point::new(0.2, 0.5, 0.5), 0.12, 0.04));
    let field = CsgField::union(vec![Arc::new(CsgField::difference(block, bite)), ring]);

    let out = extract(&field, &ExtractOptions::new(GridSpec::unit_cube(r)?))?;
    let report = validate_manifold(&out.mesh);
    println!(
        "{} triangles, manifold {}, closed {}, euler {}, self-intersections {}",
        out.mesh.triangles.len(),
        report.manifold,
        report.closed,
        out.mesh.euler_characteristic(),
        count_self_intersections(&out.mesh),
    );
    Ok(())
}
