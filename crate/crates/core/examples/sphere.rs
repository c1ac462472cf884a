//! Mesh a smoothed sphere and compare against plain marching cubes.
//!
//! ```text
//! cargo run --release --example sphere -- 64
//! ```

use std::sync::Arc;

use odc::baseline::{marching_cubes, McMode};
use odc::field::{AnalyticField, SmoothedOccupancy};
use odc::meshlab::{count_self_intersections, metric_fit, validate_manifold};
use odc::{extract, ExtractOptions, GridSpec, Point};

fn main() -> odc::Result<()> {
    let r: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(64);
    let grid = GridSpec::unit_cube(r)?;
    let sphere = Arc::new(AnalyticField::sphere(Point::new(0.5, 0.5, 0.5), 0.3));
    let field = SmoothedOccupancy::new(sphere, 2.0 * r as f64)?;

    let out = extract(&field, &ExtractOptions::new(grid))?;
    let report = validate_manifold(&out.mesh);
    println!(
        "odc: {} vertices, {} triangles, manifold {}, euler {}, self-intersections {}",
        out.mesh.vertices.len(),
        out.mesh.triangles.len(),
        report.manifold,
        out.mesh.euler_characteristic(),
        count_self_intersections(&out.mesh),
    );
    println!("odc evaluations: {}", out.stats.evaluations.total_points());

    let mc = marching_cubes(&field, &grid, McMode::Binary)?;
    let n = 100_000;
    let odc_fit = metric_fit(&out.mesh, &field, n, 0)?.unwrap_or(f64::NAN);
    let mc_fit = metric_fit(&mc, &field, n, 0)?.unwrap_or(f64::NAN);
    println!("fit error: odc {odc_fit:.4}, mc {mc_fit:.4}");
    Ok(())
}
