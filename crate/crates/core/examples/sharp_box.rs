//! Rotated box: corner recovery and normal consistency against marching cubes.
//!
//! ```text
//! cargo run --release --example sharp_box -- 64
//! ```

use std::sync::Arc;

use nalgebra::Rotation3;
use odc::baseline::{marching_cubes, McMode};
use odc::field::{AnalyticField, SmoothedOccupancy};
use odc::meshlab::{compare_meshes, metric_fit, primitives};
use odc::{extract, ExtractOptions, GridSpec, Point, Vector};

fn main() -> odc::Result<()> {
    let r: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(64);
    let grid = GridSpec::unit_cube(r)?;
    let (center, half) = (Point::new(0.5, 0.5, 0.5), Vector::new(0.2, 0.25, 0.3));
    let rot = Rotation3::from_euler_angles(30f64.to_radians(), 30f64.to_radians(), 0.0);
    let field = SmoothedOccupancy::new(Arc::new(AnalyticField::cuboid(center, half, rot)), 2.0 * r as f64)?;
    let truth = primitives::box_mesh(center, half, rot);

    let odc = extract(&field, &ExtractOptions::new(grid))?.mesh;
    let mc = marching_cubes(&field, &grid, McMode::Binary)?;

    let h = grid.cell_size().x;
    for (i, corner) in truth.vertices.iter().enumerate() {
        let d = odc.vertices.iter().map(|v| (v - corner).norm()).fold(f64::INFINITY, f64::min);
        println!("corner {i}: nearest vertex {:.3} h", d / h);
    }
    let n = 100_000;
    let (a, b) = (compare_meshes(&truth, &odc, n, 0)?, compare_meshes(&truth, &mc, n, 0)?);
    println!("nic: odc {:.4}, mc {:.4}", a.nic.value, b.nic.value);
    println!("md2: odc {:.3e}, mc {:.3e}", a.md2.value, b.md2.value);
    println!(
        "fit: odc {:.4}, mc {:.4}",
        metric_fit(&odc, &field, n, 0)?.unwrap_or(f64::NAN),
        metric_fit(&mc, &field, n, 0)?.unwrap_or(f64::NAN)
    );
    Ok(())
}
