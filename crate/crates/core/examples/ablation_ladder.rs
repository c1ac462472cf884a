//! Stage ladder on a smoothed sphere: linear 1D points with gradient normals,
//! then bisection, then 2D points, then the concave-aware split.
//!
//! ```text
//! cargo run --release --example ablation_ladder -- 64
//! ```

use std::sync::Arc;

use odc::baseline::{run_stage, StageConfig};
use odc::field::{AnalyticField, SmoothedOccupancy};
use odc::meshlab::{count_self_intersections, metric_fit, validate_manifold};
use odc::{GridSpec, Point, SearchBudget};

fn main() -> odc::Result<()> {
    let r: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(64);
    let grid = GridSpec::unit_cube(r)?;
    let sphere = Arc::new(AnalyticField::sphere(Point::new(0.5, 0.5, 0.5), 0.3));
    let field = SmoothedOccupancy::new(sphere, 2.0 * r as f64)?;

    println!("{:<5} {:<22} {:>10} {:>6} {:>9}", "stage", "config", "fit_err", "si", "manifold");
    for (name, cfg) in StageConfig::LADDER {
        let out = run_stage(&field, &grid, cfg, &SearchBudget::default())?;
        let fit = metric_fit(&out.mesh, &field, 100_000, 0)?.unwrap_or(f64::NAN);
        println!(
            "{name:<5} {:<22} {fit:>10.5} {:>6} {:>9}",
            cfg.to_string(),
            count_self_intersections(&out.mesh),
            validate_manifold(&out.mesh).manifold
        );
    }
    Ok(())
}
