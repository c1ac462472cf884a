//! Treat a closed triangle mesh as an occupancy field and remesh it.
//!
//! ```text
//! cargo run --release --example winding_mesh -- 32
//! ```

use nalgebra::Rotation3;
use odc::field::MeshWindingField;
use odc::meshlab::{compare_meshes, primitives, validate_manifold};
use odc::{extract, ExtractOptions, GridSpec, Point, Vector};

fn main() -> odc::Result<()> {
    let r: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(32);
    let rot = Rotation3::from_euler_angles(0.4, 0.2, 0.1);
    let source = primitives::box_mesh(Point::new(0.5, 0.5, 0.5), Vector::new(0.3, 0.2, 0.25), rot);
    let field = MeshWindingField::new(source.clone())?;
    println!("winding at center {:.6}", field.winding(&Point::new(0.5, 0.5, 0.5)));

    let out = extract(&field, &ExtractOptions::new(GridSpec::unit_cube(r)?))?;
    let c = compare_meshes(&source, &out.mesh, 50_000, 0)?;
    println!(
        "{} triangles, manifold {}, md2 {:.3e}, nic {:.4} rad, hdd {:.4}",
        out.mesh.triangles.len(),
        validate_manifold(&out.mesh).manifold,
        c.md2.value,
        c.nic.value,
        c.hdd.value,
    );
    Ok(())
}
