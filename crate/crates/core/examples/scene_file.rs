//! Run a JSON scene through the same path as `mesher run` and print the report.
//!
//! ```text
//! cargo run --release --example scene_file -- crates/core/examples/scenes/torus.json 48
//! ```

use clap::Parser;
use odc::cli::{execute, Cli, Command, RunConfig};

fn main() -> odc::Result<()> {
    let mut argv = std::env::args().skip(1);
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenes/torus.json").to_string();
    let scene = argv.next().unwrap_or(default);
    let r = argv.next().unwrap_or_else(|| "48".into());
    let Command::Run(args) = Cli::parse_from(["mesher", "run", "--scene", &scene, "--resolution", &r]).command;
    let out = execute(RunConfig::from_args(args)?)?;
    let rep = &out.report;
    println!(
        "{} vertices, {} triangles, manifold {}, euler {}, si {}, evaluations {}",
        rep.vertices, rep.triangles, rep.manifold, rep.euler_characteristic, rep.si_count, rep.eval_count
    );
    println!("{}", serde_json::to_string_pretty(&rep.field_distance)?);
    Ok(())
}
