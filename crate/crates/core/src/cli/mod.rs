//! Command-line driver: scene in, mesh and JSON report out.

pub mod scene;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::baseline::{marching_cubes_counted, McMode, StageConfig};
use crate::error::{Error, Result};
use crate::field::{EvalStats, OccupancyField};
use crate::meshlab::{
    compare_meshes, count_self_intersections, export_obj, export_ply, import_obj, metric_fit, metric_to_field,
    validate_manifold, FieldDistance, ManifoldReport, Mesh, MeshComparison, DEFAULT_SAMPLES,
};
use crate::pipeline::{extract, ExtractOptions, ExtractStats};
use crate::polygonize::SplitMode;
use crate::search::{LineSearchParams, SearchBudget};
use scene::Scene;

pub const REPORT_SCHEMA_VERSION: &str = "1.0.0";

pub fn report_schema_version() -> &'static str {
    REPORT_SCHEMA_VERSION
}

#[derive(Debug, Parser)]
#[command(name = "mesher", version, about = "Occupancy-based dual contouring mesher")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract a mesh from a scene, validate it and write a report.
    Run(RunArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct RunArgs {
    #[arg(long)]
    pub scene: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub resolution: usize,
    /// `odc`, `mc`, `mc-continuous`, or `stage:<1d>,<normals>,<split>`.
    #[arg(long, default_value = "odc")]
    pub method: String,
    /// Output mesh; `.ply` writes binary PLY, anything else OBJ.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Ground-truth mesh (OBJ) for md2, nic and hdd.
    #[arg(long)]
    pub gt: Option<PathBuf>,
    #[arg(long, default_value_t = 15)]
    pub iters_1d: u32,
    #[arg(long, default_value_t = 4)]
    pub step1_linear: u32,
    #[arg(long, default_value_t = 11)]
    pub step1_binary: u32,
    #[arg(long, default_value_t = 0.8)]
    pub step1_range: f64,
    #[arg(long, default_value_t = 3)]
    pub step2_linear: u32,
    #[arg(long, default_value_t = 12)]
    pub step2_binary: u32,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    pub step2_range: f64,
    /// Always split quads along the same diagonal.
    #[arg(long)]
    pub no_ic: bool,
    #[arg(long)]
    pub no_repair: bool,
    #[arg(long, default_value_t = crate::dualize::DEFAULT_TRUNCATION)]
    pub qef_truncation: f64,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest self-intersection count that still passes validation.
    #[arg(long, default_value_t = 0)]
    pub max_si: usize,
    /// Pass validation even when the mesh is not manifold.
    #[arg(long)]
    pub allow_nonmanifold: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Mc { mode: McMode },
    Dual { stage: StageConfig },
}

impl Method {
    pub fn parse(s: &str, no_ic: bool) -> Result<Self> {
        let mut m = match s {
            "odc" => Method::Dual { stage: StageConfig::ODC },
            "mc" => Method::Mc { mode: McMode::Binary },
            "mc-continuous" => Method::Mc { mode: McMode::Continuous },
            _ => match s.strip_prefix("stage:") {
                Some(rest) => Method::Dual { stage: rest.parse()? },
                None => return Err(Error::Config(format!("unknown method {s:?}"))),
            },
        };
        if let (true, Method::Dual { stage }) = (no_ic, &mut m) {
            stage.split = SplitMode::Mdc;
        }
        Ok(m)
    }
}

/// Everything a run depends on; serialized into the report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub args: RunArgs,
    pub method: Method,
    pub budget: SearchBudget,
    pub sharpness: Option<f64>,
}

impl RunConfig {
    pub fn from_args(args: RunArgs) -> Result<Self> {
        let method = Method::parse(&args.method, args.no_ic)?;
        let budget = SearchBudget {
            iters_1d: args.iters_1d,
            step1: LineSearchParams {
                n_linear: args.step1_linear,
                n_binary: args.step1_binary,
                max_range: args.step1_range,
            },
            step2: LineSearchParams {
                n_linear: args.step2_linear,
                n_binary: args.step2_binary,
                max_range: args.step2_range,
            },
        };
        budget.validate()?;
        if args.samples == 0 {
            return Err(Error::Config("--samples must be at least 1".into()));
        }
        if args.threads == Some(0) {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        Ok(Self {
            args,
            method,
            budget,
            sharpness: None,
        })
    }
}

/// Expected evaluation counts per stage from the element counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Accounting {
    pub labels: u64,
    pub search_1d: u64,
    pub search_1d_batches: u64,
    pub probe: u64,
    pub search_2d: u64,
    pub gradient: u64,
    pub matches: bool,
}

impl Accounting {
    pub fn of(stats: &ExtractStats, options: &ExtractOptions) -> Self {
        use crate::baseline::{NormalMode, OneDMode};
        let r = options.grid.resolution() as u64 + 1;
        let e = stats.crossing_edges;
        let binary = options.stage.one_d == OneDMode::Binary;
        let mut a = Accounting {
            labels: r * r * r,
            search_1d: if binary { u64::from(options.budget.iters_1d) * e } else { 0 },
            search_1d_batches: if binary && e > 0 { u64::from(options.budget.iters_1d) } else { 0 },
            probe: stats.ambiguous_faces,
            search_2d: 0,
            gradient: 0,
            matches: false,
        };
        match options.stage.normals {
            NormalMode::TwoD => {
                a.probe += stats.points_2d;
                a.search_2d = u64::from(options.budget.evals_per_2d_point()) * stats.points_2d;
            }
            NormalMode::FdGradient => a.gradient = 6 * e,
        }
        let ev = &stats.evaluations;
        a.matches = ev.labels.points == a.labels
            && ev.search_1d.points == a.search_1d
            && ev.search_1d.batches == a.search_1d_batches
            && ev.probe.points == a.probe
            && ev.search_2d.points == a.search_2d
            && ev.gradient.points == a.gradient;
        a
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub config: RunConfig,
    pub vertices: usize,
    pub triangles: usize,
    pub manifold: bool,
    pub manifold_diagnostics: ManifoldReport,
    pub si_count: usize,
    pub euler_characteristic: i64,
    pub open_boundary: bool,
    /// Mean `|raw - iso|` on the surface; absent for binary fields.
    pub fit_err: Option<f64>,
    pub md2: Option<f64>,
    pub nic: Option<f64>,
    pub hdd: Option<f64>,
    /// Directional parts of the mesh comparison against `--gt`.
    pub gt_comparison: Option<MeshComparison>,
    /// One-directional distance to the field's exact surface, when known.
    pub field_distance: Option<FieldDistance>,
    pub eval_count: u64,
    pub evaluations: EvalStats,
    pub accounting: Option<Accounting>,
    pub extraction: Option<ExtractStats>,
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
    pub passed: bool,
}

pub struct RunOutput {
    pub mesh: Mesh,
    pub report: Report,
}

/// Runs one configuration without touching the file system for outputs.
pub fn execute(mut config: RunConfig) -> Result<RunOutput> {
    let start = Instant::now();
    let scene = Scene::load(&config.args.scene)?;
    let grid = scene.grid(config.args.resolution)?;
    config.sharpness = scene.sharpness(&grid)?;
    let field = scene.build_field(&grid)?;
    let field: &dyn OccupancyField = field.as_ref();
    let mut warnings = Vec::new();

    let (mesh, evaluations, extraction, accounting) = match config.method {
        Method::Mc { mode } => {
            let (mesh, ev) = marching_cubes_counted(field, &grid, mode)?;
            (mesh, ev, None, None)
        }
        Method::Dual { stage } => {
            let mut options = ExtractOptions::new(grid).with_stage(stage).with_budget(config.budget);
            options.qef_truncation = config.args.qef_truncation;
            options.repair = !config.args.no_repair;
            let out = extract(field, &options)?;
            let acc = Accounting::of(&out.stats, &options);
            (out.mesh, out.stats.evaluations.clone(), Some(out.stats), Some(acc))
        }
    };
    let open_boundary = extraction.as_ref().map_or_else(
        || mesh_has_boundary(&mesh),
        |s| s.boundary_inside,
    );
    if open_boundary {
        warnings.push("field is inside on the domain boundary; mesh is open there".into());
    }
    let manifold_diagnostics = validate_manifold(&mesh);
    let si_count = count_self_intersections(&mesh);
    let (n, seed) = (config.args.samples, config.args.seed);
    let mut fit_err = None;
    let mut gt_comparison = None;
    let mut field_distance = None;
    if mesh.is_empty() {
        warnings.push("mesh is empty".into());
    } else {
        fit_err = metric_fit(&mesh, field, n, seed)?;
        if let Some(gt) = &config.args.gt {
            gt_comparison = Some(compare_meshes(&import_obj(gt)?, &mesh, n, seed)?);
        }
        field_distance = metric_to_field(&mesh, field, n, seed)?;
    }
    let passed = !mesh.is_empty()
        && (manifold_diagnostics.manifold || config.args.allow_nonmanifold)
        && si_count <= config.args.max_si;
    let report = Report {
        schema_version: REPORT_SCHEMA_VERSION,
        vertices: mesh.vertices.len(),
        triangles: mesh.triangles.len(),
        manifold: manifold_diagnostics.manifold,
        euler_characteristic: mesh.euler_characteristic(),
        manifold_diagnostics,
        si_count,
        open_boundary,
        fit_err,
        md2: gt_comparison.map(|c| c.md2.value),
        nic: gt_comparison.map(|c| c.nic.value),
        hdd: gt_comparison.map(|c| c.hdd.value),
        gt_comparison,
        field_distance,
        eval_count: evaluations.total_points(),
        evaluations,
        accounting,
        extraction,
        warnings,
        wall_time_s: start.elapsed().as_secs_f64(),
        passed,
        config,
    };
    Ok(RunOutput { mesh, report })
}

fn mesh_has_boundary(mesh: &Mesh) -> bool {
    !mesh.is_empty() && !validate_manifold(mesh).closed
}

fn write_outputs(out: &RunOutput) -> Result<()> {
    let args = &out.report.config.args;
    if let Some(path) = &args.out {
        let ply = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("ply"));
        if ply {
            export_ply(&out.mesh, path)?;
        } else {
            export_obj(&out.mesh, path)?;
        }
    }
    if let Some(path) = &args.report {
        std::fs::write(path, serde_json::to_string_pretty(&out.report)?)?;
    }
    Ok(())
}

fn exit_code_for(e: &Error) -> i32 {
    if e.is_internal() {
        3
    } else {
        2
    }
}

/// Runs a configuration and writes its outputs; returns the process exit code.
///
/// 0: mesh produced and validation passed; 1: validation failed (report still
/// written); 2: configuration or file error; 3: internal contract violation.
pub fn run(args: RunArgs) -> i32 {
    let threads = args.threads;
    let body = move || -> Result<bool> {
        let out = execute(RunConfig::from_args(args)?)?;
        for w in &out.report.warnings {
            log::warn!("{w}");
        }
        write_outputs(&out)?;
        Ok(out.report.passed)
    };
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(body),
            Err(e) => Err(Error::Config(format!("thread pool: {e}"))),
        },
        None => body(),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Entry point shared by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => match cli.command {
            Command::Run(a) => run(a),
        },
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
