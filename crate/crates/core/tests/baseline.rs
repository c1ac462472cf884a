use std::sync::Arc;

use odc::baseline::{marching_cubes, run_stage, McMode, StageConfig};
use odc::field::{AnalyticField, SmoothedOccupancy};
use odc::meshlab::{metric_fit, metric_nic, primitives, validate_manifold, write_obj};
use odc::search::SearchBudget;
use odc::{extract, Error, ExtractOptions, GridSpec, Mesh, OccupancyField, Point, Vector};

fn sphere() -> AnalyticField {
    AnalyticField::sphere(Point::new(0.5, 0.5, 0.5), 0.3)
}

fn signed_volume(m: &Mesh) -> f64 {
    m.triangles.iter().map(|t| {
        let [a, b, c] = m.corners(t);
        a.coords.dot(&b.coords.cross(&c.coords)) / 6.0
    }).sum()
}

#[test]
fn binary_vertices_sit_on_edge_midpoints() {
    let r = 16;
    let m = marching_cubes(&sphere(), &GridSpec::unit_cube(r).unwrap(), McMode::Binary).unwrap();
    assert!(!m.is_empty());
    for v in &m.vertices {
        let g = v.coords * r as f64;
        let halves = g.iter().filter(|c| c.fract() == 0.5).count();
        let whole = g.iter().filter(|c| c.fract() == 0.0).count();
        assert_eq!((halves, whole), (1, 2), "{v:?}");
    }
}

#[test]
fn half_space_between_layers_gives_a_flat_sheet() {
    let r = 8;
    let f = AnalyticField::half_space(Point::new(3.3 / r as f64, 0.0, 0.0), Vector::x());
    let m = marching_cubes(&f, &GridSpec::unit_cube(r).unwrap(), McMode::Binary).unwrap();
    assert_eq!(m.triangles.len(), 2 * r * r);
    assert!(m.vertices.iter().all(|v| v.x * r as f64 == 3.5));
    assert!(m.triangles.iter().all(|t| m.face_normal(t).x > 0.999_999));
}

#[test]
fn continuous_vertices_sit_on_the_iso_level_of_a_gentle_ramp() {
    let r = 16;
    let k = 0.01 * r as f64;
    let base = Arc::new(AnalyticField::half_space(Point::new(0.5, 0.5, 0.43), Vector::new(0.2, -0.3, 1.0)));
    let f = SmoothedOccupancy::new(base, k).unwrap();
    let m = marching_cubes(&f, &GridSpec::unit_cube(r).unwrap(), McMode::Continuous).unwrap();
    assert!(!m.is_empty());
    let mut raw = vec![0.0; m.vertices.len()];
    f.eval_raw(&m.vertices, &mut raw);
    let worst = raw.iter().map(|x| (x - 0.5).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "worst |raw - 0.5| = {worst}");
}

#[test]
fn continuous_mode_rejects_binary_fields() {
    let e = marching_cubes(&sphere(), &GridSpec::unit_cube(8).unwrap(), McMode::Continuous).unwrap_err();
    assert!(matches!(e, Error::Config(_)));
}

#[test]
fn marching_cubes_normals_are_worse_than_the_dual_method() {
    let grid = GridSpec::unit_cube(32).unwrap();
    let gt = primitives::icosphere(Point::new(0.5, 0.5, 0.5), 0.3, 6);
    let mc = marching_cubes(&sphere(), &grid, McMode::Binary).unwrap();
    let odc = extract(&sphere(), &ExtractOptions::new(grid)).unwrap().mesh;
    let a = metric_nic(&gt, &mc, 50_000, 3).unwrap().value;
    let b = metric_nic(&gt, &odc, 50_000, 3).unwrap().value;
    assert!(a > b, "mc {a} odc {b}");
}

#[test]
fn marching_cubes_sphere_is_closed_and_outward() {
    let m = marching_cubes(&sphere(), &GridSpec::unit_cube(24).unwrap(), McMode::Binary).unwrap();
    let report = validate_manifold(&m);
    assert!(report.manifold && report.closed && report.oriented, "{report:?}");
    let v = signed_volume(&m);
    let exact = 4.0 / 3.0 * std::f64::consts::PI * 0.3f64.powi(3);
    assert!(v > 0.0 && (v - exact).abs() < 0.1 * exact, "volume {v}");
}

#[test]
fn full_stage_matches_extract_byte_for_byte() {
    let grid = GridSpec::unit_cube(20).unwrap();
    let obj = |m: &Mesh| {
        let mut b = Vec::new();
        write_obj(m, &mut b).unwrap();
        b
    };
    let a = run_stage(&sphere(), &grid, StageConfig::ODC, &SearchBudget::default()).unwrap();
    let b = extract(&sphere(), &ExtractOptions::new(grid)).unwrap();
    assert_eq!(obj(&a.mesh), obj(&b.mesh));
}

#[test]
fn gradient_stages_reject_binary_fields() {
    let grid = GridSpec::unit_cube(8).unwrap();
    for cfg in [StageConfig::MDC, StageConfig::PLUS_1D] {
        let e = run_stage(&sphere(), &grid, cfg, &SearchBudget::default()).unwrap_err();
        assert!(matches!(e, Error::Config(_)), "{cfg}");
    }
}

#[test]
fn split_mode_barely_changes_fit_on_a_smooth_sphere() {
    let r = 32;
    let grid = GridSpec::unit_cube(r).unwrap();
    let f = SmoothedOccupancy::new(Arc::new(sphere()), 2.0 * r as f64).unwrap();
    let fit = |cfg| {
        let m = run_stage(&f, &grid, cfg, &SearchBudget::default()).unwrap().mesh;
        metric_fit(&m, &f, 50_000, 4).unwrap().unwrap()
    };
    let (mdc, ic) = (fit(StageConfig::PLUS_2D), fit(StageConfig::ODC));
    assert!((mdc - ic).abs() <= 0.05 * mdc, "mdc split {mdc}, ic split {ic}");
}

#[test]
fn stage_strings_parse_back() {
    for (_, cfg) in StageConfig::LADDER {
        assert_eq!(cfg.to_string().parse::<StageConfig>().unwrap(), cfg);
    }
    assert!("binary,two-d".parse::<StageConfig>().is_err());
}
