//! End-to-end extraction: labels, crossings, point searches, partitions,
//! QEF placement, polygonization and repair.

use rayon::prelude::*;
use serde::Serialize;

use crate::baseline::{NormalMode, OneDMode, StageConfig};
use crate::dualize::{
    build_face_pairs, partition_cell, place_3d_points, probe_face_centers, CellPartition, DualStats, FaceCenters,
    FacePairs, NormalSource, Point3D, DEFAULT_TRUNCATION,
};
use crate::error::{Error, Result};
use crate::field::{EvalStats, Evaluator, OccupancyField, Stage};
use crate::grid::{extract_active, sample_labels, ActiveSets, GridSpec, LabelVolume};
use crate::meshlab::Mesh;
use crate::polygonize::{build_mesh, repair_nonmanifold, PolygonizeStats, RepairStats};
use crate::search::{find_1d_points, find_2d_points, linear_1d_points, midpoint_1d_points, Point1D, Point2D, Point2DStatus};
use crate::{SearchBudget, Vector};

/// Central-difference step for gradient normals, in cell units.
pub const FD_STEP: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractOptions {
    pub grid: GridSpec,
    pub budget: SearchBudget,
    pub stage: StageConfig,
    pub qef_truncation: f64,
    pub repair: bool,
}

impl ExtractOptions {
    pub fn new(grid: GridSpec) -> Self {
        Self {
            grid,
            budget: SearchBudget::default(),
            stage: StageConfig::ODC,
            qef_truncation: DEFAULT_TRUNCATION,
            repair: true,
        }
    }

    pub fn with_stage(mut self, stage: StageConfig) -> Self {
        self.stage = stage;
        self
    }

    pub fn with_budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatusCounts {
    pub exact: u64,
    pub midpoint_fallback: u64,
    pub clamped: u64,
    pub range_exhausted: u64,
}

impl StatusCounts {
    pub fn of(points: &[Point2D]) -> Self {
        let mut c = Self::default();
        for p in points {
            match p.status {
                Point2DStatus::Exact => c.exact += 1,
                Point2DStatus::MidpointFallback => c.midpoint_fallback += 1,
                Point2DStatus::Clamped => c.clamped += 1,
                Point2DStatus::RangeExhausted => c.range_exhausted += 1,
            }
        }
        c
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ExtractStats {
    pub evaluations: EvalStats,
    pub crossing_edges: u64,
    pub crossing_faces: u64,
    pub ambiguous_faces: u64,
    pub crossing_cells: u64,
    pub points_2d: u64,
    pub point_2d_status: StatusCounts,
    pub dual: DualStats,
    pub polygonize: PolygonizeStats,
    pub repair: RepairStats,
    /// Some boundary grid vertex is inside; the mesh is open there.
    pub boundary_inside: bool,
}

/// Intermediate products in grid coordinates.
#[derive(Clone, Debug, Default)]
pub struct Intermediates {
    pub labels: Option<LabelVolume>,
    pub active: ActiveSets,
    pub points_1d: Vec<Point1D>,
    pub face_centers: FaceCenters,
    pub pairs: FacePairs,
    pub points_2d: Vec<Point2D>,
    pub partitions: Vec<CellPartition>,
    pub points_3d: Vec<Point3D>,
}

#[derive(Clone, Debug)]
pub struct Extraction {
    /// Output mesh in domain units.
    pub mesh: Mesh,
    pub stats: ExtractStats,
    pub intermediates: Intermediates,
}

/// Crossing points of every edge under the configured 1D mode.
pub(crate) fn one_d_points(
    mode: OneDMode,
    active: &ActiveSets,
    labels: &LabelVolume,
    eval: &Evaluator,
    iters: u32,
) -> Result<Vec<Point1D>> {
    match mode {
        OneDMode::Midpoint => Ok(midpoint_1d_points(&active.edges)),
        OneDMode::Linear => Ok(linear_1d_points(&active.edges, labels, eval.iso_level())),
        OneDMode::Binary => find_1d_points(&active.edges, labels, eval, iters),
    }
}

/// Edges with their partitions for every crossing cell, in cell order.
pub(crate) fn partition_all(
    grid: &GridSpec,
    labels: &LabelVolume,
    active: &ActiveSets,
    centers: &FaceCenters,
    pairs: &FacePairs,
) -> Result<Vec<CellPartition>> {
    active
        .cells
        .par_iter()
        .map(|&c| partition_cell(grid, labels, active, centers, pairs, c))
        .collect()
}

/// Raw-value gradients at each 1D point by central differences, one batch.
pub fn fd_gradients(points: &[Point1D], eval: &Evaluator) -> Vec<Vector> {
    let mut q = Vec::with_capacity(points.len() * 6);
    for p in points {
        for axis in 0..3 {
            let mut d = Vector::zeros();
            d[axis] = FD_STEP;
            q.push(p.position + d);
            q.push(p.position - d);
        }
    }
    let raw = eval.raw(Stage::Gradient, &q);
    raw.chunks(6)
        .map(|r| -Vector::new(r[0] - r[1], r[2] - r[3], r[4] - r[5]) / (2.0 * FD_STEP))
        .collect()
}

pub fn extract(field: &dyn OccupancyField, options: &ExtractOptions) -> Result<Extraction> {
    options.budget.validate()?;
    if !(options.qef_truncation >= 0.0 && options.qef_truncation <= 1.0) {
        return Err(Error::Config(format!("QEF truncation {} outside [0, 1]", options.qef_truncation)));
    }
    let stage = options.stage;
    if stage.normals == NormalMode::FdGradient && !field.is_continuous() {
        return Err(Error::Config("gradient normals need a field with continuous raw values".into()));
    }
    let grid = &options.grid;
    let eval = Evaluator::new(field, grid);
    let labels = sample_labels(&eval, grid);
    let boundary_inside = labels.boundary_inside();
    if boundary_inside {
        log::warn!("field is inside on the domain boundary; the mesh will be open there");
    }
    let active = extract_active(&labels, grid);
    let points_1d = one_d_points(stage.one_d, &active, &labels, &eval, options.budget.iters_1d)?;
    let face_centers = probe_face_centers(&active, &eval);
    let pairs = build_face_pairs(grid, &active, &face_centers, &points_1d)?;
    let partitions = partition_all(grid, &labels, &active, &face_centers, &pairs)?;

    let (points_2d, gradients) = match stage.normals {
        NormalMode::TwoD => (find_2d_points(&pairs.pairs, &options.budget, &eval)?, Vec::new()),
        NormalMode::FdGradient => (Vec::new(), fd_gradients(&points_1d, &eval)),
    };
    let source = match stage.normals {
        NormalMode::TwoD => NormalSource::TwoD(&points_2d),
        NormalMode::FdGradient => NormalSource::PerEdge(&gradients),
    };
    let (points_3d, dual) = place_3d_points(&partitions, &active.edges, &points_1d, &source, options.qef_truncation);
    let (mesh, polygonize) = build_mesh(grid, &active.edges, &points_1d, &partitions, &points_3d, stage.split)?;
    let (mut mesh, repair) = if options.repair {
        repair_nonmanifold(&mesh)
    } else {
        (mesh, RepairStats::default())
    };
    mesh.map_vertices(|p| grid.to_world(p));

    let stats = ExtractStats {
        evaluations: eval.stats(),
        crossing_edges: active.edges.len() as u64,
        crossing_faces: active.faces.len() as u64,
        ambiguous_faces: face_centers.len() as u64,
        crossing_cells: active.cells.len() as u64,
        points_2d: points_2d.len() as u64,
        point_2d_status: StatusCounts::of(&points_2d),
        dual,
        polygonize,
        repair,
        boundary_inside,
    };
    Ok(Extraction {
        mesh,
        stats,
        intermediates: Intermediates {
            labels: Some(labels),
            active,
            points_1d,
            face_centers,
            pairs,
            points_2d,
            partitions,
            points_3d,
        },
    })
}
