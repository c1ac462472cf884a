//! Marching cubes and the stage ladder between plain dual contouring and the full method.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dualize::{build_face_pairs, probe_face_centers, CellPartition};
use crate::error::{Error, Result};
use crate::field::{EvalStats, Evaluator, OccupancyField};
use crate::grid::{coord_point, extract_active, sample_labels, CrossingEdge, GridSpec};
use crate::meshlab::{Mesh, VertexTag};
use crate::pipeline::{extract, one_d_points, partition_all, ExtractOptions, Extraction};
use crate::polygonize::SplitMode;
use crate::search::SearchBudget;
use crate::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OneDMode {
    Midpoint,
    /// Linear interpolation of the raw values at the edge ends.
    Linear,
    /// Bisection on labels.
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalMode {
    /// Central differences of raw values.
    FdGradient,
    /// Planes through the 1D point and its two neighbouring 2D points.
    TwoD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StageConfig {
    pub one_d: OneDMode,
    pub normals: NormalMode,
    pub split: SplitMode,
}

impl StageConfig {
    pub const MDC: Self = Self {
        one_d: OneDMode::Linear,
        normals: NormalMode::FdGradient,
        split: SplitMode::Mdc,
    };
    pub const PLUS_1D: Self = Self {
        one_d: OneDMode::Binary,
        normals: NormalMode::FdGradient,
        split: SplitMode::Mdc,
    };
    pub const PLUS_2D: Self = Self {
        one_d: OneDMode::Binary,
        normals: NormalMode::TwoD,
        split: SplitMode::Mdc,
    };
    pub const ODC: Self = Self {
        one_d: OneDMode::Binary,
        normals: NormalMode::TwoD,
        split: SplitMode::Ic,
    };

    /// The ladder from the dual-contouring analog to the full method.
    pub const LADDER: [(&'static str, Self); 4] =
        [("mdc", Self::MDC), ("+1d", Self::PLUS_1D), ("+2d", Self::PLUS_2D), ("+ic", Self::ODC)];
}

impl Default for StageConfig {
    fn default() -> Self {
        Self::ODC
    }
}

impl fmt::Display for StageConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_d = match self.one_d {
            OneDMode::Midpoint => "midpoint",
            OneDMode::Linear => "linear",
            OneDMode::Binary => "binary",
        };
        let normals = match self.normals {
            NormalMode::FdGradient => "fd-gradient",
            NormalMode::TwoD => "two-d",
        };
        let split = match self.split {
            SplitMode::Mdc => "mdc",
            SplitMode::Ic => "ic",
        };
        write!(f, "{one_d},{normals},{split}")
    }
}

impl FromStr for StageConfig {
    type Err = Error;

    /// `<1d>,<normals>,<split>`, e.g. `binary,two-d,ic`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(Error::Config(format!("stage {s:?} needs three comma-separated parts")));
        };
        let one_d = match *a {
            "midpoint" => OneDMode::Midpoint,
            "linear" | "linear-interp" => OneDMode::Linear,
            "binary" | "binary-search" => OneDMode::Binary,
            x => return Err(Error::Config(format!("unknown 1D mode {x:?}"))),
        };
        let normals = match *b {
            "fd-gradient" | "gradient" => NormalMode::FdGradient,
            "two-d" | "two-d-points" | "2d" => NormalMode::TwoD,
            x => return Err(Error::Config(format!("unknown normal mode {x:?}"))),
        };
        let split = match *c {
            "mdc" => SplitMode::Mdc,
            "ic" => SplitMode::Ic,
            x => return Err(Error::Config(format!("unknown split mode {x:?}"))),
        };
        Ok(Self { one_d, normals, split })
    }
}

/// Runs the dual pipeline with the stage substitutions of `cfg`.
pub fn run_stage(field: &dyn OccupancyField, grid: &GridSpec, cfg: StageConfig, budget: &SearchBudget) -> Result<Extraction> {
    extract(field, &ExtractOptions::new(*grid).with_stage(cfg).with_budget(*budget))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum McMode {
    /// Vertices at edge midpoints.
    Binary,
    /// Vertices by linear interpolation of raw values.
    Continuous,
}

/// Marching cubes with the same face-center disambiguation as the dual pipeline.
///
/// Each cell's crossing edges are grouped into the same cycles the dual
/// pipeline uses; each cycle becomes a fan of triangles over its edge vertices.
pub fn marching_cubes(field: &dyn OccupancyField, grid: &GridSpec, mode: McMode) -> Result<Mesh> {
    marching_cubes_counted(field, grid, mode).map(|(m, _)| m)
}

/// [`marching_cubes`] plus the evaluation counters.
pub fn marching_cubes_counted(field: &dyn OccupancyField, grid: &GridSpec, mode: McMode) -> Result<(Mesh, EvalStats)> {
    if mode == McMode::Continuous && !field.is_continuous() {
        return Err(Error::Config("continuous marching cubes needs continuous raw values".into()));
    }
    let eval = Evaluator::new(field, grid);
    let labels = sample_labels(&eval, grid);
    let active = extract_active(&labels, grid);
    let one_d = match mode {
        McMode::Binary => OneDMode::Midpoint,
        McMode::Continuous => OneDMode::Linear,
    };
    let points = one_d_points(one_d, &active, &labels, &eval, 0)?;
    let centers = probe_face_centers(&active, &eval);
    let pairs = build_face_pairs(grid, &active, &centers, &points)?;
    let partitions = partition_all(grid, &labels, &active, &centers, &pairs)?;

    let mut mesh = Mesh {
        vertices: points.iter().map(|p| grid.to_world(&p.position)).collect(),
        triangles: Vec::new(),
        provenance: active.edges.iter().map(|e| VertexTag::Edge { edge: e.id }).collect(),
    };
    for part in &partitions {
        for cyc in &part.cycles {
            let mut ring: Vec<u32> = cyc.edges.clone();
            if !ring_is_outward(&active.edges, &ring, part) {
                ring.reverse();
            }
            for k in 1..ring.len() - 1 {
                mesh.triangles.push([ring[0], ring[k], ring[k + 1]]);
            }
        }
    }
    mesh.check_indices().map_err(Error::Contract)?;
    Ok((mesh, eval.stats()))
}

/// Orientation of a cycle from its first segment, which lies on one cube face.
/// Edge midpoints are used so the answer depends on the labels only.
fn ring_is_outward(edges: &[CrossingEdge], ring: &[u32], part: &CellPartition) -> bool {
    let (e0, e1) = (&edges[ring[0] as usize], &edges[ring[1] as usize]);
    let mid = |e: &CrossingEdge| nalgebra::center(&e.v_in(), &e.v_out());
    let (p0, p1) = (mid(e0), mid(e1));
    // Outward normal of the shared cube face, from the cell center.
    let center = coord_point(part.lower) + Vector::repeat(0.5);
    let face_center = nalgebra::center(&p0, &p1);
    let d = face_center - center;
    let axis = d.iamax();
    let mut n = Vector::zeros();
    n[axis] = d[axis].signum();
    let side = (p1 - p0).cross(&(e0.v_in() - p0)).dot(&n);
    debug_assert!(side != 0.0);
    side < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_strings_round_trip() {
        for (_, s) in StageConfig::LADDER {
            assert_eq!(s.to_string().parse::<StageConfig>().unwrap(), s);
        }
        assert!("binary,two-d".parse::<StageConfig>().is_err());
        assert!("cubic,two-d,ic".parse::<StageConfig>().is_err());
    }
}
