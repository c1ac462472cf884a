//! JSON scene files.
//!
//! ```json
//! {
//!   "field": {"type": "box", "center": [0.5, 0.5, 0.5], "half_extents": [0.2, 0.25, 0.3], "rotation_deg": [30, 30, 0]},
//!   "smooth_k": "auto",
//!   "aabb": {"min": [0, 0, 0], "max": [1, 1, 1]}
//! }
//! ```
//!
//! `smooth_k` wraps the field in a logistic of its signed distance; `"auto"`
//! means `2 / h` for the run's cell size `h`. Mesh paths are relative to the
//! scene file.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::{Isometry3, Rotation3, Translation3, UnitQuaternion};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{AnalyticField, CsgField, MeshWindingField, SharedField, SmoothedOccupancy, VoxelField};
use crate::grid::GridSpec;
use crate::meshlab::import_obj;
use crate::{Point, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Sphere {
        center: [f64; 3],
        radius: f64,
    },
    Box {
        center: [f64; 3],
        half_extents: [f64; 3],
        #[serde(default)]
        rotation_deg: [f64; 3],
    },
    Torus {
        center: [f64; 3],
        major_radius: f64,
        minor_radius: f64,
    },
    Plane {
        point: [f64; 3],
        /// Points out of the solid.
        normal: [f64; 3],
    },
    Csg {
        op: CsgOp,
        children: Vec<FieldSpec>,
        #[serde(default)]
        translation: [f64; 3],
        #[serde(default)]
        rotation_deg: [f64; 3],
    },
    Mesh {
        path: PathBuf,
    },
    Voxels {
        dims: [usize; 3],
        min: [f64; 3],
        max: [f64; 3],
        data: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CsgOp {
    Union,
    Intersection,
    Difference,
    Complement,
    Transform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sharpness {
    Value(f64),
    Keyword(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Default for Aabb {
    fn default() -> Self {
        Self {
            min: [0.0; 3],
            max: [1.0; 3],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub field: FieldSpec,
    #[serde(default)]
    pub smooth_k: Option<Sharpness>,
    #[serde(default)]
    pub aabb: Aabb,
    /// Directory that relative mesh paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn pt(a: [f64; 3]) -> Point {
    Point::new(a[0], a[1], a[2])
}

fn rotation(deg: [f64; 3]) -> Rotation3<f64> {
    let r = deg.map(f64::to_radians);
    Rotation3::from_euler_angles(r[0], r[1], r[2])
}

impl Scene {
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut s: Scene = serde_json::from_str(text)?;
        s.base_dir = base_dir.into();
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, dir)
    }

    pub fn grid(&self, resolution: usize) -> Result<GridSpec> {
        GridSpec::new(pt(self.aabb.min), pt(self.aabb.max), resolution)
    }

    /// Logistic sharpness for a run at `grid`, if the scene asks for smoothing.
    pub fn sharpness(&self, grid: &GridSpec) -> Result<Option<f64>> {
        match &self.smooth_k {
            None => Ok(None),
            Some(Sharpness::Value(k)) => Ok(Some(*k)),
            Some(Sharpness::Keyword(s)) if s == "auto" => Ok(Some(2.0 / grid.cell_size().min())),
            Some(Sharpness::Keyword(s)) => Err(Error::Scene(format!("smooth_k must be a number or \"auto\", got {s:?}"))),
        }
    }

    pub fn build_field(&self, grid: &GridSpec) -> Result<SharedField> {
        let base = self.build(&self.field)?;
        match self.sharpness(grid)? {
            Some(k) => Ok(Arc::new(SmoothedOccupancy::new(base, k)?)),
            None => Ok(base),
        }
    }

    fn build(&self, spec: &FieldSpec) -> Result<SharedField> {
        let positive = |x: f64, what: &str| {
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(Error::Scene(format!("{what} must be positive, got {x}")))
            }
        };
        Ok(match spec {
            FieldSpec::Sphere { center, radius } => {
                Arc::new(AnalyticField::sphere(pt(*center), positive(*radius, "radius")?))
            }
            FieldSpec::Box {
                center,
                half_extents,
                rotation_deg,
            } => {
                for &h in half_extents {
                    positive(h, "half extent")?;
                }
                Arc::new(AnalyticField::cuboid(pt(*center), Vector::from(*half_extents), rotation(*rotation_deg)))
            }
            FieldSpec::Torus {
                center,
                major_radius,
                minor_radius,
            } => Arc::new(AnalyticField::torus(
                pt(*center),
                positive(*major_radius, "major radius")?,
                positive(*minor_radius, "minor radius")?,
            )),
            FieldSpec::Plane { point, normal } => {
                let n = Vector::from(*normal);
                if !(n.norm() > 0.0) {
                    return Err(Error::Scene("plane normal must be non-zero".into()));
                }
                Arc::new(AnalyticField::half_space(pt(*point), n))
            }
            FieldSpec::Csg {
                op,
                children,
                translation,
                rotation_deg,
            } => {
                let kids: Vec<SharedField> = children.iter().map(|c| self.build(c)).collect::<Result<_>>()?;
                let need = |n: usize| {
                    if kids.len() == n {
                        Ok(())
                    } else {
                        Err(Error::Scene(format!("csg {op:?} takes {n} children, got {}", kids.len())))
                    }
                };
                match op {
                    CsgOp::Union | CsgOp::Intersection if kids.is_empty() => {
                        return Err(Error::Scene(format!("csg {op:?} needs children")));
                    }
                    CsgOp::Union => Arc::new(CsgField::union(kids)),
                    CsgOp::Intersection => Arc::new(CsgField::intersection(kids)),
                    CsgOp::Difference => {
                        need(2)?;
                        Arc::new(CsgField::difference(kids[0].clone(), kids[1].clone()))
                    }
                    CsgOp::Complement => {
                        need(1)?;
                        Arc::new(CsgField::complement(kids[0].clone()))
                    }
                    CsgOp::Transform => {
                        need(1)?;
                        let iso = Isometry3::from_parts(
                            Translation3::from(Vector::from(*translation)),
                            UnitQuaternion::from_rotation_matrix(&rotation(*rotation_deg)),
                        );
                        Arc::new(CsgField::transform(kids[0].clone(), iso))
                    }
                }
            }
            FieldSpec::Mesh { path } => {
                let full = if path.is_absolute() { path.clone() } else { self.base_dir.join(path) };
                Arc::new(MeshWindingField::new(import_obj(&full)?)?)
            }
            FieldSpec::Voxels { dims, min, max, data } => {
                Arc::new(VoxelField::new(*dims, pt(*min), pt(*max), data.clone())?)
            }
        })
    }
}
