//! Occupancy-based dual contouring.
//!
//! Extracts manifold triangle meshes with sharp features from fields that
//! only answer inside/outside queries. Geometry inside the pipeline lives in
//! grid-index coordinates (cell side 1); the [`field::Evaluator`] maps query
//! points to domain units and the output mesh is mapped back at the end.
//!
//! ```
//! use odc::field::AnalyticField;
//! use odc::{extract, ExtractOptions, GridSpec, Point};
//!
//! let field = AnalyticField::sphere(Point::new(0.5, 0.5, 0.5), 0.3);
//! let options = ExtractOptions::new(GridSpec::unit_cube(32).unwrap());
//! let out = extract(&field, &options).unwrap();
//! assert!(out.mesh.triangles.len() > 0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baseline;
pub mod cli;
pub mod dualize;
pub mod error;
pub mod field;
pub mod grid;
pub mod meshlab;
pub mod pipeline;
pub mod polygonize;
pub mod search;

pub type Point = nalgebra::Point3<f64>;
pub type Vector = nalgebra::Vector3<f64>;

pub use error::{Error, Result};
pub use field::{OccupancyField, SharedField};
pub use grid::GridSpec;
pub use meshlab::Mesh;
pub use pipeline::{extract, ExtractOptions, Extraction};
pub use search::SearchBudget;
