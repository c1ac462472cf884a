//! Mesh data model, validation, metrics, sampling and file I/O.

mod bvh;
mod io;
mod mesh;
mod metrics;
pub mod primitives;
mod sample;
mod validate;

pub use bvh::{closest_point_on_triangle, Bvh, ClosestHit};
pub use io::{export_obj, export_ply, import_obj, import_ply, read_obj, write_obj, write_ply};
pub use mesh::{Mesh, VertexTag};
pub use metrics::{
    compare_meshes, metric_fit, metric_hdd, metric_md2, metric_nic, metric_to_field, pairwise_sum, DirectionalMetric,
    FieldDistance, MeshComparison,
    DEFAULT_SAMPLES,
};
pub use sample::{sample_surface, SurfaceSamples};
pub use validate::{
    count_self_intersections, count_self_intersections_with, segment_hits_triangle, triangles_intersect, validate_manifold, ManifoldReport,
    SelfIntersectionParams,
};
