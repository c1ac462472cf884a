use rayon::prelude::*;
use serde::Serialize;

use super::{sample_surface, Bvh, ClosestHit, Mesh, SurfaceSamples};
use crate::error::{Error, Result};
use crate::field::OccupancyField;

pub const DEFAULT_SAMPLES: usize = 100_000;

const CHUNK: usize = 1024;

/// A symmetric metric with its two directional parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DirectionalMetric {
    pub value: f64,
    pub a_to_b: f64,
    pub b_to_a: f64,
}

/// Sum by recursive halving; fixed order for a fixed length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len() as f64
}

fn max(xs: &[f64]) -> f64 {
    xs.iter().cloned().fold(0.0, f64::max)
}

fn nearest(samples: &SurfaceSamples, target: &Mesh, bvh: &Bvh) -> Vec<ClosestHit> {
    samples
        .points
        .par_iter()
        .with_min_len(CHUNK)
        .map(|p| bvh.closest_point(target, p))
        .collect()
}

struct Directed {
    dist: Vec<f64>,
    angle: Vec<f64>,
}

fn directed(from: &Mesh, to: &Mesh, n: usize, seed: u64) -> Result<Directed> {
    if to.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let s = sample_surface(from, n, seed)?;
    let bvh = Bvh::build(to);
    let hits = nearest(&s, to, &bvh);
    let angle = hits
        .iter()
        .zip(&s.normals)
        .map(|(h, n)| {
            let m = to.face_normal(&to.triangles[h.triangle]);
            n.dot(&m).clamp(-1.0, 1.0).acos()
        })
        .collect();
    Ok(Directed {
        dist: hits.iter().map(|h| h.distance).collect(),
        angle,
    })
}

/// Chamfer-style squared distance, normal angle and Hausdorff distance from one sampling pass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeshComparison {
    pub md2: DirectionalMetric,
    pub nic: DirectionalMetric,
    pub hdd: DirectionalMetric,
}

/// Both meshes are sampled with the same seed, so swapping them swaps the directions exactly.
pub fn compare_meshes(a: &Mesh, b: &Mesh, n: usize, seed: u64) -> Result<MeshComparison> {
    let ab = directed(a, b, n, seed)?;
    let ba = directed(b, a, n, seed)?;
    let sq = |d: &[f64]| mean(&d.iter().map(|x| x * x).collect::<Vec<_>>());
    let sym = |x: f64, y: f64| DirectionalMetric {
        value: 0.5 * (x + y),
        a_to_b: x,
        b_to_a: y,
    };
    let (h1, h2) = (max(&ab.dist), max(&ba.dist));
    Ok(MeshComparison {
        md2: sym(sq(&ab.dist), sq(&ba.dist)),
        nic: sym(mean(&ab.angle), mean(&ba.angle)),
        hdd: DirectionalMetric {
            value: h1.max(h2),
            a_to_b: h1,
            b_to_a: h2,
        },
    })
}

/// Mean squared sampled distance, averaged over both directions.
pub fn metric_md2(a: &Mesh, b: &Mesh, n: usize, seed: u64) -> Result<DirectionalMetric> {
    Ok(compare_meshes(a, b, n, seed)?.md2)
}

/// Mean angle (radians) between a sample's face normal and the normal of the
/// nearest face on the other mesh, averaged over both directions.
pub fn metric_nic(gt: &Mesh, out: &Mesh, n: usize, seed: u64) -> Result<DirectionalMetric> {
    Ok(compare_meshes(gt, out, n, seed)?.nic)
}

pub fn metric_hdd(a: &Mesh, b: &Mesh, n: usize, seed: u64) -> Result<DirectionalMetric> {
    Ok(compare_meshes(a, b, n, seed)?.hdd)
}

/// Mean `|raw - iso|` over surface samples; `None` for binary fields.
pub fn metric_fit(mesh: &Mesh, field: &dyn OccupancyField, n: usize, seed: u64) -> Result<Option<f64>> {
    if !field.is_continuous() {
        return Ok(None);
    }
    let s = sample_surface(mesh, n, seed)?;
    let iso = field.iso_level();
    let dev: Vec<f64> = s
        .points
        .par_chunks(CHUNK)
        .flat_map_iter(|chunk| {
            let mut raw = vec![0.0; chunk.len()];
            field.eval_raw(chunk, &mut raw);
            raw.into_iter().map(move |r| (r - iso).abs())
        })
        .collect();
    Ok(Some(mean(&dev)))
}

/// One-directional distances from mesh samples to a field's exact surface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldDistance {
    pub md2: f64,
    pub hdd: f64,
}

/// `None` when the field has no signed distance.
pub fn metric_to_field(mesh: &Mesh, field: &dyn OccupancyField, n: usize, seed: u64) -> Result<Option<FieldDistance>> {
    let s = sample_surface(mesh, n, seed)?;
    let d: Option<Vec<f64>> = s
        .points
        .par_iter()
        .with_min_len(CHUNK)
        .map(|p| field.signed_distance(p).map(f64::abs))
        .collect();
    Ok(d.map(|d| FieldDistance {
        md2: mean(&d.iter().map(|x| x * x).collect::<Vec<_>>()),
        hdd: max(&d),
    }))
}
