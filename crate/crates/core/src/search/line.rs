use super::LineSearchParams;
use crate::field::{Evaluator, Stage};
use crate::{Point, Vector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray {
    pub origin: Point,
    /// Unit direction.
    pub dir: Vector,
    /// Known label at the origin; never re-evaluated.
    pub ref_label: u8,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineHit {
    /// Bracket end nearer the origin; carries `ref_label`.
    pub point: Point,
    pub distance: f64,
    /// Whether a label flip was seen within `max_range`.
    pub found: bool,
}

/// Lock-step line-binary search over a batch of rays.
///
/// Samples `origin + (max_range * i / N) * dir` for `i = 1..=N` (one batch per
/// `i`), takes the first sample whose label differs from `ref_label` (or `N`
/// when none does), then bisects `[p_{i-1}, p_i)` for `n_binary` batches,
/// always comparing the midpoint against the reference label.
pub fn line_binary_search(rays: &[Ray], params: &LineSearchParams, eval: &Evaluator, stage: Stage) -> Vec<LineHit> {
    if rays.is_empty() {
        return Vec::new();
    }
    let n = params.n_linear.max(1);
    let spacing = params.max_range / f64::from(n);
    let mut first_flip: Vec<Option<u32>> = vec![None; rays.len()];
    for i in 1..=n {
        let d = spacing * f64::from(i);
        let pts: Vec<Point> = rays.iter().map(|r| r.origin + r.dir * d).collect();
        let got = eval.labels(stage, &pts);
        for ((slot, ray), lab) in first_flip.iter_mut().zip(rays).zip(got) {
            if slot.is_none() && lab != ray.ref_label {
                *slot = Some(i);
            }
        }
    }
    let mut near: Vec<f64> = first_flip.iter().map(|f| spacing * f64::from(f.unwrap_or(n) - 1)).collect();
    let mut far: Vec<f64> = first_flip.iter().map(|f| spacing * f64::from(f.unwrap_or(n))).collect();
    for _ in 0..params.n_binary {
        let pts: Vec<Point> = rays
            .iter()
            .zip(near.iter().zip(&far))
            .map(|(r, (a, b))| r.origin + r.dir * (0.5 * (a + b)))
            .collect();
        let got = eval.labels(stage, &pts);
        for (((a, b), ray), lab) in near.iter_mut().zip(far.iter_mut()).zip(rays).zip(got) {
            let mid = 0.5 * (*a + *b);
            if lab == ray.ref_label {
                *a = mid;
            } else {
                *b = mid;
            }
        }
    }
    rays.iter()
        .zip(near)
        .zip(first_flip)
        .map(|((r, d), flip)| LineHit {
            point: r.origin + r.dir * d,
            distance: d,
            found: flip.is_some(),
        })
        .collect()
}

pub fn line_binary_search_one(ray: Ray, params: &LineSearchParams, eval: &Evaluator, stage: Stage) -> LineHit {
    line_binary_search(&[ray], params, eval, stage)[0]
}
