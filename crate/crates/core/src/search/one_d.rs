use crate::error::{Error, Result};
use crate::field::{Evaluator, Stage};
use crate::grid::{CrossingEdge, EdgeId, LabelVolume};
use crate::Point;

/// Surface point on a crossing edge; `t` runs from the inside end (0) to the
/// outside end (1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point1D {
    pub edge: EdgeId,
    pub position: Point,
    pub t: f64,
}

fn at(edge: &CrossingEdge, t: f64) -> Point {
    edge.v_in() + edge.direction() * t
}

/// Lock-step bisection over all crossing edges: `iters` batches of size `edges.len()`.
///
/// The bracket `[lo, hi]` keeps an inside label at `lo` and an outside label
/// at `hi`; the result is its midpoint.
pub fn find_1d_points(edges: &[CrossingEdge], labels: &LabelVolume, eval: &Evaluator, iters: u32) -> Result<Vec<Point1D>> {
    for e in edges {
        let lin = labels.label(if e.lower_inside { e.lower } else { e.upper() });
        let lout = labels.label(if e.lower_inside { e.upper() } else { e.lower });
        if lin != 1 || lout != 0 {
            return Err(Error::Contract(format!("edge {:?} does not cross the surface", e.id)));
        }
    }
    let mut lo = vec![0.0f64; edges.len()];
    let mut hi = vec![1.0f64; edges.len()];
    if !edges.is_empty() {
        for _ in 0..iters {
            let mids: Vec<Point> = edges
                .iter()
                .zip(lo.iter().zip(&hi))
                .map(|(e, (l, h))| at(e, 0.5 * (l + h)))
                .collect();
            let got = eval.labels(Stage::Search1d, &mids);
            for ((l, h), lab) in lo.iter_mut().zip(hi.iter_mut()).zip(got) {
                let m = 0.5 * (*l + *h);
                if lab == 1 {
                    *l = m;
                } else {
                    *h = m;
                }
            }
        }
    }
    Ok(edges
        .iter()
        .zip(lo.iter().zip(&hi))
        .map(|(e, (l, h))| {
            let t = 0.5 * (l + h);
            Point1D {
                edge: e.id,
                position: at(e, t),
                t,
            }
        })
        .collect())
}

/// Edge midpoints, the only choice available to grid-only methods on binary labels.
pub fn midpoint_1d_points(edges: &[CrossingEdge]) -> Vec<Point1D> {
    edges
        .iter()
        .map(|e| Point1D {
            edge: e.id,
            position: at(e, 0.5),
            t: 0.5,
        })
        .collect()
}

/// Linear interpolation of `iso - raw` along each edge (raw values taken from
/// the label volume). Reduces to the midpoint on binary fields.
pub fn linear_1d_points(edges: &[CrossingEdge], labels: &LabelVolume, iso_level: f64) -> Vec<Point1D> {
    edges
        .iter()
        .map(|e| {
            let (cin, cout) = if e.lower_inside { (e.lower, e.upper()) } else { (e.upper(), e.lower) };
            let psi_in = iso_level - labels.raw(cin);
            let psi_out = iso_level - labels.raw(cout);
            let denom = psi_in - psi_out;
            let t = if denom.abs() > 0.0 { (psi_in / denom).clamp(0.0, 1.0) } else { 0.5 };
            Point1D {
                edge: e.id,
                position: at(e, t),
                t,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{extract_active, sample_labels, GridSpec};
    use crate::field::{AnalyticField, SmoothedOccupancy};
    use std::sync::Arc;

    #[test]
    fn boundary_at_half_converges_within_one_step() {
        // Plane z = 0.5 on a grid with cell 1 starting at z = 0: every crossing edge
        // has the boundary at t = 0.5.
        let g = GridSpec::new(Point::origin(), Point::new(3.0, 3.0, 3.0), 3).unwrap();
        let f = AnalyticField::half_space(Point::new(0.0, 0.0, 1.5), crate::Vector::z());
        let ev = Evaluator::new(&f, &g);
        let vol = sample_labels(&ev, &g);
        let sets = extract_active(&vol, &g);
        let pts = find_1d_points(&sets.edges, &vol, &ev, 15).unwrap();
        assert_eq!(pts.len(), 16);
        for p in &pts {
            assert!((p.t - 0.5).abs() <= 2f64.powi(-16), "{}", p.t);
        }
        let st = ev.stats().search_1d;
        assert_eq!(st.batches, 15);
        assert_eq!(st.points, 15 * 16);
    }

    #[test]
    fn rejects_non_crossing_edge() {
        let g = GridSpec::unit_cube(2).unwrap();
        let f = AnalyticField::sphere(Point::new(0.5, 0.5, 0.5), 0.3);
        let ev = Evaluator::new(&f, &g);
        let vol = sample_labels(&ev, &g);
        let bogus = CrossingEdge {
            id: g.edge_id([0, 0, 0], 0),
            lower: [0, 0, 0],
            axis: 0,
            lower_inside: true,
        };
        assert!(matches!(find_1d_points(&[bogus], &vol, &ev, 15), Err(Error::Contract(_))));
    }

    #[test]
    fn linear_interpolation_is_midpoint_on_binary_labels() {
        let g = GridSpec::unit_cube(4).unwrap();
        let f = AnalyticField::sphere(Point::new(0.5, 0.5, 0.5), 0.3);
        let ev = Evaluator::new(&f, &g);
        let vol = sample_labels(&ev, &g);
        let sets = extract_active(&vol, &g);
        for p in linear_1d_points(&sets.edges, &vol, 0.5) {
            assert_eq!(p.t, 0.5);
        }
        let s = SmoothedOccupancy::new(Arc::new(f), 2.0 * 4.0).unwrap();
        let ev = Evaluator::new(&s, &g);
        let vol = sample_labels(&ev, &g);
        assert!(linear_1d_points(&sets.edges, &vol, 0.5).iter().any(|p| p.t != 0.5));
    }
}
