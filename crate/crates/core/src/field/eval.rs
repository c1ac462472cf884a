use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use super::{label_of, OccupancyField};
use crate::grid::GridSpec;
use crate::{Point, Vector};

const CHUNK: usize = 1024;

/// Pipeline stage a field evaluation is attributed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Labels,
    Search1d,
    /// Face-center pairing probes and reference labels of 2D-search midpoints.
    Probe,
    Search2d,
    Gradient,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageCount {
    pub batches: u64,
    pub points: u64,
}

impl StageCount {
    fn record(&mut self, n: usize) {
        self.batches += 1;
        self.points += n as u64;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EvalStats {
    pub labels: StageCount,
    pub search_1d: StageCount,
    pub probe: StageCount,
    pub search_2d: StageCount,
    pub gradient: StageCount,
}

impl EvalStats {
    pub fn stage(&self, stage: Stage) -> StageCount {
        match stage {
            Stage::Labels => self.labels,
            Stage::Search1d => self.search_1d,
            Stage::Probe => self.probe,
            Stage::Search2d => self.search_2d,
            Stage::Gradient => self.gradient,
        }
    }

    fn stage_mut(&mut self, stage: Stage) -> &mut StageCount {
        match stage {
            Stage::Labels => &mut self.labels,
            Stage::Search1d => &mut self.search_1d,
            Stage::Probe => &mut self.probe,
            Stage::Search2d => &mut self.search_2d,
            Stage::Gradient => &mut self.gradient,
        }
    }

    pub fn total_points(&self) -> u64 {
        self.labels.points + self.search_1d.points + self.probe.points + self.search_2d.points + self.gradient.points
    }

    pub fn total_batches(&self) -> u64 {
        self.labels.batches + self.search_1d.batches + self.probe.batches + self.search_2d.batches + self.gradient.batches
    }
}

/// Counting batch evaluator over grid-index coordinates.
///
/// Pipeline geometry lives in grid units (cell side 1, vertex `(i, j, k)` at
/// integer coordinates); the evaluator maps to domain units before querying
/// the field. Every call is one logical batch, split across worker threads in
/// fixed-size chunks so results do not depend on the thread count.
pub struct Evaluator<'a> {
    field: &'a dyn OccupancyField,
    origin: Point,
    scale: Vector,
    stats: Mutex<EvalStats>,
}

impl<'a> Evaluator<'a> {
    pub fn new(field: &'a dyn OccupancyField, grid: &GridSpec) -> Self {
        Self {
            field,
            origin: grid.min(),
            scale: grid.cell_size(),
            stats: Mutex::new(EvalStats::default()),
        }
    }

    /// Grid coordinates equal domain coordinates.
    pub fn identity(field: &'a dyn OccupancyField) -> Self {
        Self {
            field,
            origin: Point::origin(),
            scale: Vector::repeat(1.0),
            stats: Mutex::new(EvalStats::default()),
        }
    }

    pub fn field(&self) -> &'a dyn OccupancyField {
        self.field
    }

    pub fn iso_level(&self) -> f64 {
        self.field.iso_level()
    }

    #[inline]
    pub fn to_world(&self, p: &Point) -> Point {
        self.origin + p.coords.component_mul(&self.scale)
    }

    pub fn raw(&self, stage: Stage, points: &[Point]) -> Vec<f64> {
        self.stats.lock().unwrap().stage_mut(stage).record(points.len());
        let mut out = vec![0.0; points.len()];
        out.par_chunks_mut(CHUNK)
            .zip(points.par_chunks(CHUNK))
            .for_each(|(o, p)| {
                let world: Vec<Point> = p.iter().map(|q| self.to_world(q)).collect();
                self.field.eval_raw(&world, o);
            });
        out
    }

    pub fn labels(&self, stage: Stage, points: &[Point]) -> Vec<u8> {
        let iso = self.iso_level();
        self.raw(stage, points).into_iter().map(|r| label_of(r, iso)).collect()
    }

    pub fn stats(&self) -> EvalStats {
        self.stats.lock().unwrap().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AnalyticField;

    #[test]
    fn counts_batches_per_stage_and_maps_to_world() {
        let grid = GridSpec::new(Point::new(-1.0, -1.0, -1.0), Point::new(1.0, 1.0, 1.0), 4).unwrap();
        let s = AnalyticField::sphere(Point::origin(), 0.3);
        let ev = Evaluator::new(&s, &grid);
        // Grid (2, 2, 2) is the domain center.
        assert_eq!(ev.labels(Stage::Labels, &[Point::new(2.0, 2.0, 2.0), Point::origin()]), vec![1, 0]);
        ev.labels(Stage::Search1d, &[Point::origin(); 5]);
        ev.labels(Stage::Search1d, &[Point::origin(); 5]);
        let st = ev.stats();
        assert_eq!(st.labels, StageCount { batches: 1, points: 2 });
        assert_eq!(st.search_1d, StageCount { batches: 2, points: 10 });
        assert_eq!(st.total_points(), 12);
    }
}
