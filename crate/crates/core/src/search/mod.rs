//! Query-driven point searches: bisection on crossing edges, line-binary
//! search along rays, and the in-face 2D point search.
//!
//! Every search runs lock-step: iteration `k` of every element is evaluated
//! in one batch, so the number of batches is independent of the element count.

mod line;
mod one_d;
mod two_d;

use serde::{Deserialize, Serialize};

pub use line::{line_binary_search, line_binary_search_one, LineHit, Ray};
pub use one_d::{find_1d_points, linear_1d_points, midpoint_1d_points, Point1D};
pub use two_d::{find_2d_points, FacePair, Point2D, Point2DStatus, COINCIDENCE_EPS, CLAMP_MARGIN};

/// Coarse-to-fine budget of one line-binary search. Ranges are in cell units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSearchParams {
    pub n_linear: u32,
    pub n_binary: u32,
    pub max_range: f64,
}

impl LineSearchParams {
    pub fn evaluations(&self) -> u32 {
        self.n_linear + self.n_binary
    }

    /// Width of the final bracket.
    pub fn resolution(&self) -> f64 {
        self.max_range / (f64::from(self.n_linear) * 2f64.powi(self.n_binary as i32))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub iters_1d: u32,
    /// Ray from the midpoint of the two 1D points, perpendicular to their line.
    pub step1: LineSearchParams,
    /// The two rays parallel to that line.
    pub step2: LineSearchParams,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            iters_1d: 15,
            step1: LineSearchParams {
                n_linear: 4,
                n_binary: 11,
                max_range: 0.8,
            },
            step2: LineSearchParams {
                n_linear: 3,
                n_binary: 12,
                max_range: std::f64::consts::FRAC_1_SQRT_2,
            },
        }
    }
}

impl SearchBudget {
    /// Field evaluations spent by the three line-binary searches of one 2D point.
    pub fn evals_per_2d_point(&self) -> u32 {
        self.step1.evaluations() + 2 * self.step2.evaluations()
    }

    pub fn validate(&self) -> crate::Result<()> {
        let ok = |p: &LineSearchParams| p.n_linear >= 1 && p.max_range > 0.0 && p.max_range.is_finite() && p.n_binary <= 52;
        if self.iters_1d == 0 || self.iters_1d > 52 || !ok(&self.step1) || !ok(&self.step2) {
            return Err(crate::Error::Config(format!("invalid search budget {self:?}")));
        }
        Ok(())
    }
}
