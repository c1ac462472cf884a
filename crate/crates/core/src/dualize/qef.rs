use nalgebra::{Matrix3, SymmetricEigen};

use crate::{Point, Vector};

pub const DEFAULT_TRUNCATION: f64 = 0.1;

/// A point on the surface with the normal of the local flat plane through it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneSample {
    pub position: Point,
    pub normal: Vector,
    /// The normal came from a fallback rather than the intended estimator.
    pub fallback: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QefSolution {
    pub position: Point,
    /// Minimizer before clamping to the cell.
    pub unclamped: Point,
    /// Number of eigen-directions kept.
    pub rank: u8,
    /// Residual at `position`.
    pub residual: f64,
}

pub fn qef_residual(samples: &[PlaneSample], p: &Point) -> f64 {
    samples.iter().map(|s| s.normal.dot(&(p - s.position)).powi(2)).sum()
}

pub fn mass_point(samples: &[PlaneSample]) -> Point {
    let sum = samples.iter().fold(Vector::zeros(), |acc, s| acc + s.position.coords);
    Point::from(sum / samples.len() as f64)
}

/// Minimizes `sum (n . (p - p_e))^2` around the mass point.
///
/// Directions with singular value below `truncation * max` are dropped,
/// which pins the solution to the mass point along them. The result is then
/// clamped componentwise into `[cell_min, cell_max]`.
pub fn solve_qef(samples: &[PlaneSample], cell_min: &Point, cell_max: &Point, truncation: f64) -> QefSolution {
    assert!(!samples.is_empty(), "QEF needs at least one plane sample");
    let center = mass_point(samples);
    let mut ata = Matrix3::zeros();
    let mut atb = Vector::zeros();
    for s in samples {
        let n = s.normal;
        ata += n * n.transpose();
        atb += n * n.dot(&(s.position - center));
    }
    let eig = SymmetricEigen::new(ata);
    // Singular values of the stacked normals are square roots of these eigenvalues.
    let max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let mut x = Vector::zeros();
    let mut rank = 0u8;
    if max > 0.0 {
        for i in 0..3 {
            let lambda = eig.eigenvalues[i];
            if lambda > 0.0 && lambda.sqrt() >= truncation * max.sqrt() {
                let v = eig.eigenvectors.column(i).into_owned();
                x += v * (v.dot(&atb) / lambda);
                rank += 1;
            }
        }
    }
    let unclamped = center + x;
    let position = Point::from(unclamped.coords.zip_zip_map(&cell_min.coords, &cell_max.coords, |p, lo, hi| p.clamp(lo, hi)));
    QefSolution {
        position,
        unclamped,
        rank,
        residual: qef_residual(samples, &position),
    }
}
