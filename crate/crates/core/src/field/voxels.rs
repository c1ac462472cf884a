use super::OccupancyField;
use crate::error::{Error, Result};
use crate::Point;

/// Trilinearly interpolated sample volume; values outside the volume are 0.
///
/// Samples sit on the nodes of a regular lattice spanning `[min, max]`, with
/// `data[x + y * nx + z * nx * ny]`.
pub struct VoxelField {
    dims: [usize; 3],
    min: Point,
    max: Point,
    data: Vec<f64>,
    continuous: bool,
}

impl VoxelField {
    pub fn new(dims: [usize; 3], min: Point, max: Point, data: Vec<f64>) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::Config(format!("voxel dims must be at least 2 per axis, got {dims:?}")));
        }
        let expected = dims[0] * dims[1] * dims[2];
        if data.len() != expected {
            return Err(Error::Config(format!(
                "voxel data has {} values, dims {dims:?} need {expected}",
                data.len()
            )));
        }
        if (0..3).any(|a| !(max[a] > min[a])) {
            return Err(Error::Config("voxel bounds must have positive extent".into()));
        }
        let continuous = data.iter().any(|&v| v != 0.0 && v != 1.0);
        Ok(Self {
            dims,
            min,
            max,
            data,
            continuous,
        })
    }

    fn at(&self, x: usize, y: usize, z: usize) -> f64 {
        self.data[x + y * self.dims[0] + z * self.dims[0] * self.dims[1]]
    }

    fn sample(&self, p: &Point) -> f64 {
        let mut idx = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let n = self.dims[a] - 1;
            let s = (p[a] - self.min[a]) / (self.max[a] - self.min[a]) * n as f64;
            if !(0.0..=n as f64).contains(&s) {
                return 0.0;
            }
            let i = (s.floor() as usize).min(n - 1);
            idx[a] = i;
            frac[a] = s - i as f64;
        }
        let [x, y, z] = idx;
        let [fx, fy, fz] = frac;
        let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
        let c00 = lerp(self.at(x, y, z), self.at(x + 1, y, z), fx);
        let c10 = lerp(self.at(x, y + 1, z), self.at(x + 1, y + 1, z), fx);
        let c01 = lerp(self.at(x, y, z + 1), self.at(x + 1, y, z + 1), fx);
        let c11 = lerp(self.at(x, y + 1, z + 1), self.at(x + 1, y + 1, z + 1), fx);
        lerp(lerp(c00, c10, fy), lerp(c01, c11, fy), fz)
    }
}

impl OccupancyField for VoxelField {
    fn eval_raw(&self, points: &[Point], out: &mut [f64]) {
        for (p, o) in points.iter().zip(out.iter_mut()) {
            *o = self.sample(p);
        }
    }

    fn is_continuous(&self) -> bool {
        self.continuous
    }
}
