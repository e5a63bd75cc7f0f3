//! Dense scalar field over the rink, sampled at cell centers.

use serde::{Deserialize, Serialize};

/// Row-major grid covering the rink rectangle exactly; `values[iy * nx + ix]`
/// belongs to the cell center `((ix + 0.5) dx, (iy + 0.5) dy)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarGrid {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    /// Puck-arrival time the field was evaluated at, when time-dependent.
    pub t: Option<f64>,
    pub values: Vec<f64>,
}

impl ScalarGrid {
    /// Builds a grid by evaluating `f` at every cell center. `resolution` is
    /// the requested cell size; the effective size is adjusted so the cells
    /// tile the rectangle exactly.
    pub fn sample(
        length: f64,
        width: f64,
        resolution: f64,
        t: Option<f64>,
        mut f: impl FnMut(f64, f64) -> f64,
    ) -> ScalarGrid {
        let nx = (length / resolution).round().max(1.0) as usize;
        let ny = (width / resolution).round().max(1.0) as usize;
        let dx = length / nx as f64;
        let dy = width / ny as f64;
        let mut values = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            let y = (iy as f64 + 0.5) * dy;
            for ix in 0..nx {
                let x = (ix as f64 + 0.5) * dx;
                values.push(f(x, y));
            }
        }
        ScalarGrid {
            nx,
            ny,
            dx,
            dy,
            t,
            values,
        }
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        ((ix as f64 + 0.5) * self.dx, (iy as f64 + 0.5) * self.dy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_tile_the_rectangle_exactly() {
        let g = ScalarGrid::sample(200.0, 85.0, 3.0, None, |_, _| 0.0);
        assert!((g.nx as f64 * g.dx - 200.0).abs() < 1e-12);
        assert!((g.ny as f64 * g.dy - 85.0).abs() < 1e-12);
        assert_eq!(g.values.len(), g.nx * g.ny);
    }
}
