//! Rectangular space-time grids and dressed-field sweeps.
//!
//! Sweeps over many grid points are embarrassingly parallel; with the
//! default `parallel` feature they run on rayon, otherwise on a plain
//! sequential iterator with identical results.

use crate::complex2::C64;
use crate::darboux::{dressed_u, DressingChain};
use crate::error::{Error, Result};
use crate::lax::SpacetimePoint;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Uniform rectangular grid, t-major: point (i, j) is
/// (t_min + i dt, x_min + j dx).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
}

impl Grid {
    pub fn new(t_min: f64, t_max: f64, nt: usize, x_min: f64, x_max: f64, nx: usize) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidParameter("grid bounds must be finite".into()));
        }
        if t_max < t_min || x_max < x_min {
            return Err(Error::InvalidParameter(
                "grid bounds must satisfy t_min <= t_max and x_min <= x_max".into(),
            ));
        }
        if nt < 2 || nx < 2 {
            return Err(Error::InvalidParameter(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        Ok(Self { t_min, t_max, nt, x_min, x_max, nx })
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t_min + (self.t_max - self.t_min) * i as f64 / (self.nt - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * j as f64 / (self.nx - 1) as f64
    }

    /// All grid points in t-major order.
    pub fn points(&self) -> Vec<SpacetimePoint> {
        let mut pts = Vec::with_capacity(self.nt * self.nx);
        for i in 0..self.nt {
            for j in 0..self.nx {
                pts.push(SpacetimePoint::new(self.t(i), self.x(j)));
            }
        }
        pts
    }

    pub fn len(&self) -> usize {
        self.nt * self.nx
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSample {
    pub t: f64,
    pub x: f64,
    pub u: C64,
}

/// Evaluate the dressed field on every grid point (t-major order).
pub fn evaluate_on_grid(chain: &DressingChain, grid: &Grid) -> Result<Vec<GridSample>> {
    let pts = grid.points();
    map_points(&pts, |p| {
        Ok(GridSample { t: p.t, x: p.x, u: dressed_u(chain, p)? })
    })
}

/// Map a fallible evaluator over points, in parallel when the `parallel`
/// feature is active.
pub fn map_points<T, F>(points: &[SpacetimePoint], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(SpacetimePoint) -> Result<T> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        points.par_iter().map(|&p| f(p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(|&p| f(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex2::{c64, ONE};
    use crate::darboux::SpectralDatum;
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_ordering_is_t_major() {
        let g = Grid::new(0.0, 1.0, 3, -1.0, 1.0, 2).unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 6);
        assert_abs_diff_eq!(pts[0].t, 0.0);
        assert_abs_diff_eq!(pts[0].x, -1.0);
        assert_abs_diff_eq!(pts[1].t, 0.0);
        assert_abs_diff_eq!(pts[1].x, 1.0);
        assert_abs_diff_eq!(pts[2].t, 0.5);
        assert_abs_diff_eq!(pts[5].t, 1.0);
        assert_abs_diff_eq!(pts[5].x, 1.0);
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 1.0, 1, 0.0, 1.0, 3).is_err());
        assert!(Grid::new(1.0, 0.0, 3, 0.0, 1.0, 3).is_err());
        assert!(Grid::new(f64::NAN, 1.0, 3, 0.0, 1.0, 3).is_err());
    }

    #[test]
    fn grid_evaluation_matches_pointwise() {
        let chain = DressingChain::single(SpectralDatum::new(c64(0.3, 1.0), ONE, ONE).unwrap());
        let g = Grid::new(0.0, 0.5, 3, -2.0, 2.0, 5).unwrap();
        let samples = evaluate_on_grid(&chain, &g).unwrap();
        assert_eq!(samples.len(), 15);
        for s in &samples {
            let direct = dressed_u(&chain, SpacetimePoint::new(s.t, s.x)).unwrap();
            assert_abs_diff_eq!((s.u - direct).norm(), 0.0, epsilon = 1e-15);
        }
    }
}
