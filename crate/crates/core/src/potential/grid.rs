//! Uniform cell-centered grids on boxes of ℍₙ in flat coordinates
//! (Re z_1, Im z_1, …, t) and nonnegative densities on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BallFamily, HPoint, Space};

/// Grid construction parameters for capacity solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// nodes per axis
    pub nodes_per_axis: usize,
    /// box margin around the target set, as a multiple of the largest ball
    /// radius (so that dilating a configuration dilates its grid exactly)
    pub margin_factor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nodes_per_axis: 32, margin_factor: 2.0 }
    }
}

/// A uniform cell-centered grid over a box in ℝ^{2n+1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    spacing: Vec<f64>,
    shape: Vec<usize>,
}

impl Grid {
    pub fn from_box(n: usize, lo: Vec<f64>, hi: Vec<f64>, nodes_per_axis: usize) -> Self {
        assert_eq!(lo.len(), 2 * n + 1);
        assert!(nodes_per_axis >= 2);
        let spacing: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| (b - a) / nodes_per_axis as f64)
            .collect();
        Self { n, lo, hi, spacing, shape: vec![nodes_per_axis; 2 * n + 1] }
    }

    /// Grid over the bounding box of a ball family enlarged by
    /// `margin_factor · max radius` in the gauge sense.
    pub fn covering_family(space: &Space, family: &BallFamily, spec: &GridSpec) -> Self {
        let n = space.n();
        let margin = spec.margin_factor * family.max_radius();
        let mut lo = vec![f64::INFINITY; 2 * n + 1];
        let mut hi = vec![f64::NEG_INFINITY; 2 * n + 1];
        for b in &family.balls {
            let (blo, bhi) = ball_box_with_margin(space, &b.center, b.r, margin);
            for d in 0..2 * n + 1 {
                lo[d] = lo[d].min(blo[d]);
                hi[d] = hi[d].max(bhi[d]);
            }
        }
        Self::from_box(n, lo, hi, spec.nodes_per_axis)
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Write the flat coordinates of node `idx` into `out`.
    pub fn node_coords(&self, idx: usize, out: &mut [f64]) {
        let mut rest = idx;
        for d in 0..self.dim() {
            let i = rest % self.shape[d];
            rest /= self.shape[d];
            out[d] = self.lo[d] + (i as f64 + 0.5) * self.spacing[d];
        }
    }

    pub fn node(&self, idx: usize) -> HPoint {
        let mut c = vec![0.0; self.dim()];
        self.node_coords(idx, &mut c);
        HPoint::from_coords(&c)
    }

    /// Index of the cell containing the given flat coordinates, if inside.
    pub fn nearest_index(&self, coords: &[f64]) -> Option<usize> {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for d in 0..self.dim() {
            let rel = (coords[d] - self.lo[d]) / self.spacing[d];
            if rel < 0.0 || rel >= self.shape[d] as f64 {
                return None;
            }
            idx += stride * (rel as usize).min(self.shape[d] - 1);
            stride *= self.shape[d];
        }
        Some(idx)
    }

    /// Gauge radius of the ball covering one grid cell (half-diagonal).
    pub fn cell_cover_radius(&self, space: &Space) -> f64 {
        let mut half = vec![0.0; self.dim()];
        for d in 0..self.dim() {
            half[d] = 0.5 * self.spacing[d];
        }
        space.gauge_boundary(&HPoint::from_coords(&half))
    }
}

fn ball_box_with_margin(
    space: &Space,
    c: &HPoint,
    r: f64,
    margin: f64,
) -> (Vec<f64>, Vec<f64>) {
    // enlarge radius for the z-extents; the t-extent keeps the twist slack
    // of the ball itself so that every point of B(c, r) is covered
    let big = r + margin;
    let (mut lo, mut hi) = space.ball_bounding_box(c, big);
    let znorm = c.z.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let text = big * big + r * znorm;
    let d = lo.len() - 1;
    lo[d] = c.t - text;
    hi[d] = c.t + text;
    (lo, hi)
}

/// Nonnegative density on a grid; node weight is the cell volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn zero(grid: Grid) -> Self {
        let len = grid.len();
        Self { grid, values: vec![0.0; len] }
    }

    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParam(format!(
                "density has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParam("density values must be finite and >= 0".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&HPoint) -> f64) -> Self {
        let mut coords = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|j| {
                grid.node_coords(j, &mut coords);
                f(&HPoint::from_coords(&coords)).max(0.0)
            })
            .collect();
        Self { grid: grid.clone(), values }
    }

    /// Discrete squared L² norm `w Σ v²`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    /// Discrete integral `w Σ v`.
    pub fn integral(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().sum::<f64>()
    }

    /// Pointwise scale by `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;
    use num_complex::Complex64;

    #[test]
    fn node_roundtrip() {
        let g = Grid::from_box(1, vec![-1.0, -2.0, -3.0], vec![1.0, 2.0, 3.0], 8);
        assert_eq!(g.len(), 512);
        let mut c = vec![0.0; 3];
        for idx in [0usize, 7, 63, 511, 200] {
            g.node_coords(idx, &mut c);
            assert_eq!(g.nearest_index(&c), Some(idx));
        }
        assert_eq!(g.nearest_index(&[5.0, 0.0, 0.0]), None);
    }

    #[test]
    fn covering_box_contains_family() {
        let space = Space::new(1);
        let fam = BallFamily::new(vec![
            Ball { center: HPoint::new(vec![Complex64::new(2.0, 1.0)], 0.5), r: 1.0 },
            Ball { center: HPoint::new(vec![Complex64::new(-2.0, 0.0)], -0.5), r: 0.5 },
        ]);
        let g = Grid::covering_family(&space, &fam, &GridSpec { nodes_per_axis: 16, margin_factor: 1.0 });
        // every ball point (sampled) lies inside the box
        for b in &fam.balls {
            for p in crate::quadrature::sample_ball(&space, &b.center, b.r, 500, 1) {
                let c = p.coords();
                let (lo, hi) = g.bounds();
                for d in 0..3 {
                    assert!(c[d] >= lo[d] && c[d] <= hi[d], "axis {d}: {} not in [{}, {}]", c[d], lo[d], hi[d]);
                }
            }
        }
    }

    #[test]
    fn density_validation() {
        let g = Grid::from_box(1, vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], 4);
        assert!(GridDensity::new(g.clone(), vec![0.0; 63]).is_err());
        assert!(GridDensity::new(g.clone(), vec![-1.0; 64]).is_err());
        let d = GridDensity::new(g, vec![2.0; 64]).unwrap();
        assert!((d.integral() - 2.0).abs() < 1e-12);
        assert!((d.l2_norm_sq() - 4.0).abs() < 1e-12);
    }
}
