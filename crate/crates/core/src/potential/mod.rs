//! Riesz potentials, maximal operators and the capacity machinery on ℍₙ.

mod grid;
mod solvers;

pub use grid::{Grid, GridDensity, GridSpec};
pub use solvers::{
    capacity_dual, capacity_primal, geometric_levels, strong_cap_functional,
    CapacityCertificate, SolverOptions, StrongCapLevel, StrongCapReport,
};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HPoint, Space, UPoint};
use crate::kernels::{poisson_kernel, riesz_kernel, KernelParams};
use crate::quadrature::{integrate_boundary_improper, Budget, Estimate};

/// Finitely many nonnegative point masses on the closed domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    pub atoms: Vec<(UPoint, f64)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(UPoint, f64)>) -> Result<Self> {
        for (_, m) in &atoms {
            if !(*m >= 0.0 && m.is_finite()) {
                return Err(Error::InvalidParam(format!("atom mass {m} must be finite and >= 0")));
            }
        }
        Ok(Self { atoms })
    }

    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, m)| m).sum()
    }

    /// All atoms on the boundary (h = 0)?
    pub fn is_boundary(&self) -> bool {
        self.atoms.iter().all(|(u, _)| u.h == 0.0)
    }

    pub fn translate(&self, space: &Space, g: &HPoint) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|(u, m)| {
                Ok((
                    UPoint { base: space.group_mul(g, &u.base)?, h: u.h },
                    *m,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { atoms })
    }

    /// Dilate atom positions by `δ_r`, masses unchanged.
    pub fn dilate(&self, space: &Space, r: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|(u, m)| (space.dilate(r, u), *m)).collect(),
        }
    }
}

/// Source of a Riesz potential: a grid density (integrated against Haar
/// measure) or an atomic measure (mass-weighted kernel sum, interior atoms
/// acting through their boundary base point).
pub enum SourceMeasure<'a> {
    Grid(&'a GridDensity),
    Atomic(&'a AtomicMeasure),
}

/// Mean value of the Riesz kernel over a cell of volume `w`, realized as
/// the gauge ball of equal volume: (1/w)·C_α·c_n·(2n+2)/(2α)·r_eq^{2α} with
/// r_eq = (w/c_n)^{1/(2n+2)}. Used for the self-cell of discrete operators;
/// the kernel is integrable there since 2n+2−2α < 2n+2.
pub fn riesz_cell_average(p: &KernelParams, space: &Space, w: f64) -> f64 {
    let cn = space.ball_volume_exact();
    let q = space.homogeneous_dim();
    let r_eq = (w / cn).powf(1.0 / q);
    p.riesz_constant() * cn * q / (2.0 * p.alpha) * r_eq.powf(2.0 * p.alpha) / w
}

/// Riesz potential I_α(source)(x).
pub fn riesz_potential(
    p: &KernelParams,
    space: &Space,
    source: &SourceMeasure,
    x: &HPoint,
) -> Result<f64> {
    match source {
        SourceMeasure::Grid(f) => {
            let w = f.grid.cell_volume();
            let avg = riesz_cell_average(p, space, w);
            let mut acc = 0.0;
            let mut coords = vec![0.0; 2 * space.n() + 1];
            for (j, &v) in f.values.iter().enumerate() {
                if v == 0.0 {
                    continue;
                }
                f.grid.node_coords(j, &mut coords);
                let node = HPoint::from_coords(&coords);
                let d = space.dist_boundary(x, &node)?;
                let k = if d < f.grid.min_spacing() * 0.5 {
                    avg
                } else {
                    p.riesz_constant() * d.powf(-(2.0 * (p.n as f64 + 1.0 - p.alpha)))
                };
                acc += k * v * w;
            }
            Ok(acc)
        }
        SourceMeasure::Atomic(mu) => {
            let mut acc = 0.0;
            for (u, m) in &mu.atoms {
                if *m == 0.0 {
                    continue;
                }
                acc += m * riesz_kernel(p, space, x, &u.base)?;
            }
            Ok(acc)
        }
    }
}

/// Discrete Hardy–Littlewood maximal function of a grid density:
/// max over the radius schedule of `r^{−(2n+2)} ∫_{B(x,r)} f dH`.
pub fn hardy_littlewood_max(
    space: &Space,
    f: &GridDensity,
    x: &HPoint,
    radii: &[f64],
) -> Result<f64> {
    let w = f.grid.cell_volume();
    let q = space.homogeneous_dim();
    let mut best: f64 = 0.0;
    let mut coords = vec![0.0; 2 * space.n() + 1];
    for &r in radii {
        let mut acc = 0.0;
        for (j, &v) in f.values.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            f.grid.node_coords(j, &mut coords);
            if space.dist_boundary(x, &HPoint::from_coords(&coords))? < r {
                acc += v * w;
            }
        }
        best = best.max(acc / r.powf(q));
    }
    Ok(best)
}

/// A₁-type ratio for the Riesz kernel: sup over the radius schedule of the
/// ball average `r^{−(2n+2)} ∫_{B(x,r)} I_α(u,·) dH` divided by I_α(x,u).
///
/// Ball averages are Monte-Carlo with an exclusion ball of radius
/// `eps = 10⁻²·min(r, d(x,u))` around the singularity, corrected by the
/// closed-form local integral when the exclusion ball lies inside B(x,r).
pub fn a1_ratio(
    p: &KernelParams,
    space: &Space,
    x: &HPoint,
    u: &HPoint,
    radii: &[f64],
    budget: &Budget,
) -> Result<f64> {
    let dxu = space.dist_boundary(x, u)?;
    if dxu == 0.0 {
        return Err(Error::SingularPair);
    }
    let denom = riesz_kernel(p, space, x, u)?;
    let cn = space.ball_volume_exact();
    let q = space.homogeneous_dim();
    let per_radius = (budget.samples as usize / radii.len().max(1)).max(64);
    let mut best: f64 = 0.0;
    for (i, &r) in radii.iter().enumerate() {
        let eps = 0.01 * r.min(dxu);
        let pts = crate::quadrature::sample_ball(space, x, r, per_radius, budget.seed + i as u64);
        let mut acc = 0.0;
        for pt in &pts {
            let d = space.dist_boundary(u, pt)?;
            if d > eps {
                acc += p.riesz_constant() * d.powf(-(2.0 * (p.n as f64 + 1.0 - p.alpha)));
            }
        }
        let mut integral = cn * r.powf(q) * acc / per_radius as f64;
        if dxu + eps <= r {
            integral += p.riesz_constant() * cn * q / (2.0 * p.alpha) * eps.powf(2.0 * p.alpha);
        }
        best = best.max(integral / r.powf(q) / denom);
    }
    Ok(best)
}

/// Ratio `∫ I_α(x,y) I_α(y,u) dH(y) / I_{2α}(x,u)` over all of ℍₙ.
///
/// Both the integral and I_{2α} are homogeneous of the same degree, so the
/// ratio depends only on (n, α); requires the main-theorem range so that
/// the order-2α kernel has positive exponent. Windows scale with d(x,u);
/// the two kernel singularities carry exclusion balls of radius
/// `10⁻²·d(x,u)` with closed-form corrections.
pub fn conv_ratio(
    p: &KernelParams,
    space: &Space,
    x: &HPoint,
    u: &HPoint,
    budget: &Budget,
) -> Result<Estimate> {
    if !p.in_main_theorem_range() {
        return Err(Error::AlphaRange {
            alpha: p.alpha,
            lo: p.n as f64 / 2.0,
            hi: (p.n as f64 + 1.0) / 2.0,
        });
    }
    let dxu = space.dist_boundary(x, u)?;
    if dxu == 0.0 {
        return Err(Error::SingularPair);
    }
    let eps = 0.01 * dxu;
    let beta = 2.0 * (p.n as f64 + 1.0 - p.alpha);
    let cxy = p.riesz_constant();
    let f = |y: &HPoint| {
        let dx = space.dist_boundary(x, y).expect("dims");
        let du = space.dist_boundary(u, y).expect("dims");
        if dx <= eps || du <= eps {
            Complex64::ZERO
        } else {
            Complex64::new(cxy * dx.powf(-beta) * cxy * du.powf(-beta), 0.0)
        }
    };
    // gauge midpoint of the pair: δ_{1/2}(u·x⁻¹)·x
    let rel = space.group_mul(u, &space.group_inv(x))?;
    let mid = space.translate_boundary(x, &space.dilate_boundary(0.5, &rel))?;
    let est = integrate_boundary_improper(space, f, &mid, dxu, budget, 2e-3, 40)?;
    // closed-form correction for the two excluded balls: near y = x the
    // smooth factor is I_α(x,u) to first order, likewise near y = u
    let cn = space.ball_volume_exact();
    let q = space.homogeneous_dim();
    let local = cxy * cn * q / (2.0 * p.alpha) * eps.powf(2.0 * p.alpha);
    let correction = 2.0 * local * riesz_kernel(p, space, x, u)?;
    let p2 = KernelParams { n: p.n, alpha: 2.0 * p.alpha };
    let i2a = libm::tgamma(p.n as f64 + 1.0 - p2.alpha)
        / (2f64.powf(p2.alpha) * (2.0 * std::f64::consts::PI).powi(p.n as i32 + 1))
        * dxu.powf(-(2.0 * (p.n as f64 + 1.0) - 2.0 * p2.alpha));
    Ok(Estimate {
        value: (est.value.re + correction) / i2a,
        stderr: est.stderr / i2a,
    })
}

/// Poisson extension `P[f](ζ) = ∫ P(ζ,ω) f(ω) dH(ω)` of a boundary grid
/// density, Monte-Carlo over the grid box with nearest-node lookup (the
/// step-function reading of the density).
pub fn poisson_extension(
    space: &Space,
    f: &GridDensity,
    zeta: &UPoint,
    budget: &Budget,
) -> Result<Estimate> {
    if !zeta.is_interior() {
        return Err(Error::BoundaryPoint);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let dim = 2 * space.n() + 1;
    let (lo, hi) = f.grid.bounds();
    let boxvol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    let mut coord = vec![0.0; dim];
    for _ in 0..budget.samples {
        for d in 0..dim {
            coord[d] = rng.random_range(lo[d]..hi[d]);
        }
        let pnt = HPoint::from_coords(&coord);
        let val = match f.grid.nearest_index(&coord) {
            Some(j) => f.values[j] * poisson_kernel(space, zeta, &pnt)?,
            None => 0.0,
        };
        sum += val;
        sumsq += val * val;
    }
    let mean = sum / budget.samples as f64;
    let var = (sumsq / budget.samples as f64 - mean * mean).max(0.0);
    Ok(Estimate {
        value: boxvol * mean,
        stderr: boxvol * (var / budget.samples as f64).sqrt(),
    })
}

/// Deterministic Riemann-sum Poisson extension of the same step density.
pub fn poisson_extension_riemann(
    space: &Space,
    f: &GridDensity,
    zeta: &UPoint,
) -> Result<f64> {
    if !zeta.is_interior() {
        return Err(Error::BoundaryPoint);
    }
    let w = f.grid.cell_volume();
    let mut acc = 0.0;
    let mut coords = vec![0.0; 2 * space.n() + 1];
    for (j, &v) in f.values.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        f.grid.node_coords(j, &mut coords);
        acc += v * w * poisson_kernel(space, zeta, &HPoint::from_coords(&coords))?;
    }
    Ok(acc)
}

/// Deterministic sampling layout for admissible maximal functions.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AdmissibleSampling {
    pub h_max: f64,
    pub layers: usize,
    pub per_layer: usize,
    pub seed: u64,
}

impl Default for AdmissibleSampling {
    fn default() -> Self {
        Self { h_max: 4.0, layers: 16, per_layer: 64, seed: 0 }
    }
}

/// Lower bound for `sup_{Γ_γ(ω)} |F|` over a deterministic layered sample
/// of the admissible region (heights h_max·2^{−k}); increasing in budget.
pub fn admissible_max<F>(
    space: &Space,
    f: F,
    omega: &HPoint,
    gamma: f64,
    sampling: &AdmissibleSampling,
) -> Result<f64>
where
    F: Fn(&UPoint) -> Result<f64>,
{
    if gamma <= 1.0 {
        return Err(Error::InvalidParam(format!("aperture gamma = {gamma} must exceed 1")));
    }
    let pts = crate::quadrature::admissible_region_samples(
        space,
        omega,
        gamma,
        sampling.h_max,
        sampling.layers,
        sampling.per_layer,
        sampling.seed,
    );
    let mut best: f64 = 0.0;
    for u in &pts {
        best = best.max(f(u)?.abs());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cpx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn potential_of_zero_and_single_atom() {
        let space = Space::new(1);
        let p = KernelParams::new(1, 0.75).unwrap();
        let grid = Grid::from_box(1, vec![-1.0, -1.0, -1.0], vec![1.0, 1.0, 1.0], 8);
        let zero = GridDensity::zero(grid);
        let x = HPoint::new(vec![cpx(2.0, 0.0)], 0.0);
        assert_eq!(
            riesz_potential(&p, &space, &SourceMeasure::Grid(&zero), &x).unwrap(),
            0.0
        );
        let y = HPoint::new(vec![cpx(0.0, 0.5)], 0.3);
        let mu = AtomicMeasure::new(vec![(UPoint::boundary(y.clone()), 1.7)]).unwrap();
        let v = riesz_potential(&p, &space, &SourceMeasure::Atomic(&mu), &x).unwrap();
        let expect = 1.7 * riesz_kernel(&p, &space, &x, &y).unwrap();
        assert!((v - expect).abs() < 1e-14 * expect);
        // evaluation at the atom is a typed error
        assert!(riesz_potential(&p, &space, &SourceMeasure::Atomic(&mu), &y).is_err());
    }

    #[test]
    fn potential_scaling_under_dilation() {
        // I_alpha of the dilated atomic source: masses fixed, positions
        // delta_r; potential at delta_r x picks up r^{-(2n+2-2alpha)}
        let space = Space::new(1);
        let p = KernelParams::new(1, 0.75).unwrap();
        let y = UPoint::boundary(HPoint::new(vec![cpx(0.4, -0.3)], 0.2));
        let mu = AtomicMeasure::new(vec![(y, 2.0)]).unwrap();
        let x = HPoint::new(vec![cpx(-1.0, 0.8)], 0.5);
        let r = 2.0;
        let scaled = mu.dilate(&space, r);
        let v1 = riesz_potential(&p, &space, &SourceMeasure::Atomic(&scaled), &space.dilate_boundary(r, &x)).unwrap();
        let v0 = riesz_potential(&p, &space, &SourceMeasure::Atomic(&mu), &x).unwrap();
        assert!((v1 - v0 * r.powf(-2.5)).abs() < 1e-12 * v0);
    }

    #[test]
    fn hl_max_of_constant_density() {
        let space = Space::new(1);
        // f = c on a box much larger than the largest ball: the ball average
        // at radius r is c_n * c once B(x,r) is inside the box
        let grid = Grid::from_box(1, vec![-8.0, -8.0, -16.0], vec![8.0, 8.0, 16.0], 40);
        let f = GridDensity::from_fn(&grid, |_| 2.0);
        let x = space.identity();
        let v = hardy_littlewood_max(&space, &f, &x, &[1.0, 2.0]).unwrap();
        let expect = 2.0 * space.ball_volume_exact();
        assert!((v - expect).abs() < 0.05 * expect, "{v} vs {expect}");
        // zero density
        let z = GridDensity::zero(f.grid.clone());
        assert_eq!(hardy_littlewood_max(&space, &z, &x, &[1.0]).unwrap(), 0.0);
        // max dominates any single-radius average
        let v1 = hardy_littlewood_max(&space, &f, &x, &[1.5]).unwrap();
        let vall = hardy_littlewood_max(&space, &f, &x, &[0.5, 1.5, 3.0]).unwrap();
        assert!(vall >= v1);
    }

    #[test]
    fn a1_ratio_far_kernel_is_flat() {
        // tiny r at large d(x,u): the kernel is nearly constant on the
        // ball, so the r^{-(2n+2)}-normalized average tends to c_n·I_α(x,u)
        let space = Space::new(1);
        let p = KernelParams::new(1, 0.75).unwrap();
        let x = space.identity();
        let u = HPoint::new(vec![cpx(8.0, 0.0)], 0.0);
        let ratio = a1_ratio(&p, &space, &x, &u, &[0.05], &Budget::new(20_000, 3)).unwrap();
        let cn = space.ball_volume_exact();
        assert!((ratio / cn - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn conv_ratio_precondition() {
        let space = Space::new(1);
        let p = KernelParams::new(1, 0.45).unwrap();
        let x = space.identity();
        let u = HPoint::new(vec![cpx(2.0, 0.0)], 0.0);
        assert!(matches!(
            conv_ratio(&p, &space, &x, &u, &Budget::new(1000, 1)),
            Err(Error::AlphaRange { .. })
        ));
    }

    #[test]
    fn poisson_extension_monotone_and_zero() {
        let space = Space::new(1);
        let grid = Grid::from_box(1, vec![-4.0, -4.0, -4.0], vec![4.0, 4.0, 4.0], 12);
        let zero = GridDensity::zero(grid.clone());
        let zeta = UPoint::new(space.identity(), 0.5);
        let b = Budget::new(20_000, 5);
        assert_eq!(poisson_extension(&space, &zero, &zeta, &b).unwrap().value, 0.0);
        let f = GridDensity::from_fn(&grid, |_| 1.0);
        let g = GridDensity::from_fn(&grid, |_| 2.0);
        let pf = poisson_extension(&space, &f, &zeta, &b).unwrap();
        let pg = poisson_extension(&space, &g, &zeta, &b).unwrap();
        assert!(pf.value <= pg.value);
        assert!(poisson_extension(&space, &f, &UPoint::boundary(space.identity()), &b).is_err());
    }

    #[test]
    fn admissible_max_of_constant() {
        let space = Space::new(1);
        let omega = HPoint::new(vec![cpx(0.3, 0.1)], -0.4);
        let v = admissible_max(
            &space,
            |_| Ok(2.5),
            &omega,
            2.0,
            &AdmissibleSampling::default(),
        )
        .unwrap();
        assert_eq!(v, 2.5);
        // monotone in gamma for |F| growing toward the region edge
        let f = |u: &UPoint| {
            Ok(space.dist(u, &UPoint::boundary(omega.clone())).unwrap())
        };
        let v2 = admissible_max(&space, f, &omega, 2.0, &AdmissibleSampling::default()).unwrap();
        let v4 = admissible_max(&space, f, &omega, 4.0, &AdmissibleSampling::default()).unwrap();
        assert!(v4 >= v2 * 0.99);
    }
}
