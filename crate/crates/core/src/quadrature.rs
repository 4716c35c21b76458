//! Seeded stratified Monte-Carlo integration.
//!
//! Everything here is deterministic for a fixed seed and budget, and the
//! determinism is thread-count independent: samples are partitioned into
//! strata with one counter-based RNG stream per stratum (ChaCha8 with the
//! stratum index as stream id), and stratum results are combined in index
//! order.
//!
//! Improper integrals over ℍₙ or over the full domain ℍₙ×(0,∞) are handled
//! by doubling-window schedules (core ball + dyadic gauge shells, dyadic
//! height layers) with a Cauchy stopping criterion; singular-at-zero height
//! factors h^{a−1} are flattened by the substitution h = h₀ v^{1/a} on the
//! bottom layer.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HPoint, Space, UPoint};

/// Sampling budget: everything that determines a Monte-Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub samples: u64,
    pub seed: u64,
    pub strat_depth: u32,
}

impl Budget {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, strat_depth: 2 }
    }

    pub fn with_depth(samples: u64, seed: u64, strat_depth: u32) -> Self {
        Self { samples, seed, strat_depth }
    }

    pub fn doubled(&self) -> Self {
        Self { samples: self.samples * 2, ..*self }
    }
}

/// A Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn zero() -> Self {
        Self { value: 0.0, stderr: 0.0 }
    }

    pub fn add(&self, other: &Estimate) -> Estimate {
        Estimate {
            value: self.value + other.value,
            stderr: (self.stderr * self.stderr + other.stderr * other.stderr).sqrt(),
        }
    }
}

/// Complex-valued estimate; `stderr` bounds the euclidean error of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub stderr: f64,
}

impl ComplexEstimate {
    pub fn zero() -> Self {
        Self { value: Complex64::ZERO, stderr: 0.0 }
    }

    pub fn add(&self, other: &ComplexEstimate) -> ComplexEstimate {
        ComplexEstimate {
            value: self.value + other.value,
            stderr: (self.stderr * self.stderr + other.stderr * other.stderr).sqrt(),
        }
    }
}

/// An axis-aligned box in ℝ^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }
}

struct StratumMoments {
    sum: f64,
    sumsq: f64,
    count: u64,
}

/// Stratified Monte-Carlo integral of `f` over a box.
///
/// The box is split into 2^depth sub-intervals per axis (depth is reduced
/// until every stratum holds at least two samples). Errors if `f` returns a
/// non-finite value, naming the offending point.
pub fn integrate_box<F>(f: F, domain: &BoxDomain, budget: &Budget) -> Result<Estimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let dim = domain.dim();
    let mut depth = budget.strat_depth;
    while depth > 0 && (1u64 << (depth as u64 * dim as u64)) * 2 > budget.samples {
        depth -= 1;
    }
    let per_axis = 1usize << depth;
    let nstrata = per_axis.pow(dim as u32);
    let base = budget.samples / nstrata as u64;
    let rem = budget.samples % nstrata as u64;

    let widths: Vec<f64> = domain
        .lo
        .iter()
        .zip(&domain.hi)
        .map(|(a, b)| (b - a) / per_axis as f64)
        .collect();
    let cell_vol = widths.iter().product::<f64>();

    let results: Vec<Result<StratumMoments>> = (0..nstrata)
        .into_par_iter()
        .map(|idx| {
            let count = base + if (idx as u64) < rem { 1 } else { 0 };
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(idx as u64 + 1);
            let mut lo = vec![0.0; dim];
            let mut rest = idx;
            for d in 0..dim {
                let cell = rest % per_axis;
                rest /= per_axis;
                lo[d] = domain.lo[d] + cell as f64 * widths[d];
            }
            let mut point = vec![0.0; dim];
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..count {
                for d in 0..dim {
                    point[d] = lo[d] + rng.random::<f64>() * widths[d];
                }
                let v = f(&point);
                if !v.is_finite() {
                    return Err(Error::NonFiniteSample { point: point.clone() });
                }
                sum += v;
                sumsq += v * v;
            }
            Ok(StratumMoments { sum, sumsq, count })
        })
        .collect();

    let mut value = 0.0;
    let mut var = 0.0;
    for r in results {
        let m = r?;
        if m.count == 0 {
            continue;
        }
        let mean = m.sum / m.count as f64;
        value += cell_vol * mean;
        let pvar = (m.sumsq / m.count as f64 - mean * mean).max(0.0);
        var += cell_vol * cell_vol * pvar / m.count as f64;
    }
    Ok(Estimate { value, stderr: var.sqrt() })
}

/// Draw `count` i.i.d. points uniform in the gauge ball `B(x, r)` (with
/// respect to Haar = Lebesgue measure) by rejection from the bounding box
/// of `B(0, r)` followed by the translation u ↦ u·x, under which the gauge
/// distance to x equals the gauge of the offset. Translation equivariance
/// is exact by construction: the same seed at a different center produces
/// the translated point set.
pub fn sample_ball(space: &Space, x: &HPoint, r: f64, count: usize, seed: u64) -> Vec<HPoint> {
    assert!(r > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut offset = space.identity();
    while out.len() < count {
        for zj in offset.z.iter_mut() {
            *zj = Complex64::new(
                rng.random_range(-2.0 * r..2.0 * r),
                rng.random_range(-2.0 * r..2.0 * r),
            );
        }
        offset.t = rng.random_range(-r * r..r * r);
        if space.gauge_boundary(&offset) < r {
            out.push(space.translate_boundary(x, &offset).expect("dims match"));
        }
    }
    out
}

/// Integration window on the boundary ℍₙ.
#[derive(Debug, Clone)]
pub enum Window {
    /// Gauge ball B(center, r).
    Ball { center: HPoint, r: f64 },
    /// Gauge shell r_lo ≤ d(·, center) < r_hi.
    Shell { center: HPoint, r_lo: f64, r_hi: f64 },
    /// Plain box in flat (Re z, Im z, t) coordinates.
    Box(BoxDomain),
}

/// Estimate `∫_W f dH_{2n+1}` over a window of the boundary.
///
/// Ball and shell windows sample group offsets from the bounding box of the
/// outer ball and left-translate, so the gauge membership test is exact.
pub fn integrate_boundary<F>(
    space: &Space,
    f: F,
    window: &Window,
    budget: &Budget,
) -> Result<Estimate>
where
    F: Fn(&HPoint) -> f64 + Sync,
{
    let c = integrate_boundary_complex(
        space,
        |p| Complex64::new(f(p), 0.0),
        window,
        budget,
    )?;
    Ok(Estimate { value: c.value.re, stderr: c.stderr })
}

/// Complex-valued boundary window integral (for kernel pairings).
pub fn integrate_boundary_complex<F>(
    space: &Space,
    f: F,
    window: &Window,
    budget: &Budget,
) -> Result<ComplexEstimate>
where
    F: Fn(&HPoint) -> Complex64 + Sync,
{
    match window {
        Window::Box(b) => {
            let re = integrate_box(|x| f(&HPoint::from_coords(x)).re, b, budget)?;
            let im_budget = Budget { seed: budget.seed, ..*budget };
            let im = integrate_box(|x| f(&HPoint::from_coords(x)).im, b, &im_budget)?;
            Ok(ComplexEstimate {
                value: Complex64::new(re.value, im.value),
                stderr: (re.stderr * re.stderr + im.stderr * im.stderr).sqrt(),
            })
        }
        Window::Ball { center, r } => {
            shell_integral(space, &f, center, 0.0, *r, budget)
        }
        Window::Shell { center, r_lo, r_hi } => {
            shell_integral(space, &f, center, *r_lo, *r_hi, budget)
        }
    }
}

fn shell_integral<F>(
    space: &Space,
    f: &F,
    center: &HPoint,
    r_lo: f64,
    r_hi: f64,
    budget: &Budget,
) -> Result<ComplexEstimate>
where
    F: Fn(&HPoint) -> Complex64 + Sync,
{
    let n = space.n();
    // offset box of B(0, r_hi)
    let boxvol = (4.0 * r_hi).powi(2 * n as i32) * 2.0 * r_hi * r_hi;
    let nstrata = 64usize.min((budget.samples / 32).max(1) as usize);
    let base = budget.samples / nstrata as u64;
    let rem = budget.samples % nstrata as u64;

    let results: Vec<Result<(Complex64, f64, u64)>> = (0..nstrata)
        .into_par_iter()
        .map(|idx| {
            let count = base + if (idx as u64) < rem { 1 } else { 0 };
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(idx as u64 + 1);
            let mut offset = space.identity();
            let mut sum = Complex64::ZERO;
            let mut sumsq = 0.0;
            for _ in 0..count {
                for zj in offset.z.iter_mut() {
                    *zj = Complex64::new(
                        rng.random_range(-2.0 * r_hi..2.0 * r_hi),
                        rng.random_range(-2.0 * r_hi..2.0 * r_hi),
                    );
                }
                offset.t = rng.random_range(-r_hi * r_hi..r_hi * r_hi);
                let g = space.gauge_boundary(&offset);
                if g >= r_lo && g < r_hi {
                    let p = space.translate_boundary(center, &offset).expect("dims match");
                    let v = f(&p);
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(Error::NonFiniteSample { point: p.coords() });
                    }
                    sum += v;
                    sumsq += v.norm_sqr();
                }
            }
            Ok((sum, sumsq, count))
        })
        .collect();

    // streams partition one sample set over the same box: pool the moments
    let mut sum = Complex64::ZERO;
    let mut sumsq = 0.0;
    let mut count = 0u64;
    for r in results {
        let (s, q, c) = r?;
        sum += s;
        sumsq += q;
        count += c;
    }
    if count == 0 {
        return Ok(ComplexEstimate::zero());
    }
    let mean = sum / count as f64;
    let pvar = (sumsq / count as f64 - mean.norm_sqr()).max(0.0);
    Ok(ComplexEstimate {
        value: boxvol * mean,
        stderr: boxvol * (pvar / count as f64).sqrt(),
    })
}

/// Improper integral `∫_{ℍₙ} f dH` by a doubling-window schedule: core ball
/// `B(center, r0)` plus dyadic shells, stopped when the last shell
/// contributes less than `rel_tol` of the running total (Cauchy criterion).
/// `budget.samples` is spent per window.
pub fn integrate_boundary_improper<F>(
    space: &Space,
    f: F,
    center: &HPoint,
    r0: f64,
    budget: &Budget,
    rel_tol: f64,
    max_shells: usize,
) -> Result<ComplexEstimate>
where
    F: Fn(&HPoint) -> Complex64 + Sync,
{
    let mut total = integrate_boundary_complex(
        space,
        &f,
        &Window::Ball { center: center.clone(), r: r0 },
        budget,
    )?;
    for k in 0..max_shells {
        let w = Window::Shell {
            center: center.clone(),
            r_lo: r0 * 2f64.powi(k as i32),
            r_hi: r0 * 2f64.powi(k as i32 + 1),
        };
        let b = Budget { seed: budget.seed.wrapping_add(k as u64 + 1), ..*budget };
        let e = integrate_boundary_complex(space, &f, &w, &b)?;
        total = total.add(&e);
        if k >= 2 && e.value.norm() <= rel_tol * total.value.norm().max(1e-300) {
            return Ok(total);
        }
    }
    Err(Error::SolverDidNotConverge(format!(
        "boundary window schedule did not satisfy the Cauchy criterion after {max_shells} shells"
    )))
}

/// Window layout for improper integrals over the domain ℍₙ×(0,∞).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DomainSchedule {
    /// dyadic gauge shells beyond the core ball
    pub shells: usize,
    /// dyadic height layers below h0
    pub layers_down: usize,
    /// dyadic height layers above h0
    pub layers_up: usize,
}

impl Default for DomainSchedule {
    fn default() -> Self {
        Self { shells: 14, layers_down: 18, layers_up: 16 }
    }
}

/// Estimate `∫_0^∞ ∫_{ℍₙ} g([w,s], h) · h^{a−1} dH_{2n+1} dh` with a > 0.
///
/// Boundary directions use the core-plus-shells layout around `center` at
/// scale `r0`; heights use dyadic layers around `h0`. The h→0 layer is
/// integrated with the substitution h = h_b v^{1/a}, which removes the
/// h^{a−1} singularity exactly; the total budget is split evenly over the
/// (shell × layer) strata.
pub fn integrate_domain_improper<G>(
    space: &Space,
    g: G,
    center: &HPoint,
    r0: f64,
    h0: f64,
    a: f64,
    schedule: &DomainSchedule,
    budget: &Budget,
) -> Result<Estimate>
where
    G: Fn(&HPoint, f64) -> f64 + Sync,
{
    assert!(a > 0.0, "height exponent must be positive");
    let n = space.n();
    // height cells: (lo, hi, substituted?) with the bottom stub last
    let mut hcells: Vec<(f64, f64, bool)> = Vec::new();
    for j in 0..schedule.layers_down {
        hcells.push((h0 * 2f64.powi(-(j as i32) - 1), h0 * 2f64.powi(-(j as i32)), false));
    }
    for i in 0..schedule.layers_up {
        hcells.push((h0 * 2f64.powi(i as i32), h0 * 2f64.powi(i as i32 + 1), false));
    }
    let hbot = h0 * 2f64.powi(-(schedule.layers_down as i32));
    hcells.push((0.0, hbot, true));

    let nshell = schedule.shells + 1;
    let ncells = nshell * hcells.len();
    let per_cell = (budget.samples / ncells as u64).max(16);

    let results: Vec<Result<(f64, f64)>> = (0..ncells)
        .into_par_iter()
        .map(|idx| {
            let k = idx % nshell;
            let (hlo, hhi, substituted) = hcells[idx / nshell];
            let (rlo, rhi) = if k == 0 {
                (0.0, r0)
            } else {
                (r0 * 2f64.powi(k as i32 - 1), r0 * 2f64.powi(k as i32))
            };
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(idx as u64 + 1);
            let boxvol = (4.0 * rhi).powi(2 * n as i32) * 2.0 * rhi * rhi
                * if substituted { 1.0 } else { hhi - hlo };
            let mut offset = space.identity();
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in 0..per_cell {
                for zj in offset.z.iter_mut() {
                    *zj = Complex64::new(
                        rng.random_range(-2.0 * rhi..2.0 * rhi),
                        rng.random_range(-2.0 * rhi..2.0 * rhi),
                    );
                }
                offset.t = rng.random_range(-rhi * rhi..rhi * rhi);
                let gsh = space.gauge_boundary(&offset);
                if gsh < rlo || gsh >= rhi {
                    continue;
                }
                let p = space.translate_boundary(center, &offset).expect("dims match");
                let v = if substituted {
                    let vu: f64 = rng.random::<f64>();
                    let h = hbot * vu.powf(1.0 / a);
                    // jac * h^{a-1} = hbot^a / a, constant in v
                    g(&p, h) * hbot.powf(a) / a
                } else {
                    let h = rng.random_range(hlo..hhi);
                    g(&p, h) * h.powf(a - 1.0)
                };
                if !v.is_finite() {
                    let mut pt = p.coords();
                    pt.push(hlo);
                    return Err(Error::NonFiniteSample { point: pt });
                }
                sum += v;
                sumsq += v * v;
            }
            let mean = sum / per_cell as f64;
            let pvar = (sumsq / per_cell as f64 - mean * mean).max(0.0);
            Ok((boxvol * mean, boxvol * boxvol * pvar / per_cell as f64))
        })
        .collect();

    let mut value = 0.0;
    let mut var = 0.0;
    for r in results {
        let (v, s2) = r?;
        value += v;
        var += s2;
    }
    Ok(Estimate { value, stderr: var.sqrt() })
}

/// Deterministic layered sample of an admissible region Γ_γ(ω): geometric
/// height layers h_k = h_max·2^{−k} with a fixed per-layer count of points
/// drawn inside the slice `d([z,t,h_k],ω) < sqrt(2γh_k)`.
pub fn admissible_region_samples(
    space: &Space,
    omega: &HPoint,
    gamma: f64,
    h_max: f64,
    layers: usize,
    per_layer: usize,
    seed: u64,
) -> Vec<UPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(layers * per_layer);
    for k in 0..layers {
        let h = h_max * 2f64.powi(-(k as i32));
        // slice bounds: |u| < 2 sqrt((2γ−1)h), |τ| < 2γh
        let rz = 2.0 * ((2.0 * gamma - 1.0) * h).max(0.0).sqrt();
        let rt = 2.0 * gamma * h;
        let mut got = 0usize;
        let mut tries = 0usize;
        let mut offset = space.identity();
        while got < per_layer && tries < per_layer * 100 {
            tries += 1;
            for zj in offset.z.iter_mut() {
                *zj = Complex64::new(rng.random_range(-rz..rz), rng.random_range(-rz..rz));
            }
            offset.t = rng.random_range(-rt..rt);
            let base = space.translate_boundary(omega, &offset).expect("dims match");
            let u = UPoint { base, h };
            let d = space
                .dist(&u, &UPoint::boundary(omega.clone()))
                .expect("dims match");
            if d < (2.0 * gamma * h).sqrt() {
                out.push(u);
                got += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_over_unit_box_is_exact() {
        let b = BoxDomain::new(vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]);
        let e = integrate_box(|_| 1.0, &b, &Budget::new(10_000, 1)).unwrap();
        assert_eq!(e.value, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn zero_function_is_zero() {
        let space = Space::new(1);
        let w = Window::Ball { center: space.identity(), r: 2.0 };
        let e = integrate_boundary(&space, |_| 0.0, &w, &Budget::new(5_000, 3)).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn indicator_of_unit_ball_recovers_cn() {
        let space = Space::new(1);
        let origin = space.identity();
        let b = BoxDomain::new(vec![-2.0, -2.0, -1.0], vec![2.0, 2.0, 1.0]);
        let e = integrate_box(
            |x| {
                let p = HPoint::from_coords(x);
                if space.dist_boundary(&p, &origin).unwrap() < 1.0 { 1.0 } else { 0.0 }
            },
            &b,
            &Budget::new(400_000, 7),
        )
        .unwrap();
        let cn = space.ball_volume_exact();
        assert!((e.value - cn).abs() < 4.0 * e.stderr, "{} vs {}", e.value, cn);
    }

    #[test]
    fn linearity_with_shared_seed() {
        // exactly representable values keep the identity bit-exact
        let b = BoxDomain::new(vec![0.0], vec![1.0]);
        let budget = Budget::new(4_096, 5);
        let f = |x: &[f64]| if x[0] < 0.5 { 2.0 } else { 4.0 };
        let g = |x: &[f64]| if x[0] < 0.25 { 0.5 } else { 1.0 };
        let ef = integrate_box(f, &b, &budget).unwrap();
        let eg = integrate_box(g, &b, &budget).unwrap();
        let efg = integrate_box(|x| f(x) + g(x), &b, &budget).unwrap();
        assert_eq!(efg.value, ef.value + eg.value);
    }

    #[test]
    fn determinism_same_seed() {
        let space = Space::new(1);
        let w = Window::Ball { center: space.identity(), r: 1.5 };
        let f = |p: &HPoint| (-space.gauge_boundary(p)).exp();
        let a = integrate_boundary(&space, f, &w, &Budget::new(50_000, 42)).unwrap();
        let b = integrate_boundary(&space, f, &w, &Budget::new(50_000, 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_finite_sample_reports_point() {
        let b = BoxDomain::new(vec![0.0], vec![1.0]);
        let err = integrate_box(|x| 1.0 / (x[0] - x[0]), &b, &Budget::new(100, 1)).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSample { .. }));
    }

    #[test]
    fn stderr_scales_like_inverse_sqrt() {
        let b = BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]);
        let f = |x: &[f64]| (x[0] * 7.0).sin() + x[1] * x[1];
        let mut ratios = Vec::new();
        for seed in 0..10 {
            let e1 = integrate_box(f, &b, &Budget::new(20_000, seed)).unwrap();
            let e2 = integrate_box(f, &b, &Budget::new(40_000, seed + 100)).unwrap();
            ratios.push(e2.stderr / e1.stderr);
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let target = 1.0 / 2f64.sqrt();
        assert!((mean - target).abs() < 0.1, "mean ratio {mean} vs {target}");
    }

    #[test]
    fn sample_ball_properties() {
        let space = Space::new(1);
        let x = HPoint::new(vec![Complex64::new(1.0, -0.5)], 0.7);
        let pts = sample_ball(&space, &x, 2.0, 4000, 11);
        assert_eq!(pts.len(), 4000);
        for p in &pts {
            assert!(space.dist_boundary(&x, p).unwrap() < 2.0);
        }
        // sub-ball volume fraction (r/2)^{Q} = 2^{-4} at n=1, within 3 sigma
        let inside = pts
            .iter()
            .filter(|p| space.dist_boundary(&x, p).unwrap() < 1.0)
            .count() as f64;
        let frac = inside / 4000.0;
        let p0 = 2f64.powi(-4);
        let sigma = (p0 * (1.0 - p0) / 4000.0).sqrt();
        assert!((frac - p0).abs() < 3.0 * sigma, "frac {frac}");
        // translation equivariance with shared seed is exact
        let at_origin = sample_ball(&space, &space.identity(), 2.0, 64, 11);
        let translated = sample_ball(&space, &x, 2.0, 64, 11);
        for (a, b) in at_origin.iter().zip(&translated) {
            let expect = space.translate_boundary(&x, a).unwrap();
            assert!((expect.t - b.t).abs() < 1e-14);
            assert!((expect.z[0] - b.z[0]).norm() < 1e-14);
        }
    }

    #[test]
    fn improper_integral_matches_radial_oracle() {
        // f = (1 + d(0,p)^4)^{-2} integrates to exactly c_1 over H_1:
        // the volume law gives \int f dH = 4 c_1 \int r^3 (1+r^4)^{-2} dr = c_1
        let space = Space::new(1);
        let origin = space.identity();
        let f = |p: &HPoint| {
            let d = space.dist_boundary(p, &origin).unwrap();
            Complex64::new((1.0 + d.powi(4)).powi(-2), 0.0)
        };
        let e = integrate_boundary_improper(&space, f, &origin, 1.0, &Budget::new(80_000, 9), 1e-3, 24)
            .unwrap();
        let exact = space.ball_volume_exact();
        assert!(
            (e.value.re - exact).abs() < (4.0 * e.stderr).max(0.02 * exact),
            "{} vs {}",
            e.value.re,
            exact
        );
    }
}
