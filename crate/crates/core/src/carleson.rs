//! Tents, subcapacitary ratios, the RKHS Gram machinery of H²_α, the
//! fractional-differentiation isometry onto the Hardy space, holomorphic
//! potentials, Carleson-constant lower bounds, and the two directions of
//! the capacitary characterization as desk-scale experiments.
//!
//! Norm conventions. With the kernel normalization of [`crate::kernels`],
//! the boundary pairing of half-order kernels closes exactly:
//!
//! ```text
//!   ⟨K^ζ_β, K^ω_β⟩_{H²} = K_{2β}(ω,ζ),
//! ```
//!
//! so fractional differentiation K^ζ_α ↦ K^ζ_{α/2} is an isometry
//! H²_α → H² on kernel combinations, and the m-independent volume norm
//!
//! ```text
//!   ‖F‖²_{H²_α} = 4^m/Γ(2m−2α) ∫ |ρ^m ∂^m F|² ρ^{−(2α+1)} dH_{2n+2}
//! ```
//!
//! reproduces the Gram value ‖K^ζ_α‖² = K_α(ζ,ζ).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BallFamily, HPoint, Space, UPoint};
use crate::kernels::{hs_kernel, hs_kernel_vertical_derivative, KernelParams};
use crate::linalg::{eig_range, generalized_max_eigenvalue, HermitianMatrix};
use crate::potential::{
    capacity_dual, capacity_primal, AtomicMeasure, CapacityCertificate, GridSpec, SolverOptions,
};
use crate::quadrature::{
    integrate_boundary_improper, integrate_domain_improper, sample_ball, Budget, ComplexEstimate,
    DomainSchedule, Estimate,
};

/// Finite linear combination Σ cⱼ K^{ζⱼ}_α with strictly interior, pairwise
/// distinct centers — the dense test class for all H²_α computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCombo {
    pub params: KernelParams,
    pub terms: Vec<(Complex64, UPoint)>,
}

impl KernelCombo {
    pub fn new(params: KernelParams, terms: Vec<(Complex64, UPoint)>) -> Result<Self> {
        for (i, (_, u)) in terms.iter().enumerate() {
            if !u.is_interior() {
                return Err(Error::BoundaryPoint);
            }
            for (_, v) in terms.iter().take(i) {
                if coincide(u, v) {
                    return Err(Error::DuplicateCenters(i));
                }
            }
        }
        Ok(Self { params, terms })
    }

    pub fn centers(&self) -> Vec<UPoint> {
        self.terms.iter().map(|(_, u)| u.clone()).collect()
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        self.terms.iter().map(|(c, _)| *c).collect()
    }

    /// Pointwise evaluation Σ cⱼ K_α(ω, ζⱼ).
    pub fn eval(&self, omega: &UPoint) -> Result<Complex64> {
        let mut acc = Complex64::ZERO;
        for (c, zj) in &self.terms {
            acc += c * hs_kernel(&self.params, omega, zj)?;
        }
        Ok(acc)
    }
}

fn coincide(a: &UPoint, b: &UPoint) -> bool {
    if (a.h - b.h).abs() > 1e-13 * (1.0 + a.h.abs()) {
        return false;
    }
    if (a.base.t - b.base.t).abs() > 1e-13 * (1.0 + a.base.t.abs()) {
        return false;
    }
    a.base
        .z
        .iter()
        .zip(&b.base.z)
        .all(|(x, y)| (x - y).norm() <= 1e-13 * (1.0 + x.norm()))
}

/// Gram matrix G_{jk} = K_α(ζⱼ, ζₖ) of a center set: Hermitian positive
/// definite for distinct interior centers; `c* G c` is the squared H²_α
/// norm of Σ cⱼ K^{ζⱼ}_α and `(Gc)ⱼ` its value at ζⱼ.
pub fn gram_matrix(p: &KernelParams, centers: &[UPoint]) -> Result<HermitianMatrix> {
    for (i, u) in centers.iter().enumerate() {
        for v in centers.iter().take(i) {
            if coincide(u, v) {
                return Err(Error::DuplicateCenters(i));
            }
        }
    }
    let mut g = HermitianMatrix::zeros(centers.len());
    for j in 0..centers.len() {
        for k in 0..centers.len() {
            g.set(j, k, hs_kernel(p, &centers[j], &centers[k])?);
        }
    }
    Ok(g)
}

/// Mass matrix of μ against the kernel span:
/// M_{jk} = Σ_a m_a conj(K_α(a,ζⱼ)) K_α(a,ζₖ), so that `c* M c = ∫|f|² dμ`
/// for f = Σ cⱼ K^{ζⱼ}_α. Hermitian positive semidefinite by construction.
pub fn mass_matrix(
    p: &KernelParams,
    centers: &[UPoint],
    mu: &AtomicMeasure,
) -> Result<HermitianMatrix> {
    let dim = centers.len();
    let mut m = HermitianMatrix::zeros(dim);
    for (a, mass) in &mu.atoms {
        if *mass == 0.0 {
            continue;
        }
        let row: Vec<Complex64> = centers
            .iter()
            .map(|z| hs_kernel(p, a, z))
            .collect::<Result<_>>()?;
        for j in 0..dim {
            for k in 0..dim {
                let v = m.get(j, k) + mass * row[j].conj() * row[k];
                m.set(j, k, v);
            }
        }
    }
    Ok(m)
}

/// The Gram/mass pair defining the restricted Carleson quotient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HermitianSystem {
    pub g: HermitianMatrix,
    pub m: HermitianMatrix,
}

const COND_LIMIT: f64 = 1e12;

/// Largest generalized eigenvalue λ of M c = λ G c: the maximum of
/// ∫|f|²dμ / ‖f‖²_{H²_α} over the kernel span, a certified lower bound for
/// the Carleson constant, nondecreasing as centers are added.
///
/// When G fails the condition guard, centers are pruned one at a time
/// (dropping whichever index best restores conditioning) before giving up.
pub fn carleson_quotient(system: &HermitianSystem) -> Result<f64> {
    let mut keep: Vec<usize> = (0..system.g.dim).collect();
    loop {
        let g = system.g.submatrix(&keep);
        let m = system.m.submatrix(&keep);
        match generalized_max_eigenvalue(&m, &g, COND_LIMIT) {
            Ok((lam, _)) => return Ok(lam.max(0.0)),
            Err(Error::IllConditionedGram { cond }) => {
                if keep.len() <= 1 {
                    return Err(Error::IllConditionedGram { cond });
                }
                let mut best: Option<(f64, usize)> = None;
                for drop in 0..keep.len() {
                    let mut trial = keep.clone();
                    trial.remove(drop);
                    let (lo, hi) = eig_range(&system.g.submatrix(&trial));
                    let c = if lo > 0.0 { hi / lo } else { f64::INFINITY };
                    if best.map_or(true, |(bc, _)| c < bc) {
                        best = Some((c, drop));
                    }
                }
                keep.remove(best.expect("nonempty").1);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Exact RKHS norm `sqrt(c* G c)` of a kernel combination.
pub fn hs_norm_gram(combo: &KernelCombo) -> Result<f64> {
    if combo.terms.is_empty() {
        return Ok(0.0);
    }
    let g = gram_matrix(&combo.params, &combo.centers())?;
    Ok(g.quadratic_form(&combo.coefficients()).max(0.0).sqrt())
}

/// Fractional differentiation on kernel combinations: Σ cⱼ K^{ζⱼ}_α ↦
/// Σ cⱼ K^{ζⱼ}_{α/2}. An isometry H²_α → H²: the closed-form pairing
/// ⟨K^ζ_{α/2},K^ω_{α/2}⟩_{H²} = K_α(ω,ζ) makes the Gram matrices of input
/// and image literally equal.
pub fn frac_diff(combo: &KernelCombo) -> KernelCombo {
    KernelCombo {
        params: combo.params.half(),
        terms: combo.terms.clone(),
    }
}

/// H² (boundary L²) norm of a combination of order-β kernels via the
/// closed-form pairing ⟨K^ζ_β, K^ω_β⟩_{H²} = K_{2β}(ω,ζ). Requires
/// β < (n+1)/4 so the doubled order stays in range.
pub fn hardy_norm_gram(combo: &KernelCombo) -> Result<f64> {
    if combo.terms.is_empty() {
        return Ok(0.0);
    }
    let doubled = KernelParams::new(combo.params.n, 2.0 * combo.params.alpha)?;
    let g = gram_matrix(&doubled, &combo.centers())?;
    Ok(g.quadratic_form(&combo.coefficients()).max(0.0).sqrt())
}

/// Independent boundary quadrature of the H² norm of a kernel combination:
/// `∫_{∂U} |Σ cⱼ K_β(·,ζⱼ)|² dH` by the doubling-window schedule.
pub fn hardy_norm_boundary_quadrature(
    space: &Space,
    combo: &KernelCombo,
    budget: &Budget,
) -> Result<Estimate> {
    if combo.terms.is_empty() {
        return Ok(Estimate::zero());
    }
    let pairing = h2_pairing_quadrature_raw(space, combo, combo, budget)?;
    Ok(Estimate { value: pairing.value.re.max(0.0), stderr: pairing.stderr })
}

/// Boundary quadrature of ⟨F, G⟩_{H²} = ∫ F·conj(G) dH for two kernel
/// combinations of the same half order.
pub fn h2_pairing_quadrature(
    space: &Space,
    f: &KernelCombo,
    g: &KernelCombo,
    budget: &Budget,
) -> Result<ComplexEstimate> {
    h2_pairing_quadrature_raw(space, f, g, budget)
}

fn h2_pairing_quadrature_raw(
    space: &Space,
    f: &KernelCombo,
    g: &KernelCombo,
    budget: &Budget,
) -> Result<ComplexEstimate> {
    let (center, scale) = combo_frame(space, f);
    let integrand = |b: &HPoint| {
        let u = UPoint::boundary(b.clone());
        let fv = f.eval(&u).expect("interior centers keep the kernel regular");
        let gv = g.eval(&u).expect("interior centers keep the kernel regular");
        fv * gv.conj()
    };
    integrate_boundary_improper(space, integrand, &center, scale, budget, 1e-3, 30)
}

/// Coordinate mean of the centers' bases and a length scale covering the
/// configuration (used to anchor window schedules).
fn combo_frame(space: &Space, combo: &KernelCombo) -> (HPoint, f64) {
    let dim = 2 * space.n() + 1;
    let mut mean = vec![0.0; dim];
    for (_, u) in &combo.terms {
        for (m, c) in mean.iter_mut().zip(u.base.coords()) {
            *m += c / combo.terms.len() as f64;
        }
    }
    let center = HPoint::from_coords(&mean);
    let mut scale: f64 = 1e-3;
    for (_, u) in &combo.terms {
        let d = space
            .dist(u, &UPoint::boundary(center.clone()))
            .expect("dims match");
        scale = scale.max(d).max(u.h.sqrt());
    }
    (center, scale.max(1.0))
}

/// Volume-integral H²_α norm (squared) of a kernel combination:
/// `4^m/Γ(2m−2α) ∫ |ρ^m ∂^m F|² ρ^{−(2α+1)} dH_{2n+2}` in foliated
/// coordinates, independent of the integer m > α.
pub fn hs_norm_volume(
    space: &Space,
    combo: &KernelCombo,
    m: u32,
    budget: &Budget,
) -> Result<Estimate> {
    let alpha = combo.params.alpha;
    if (m as f64) <= alpha {
        return Err(Error::InvalidParam(format!(
            "norm order m = {m} must exceed alpha = {alpha}"
        )));
    }
    if combo.terms.is_empty() {
        return Ok(Estimate::zero());
    }
    let a = 2.0 * m as f64 - 2.0 * alpha;
    let prefactor = 4f64.powi(m as i32) / libm::tgamma(a);
    let (center, scale) = combo_frame(space, combo);
    let h0 = scale * scale;
    let g = |b: &HPoint, h: f64| {
        let omega = UPoint { base: b.clone(), h };
        let mut acc = Complex64::ZERO;
        for (c, zj) in &combo.terms {
            acc += c
                * hs_kernel_vertical_derivative(&combo.params, m, &omega, zj)
                    .expect("interior centers keep the derivative regular");
        }
        acc.norm_sqr()
    };
    let est = integrate_domain_improper(
        space,
        g,
        &center,
        scale,
        h0,
        a,
        &DomainSchedule::default(),
        budget,
    )?;
    Ok(Estimate { value: prefactor * est.value, stderr: prefactor * est.stderr })
}

/// Tent membership test mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TentMode {
    /// `∃ ball (c,r): d(c,[z,t]) + √h ≤ r` — a conservative sufficient
    /// criterion (exact when the gauge realized the sup-distance).
    Metric,
    /// Monte-Carlo containment of B([z,t],√h) in the union, with the
    /// sample count as confidence parameter.
    Sampled { samples: usize, seed: u64 },
}

/// A tent membership query: ball family and interior point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TentQuery {
    pub family: BallFamily,
    pub point: UPoint,
}

/// Does `[z,t,h]` belong to the tent T(E), i.e. is `B([z,t],√h) ⊆ ∪E`?
pub fn tent_contains(
    space: &Space,
    family: &BallFamily,
    u: &UPoint,
    mode: TentMode,
) -> Result<bool> {
    if !u.is_interior() {
        return Err(Error::BoundaryPoint);
    }
    let rad = u.h.sqrt();
    match mode {
        TentMode::Metric => {
            for b in &family.balls {
                if space.dist_boundary(&b.center, &u.base)? + rad <= b.r {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        TentMode::Sampled { samples, seed } => {
            let pts = sample_ball(space, &u.base, rad, samples, seed);
            for p in &pts {
                let mut inside = false;
                for b in &family.balls {
                    if space.dist_boundary(&b.center, p)? < b.r {
                        inside = true;
                        break;
                    }
                }
                if !inside {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// μ(T(E)) for the union tent: sum of masses of atoms inside T(∪E).
pub fn tent_measure(
    space: &Space,
    mu: &AtomicMeasure,
    family: &BallFamily,
    mode: TentMode,
) -> Result<f64> {
    let mut acc = 0.0;
    for (u, m) in &mu.atoms {
        if *m == 0.0 {
            continue;
        }
        if tent_contains(space, family, u, mode)? {
            acc += m;
        }
    }
    Ok(acc)
}

/// The subcapacitary numerator Σᵢ μ(T(Bᵢ)) evaluated per ball.
pub fn tent_measure_per_ball(
    space: &Space,
    mu: &AtomicMeasure,
    family: &BallFamily,
    mode: TentMode,
) -> Result<f64> {
    let mut acc = 0.0;
    for b in &family.balls {
        let single = BallFamily::new(vec![b.clone()]);
        acc += tent_measure(space, mu, &single, mode)?;
    }
    Ok(acc)
}

/// Subcapacitary ratio `Σᵢ μ(T(Bᵢ)) / cap_α(∪E)` for a disjoint family.
pub fn subcap_ratio(
    p: &KernelParams,
    space: &Space,
    mu: &AtomicMeasure,
    family: &BallFamily,
    spec: &GridSpec,
    opts: &SolverOptions,
    mode: TentMode,
) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::InvalidParam("empty ball family has zero capacity".into()));
    }
    if !family.is_disjoint(space)? {
        return Err(Error::InvalidParam("subcapacitary ratio requires disjoint balls".into()));
    }
    let numer = tent_measure_per_ball(space, mu, family, mode)?;
    let cap = capacity_primal(p, space, family, spec, opts)?.value;
    Ok(numer / cap)
}

/// Holomorphic potential of a boundary measure with atoms lifted to height
/// ε: `F(ζ) = Σ mass·K_α(ζ, atom + iε)`. Returns the value and the lifted
/// combination (whose Gram norm bounds ‖F‖).
pub fn holomorphic_potential(
    p: &KernelParams,
    mu: &AtomicMeasure,
    eps: f64,
    zeta: &UPoint,
) -> Result<(Complex64, KernelCombo)> {
    let combo = lift_measure(p, mu, eps)?;
    let value = combo.eval(zeta)?;
    Ok((value, combo))
}

/// Lift a boundary measure to a kernel combination at height ε
/// (coefficients = masses). Zero-mass atoms are dropped; coincident lifted
/// centers are merged by adding their masses.
pub fn lift_measure(p: &KernelParams, mu: &AtomicMeasure, eps: f64) -> Result<KernelCombo> {
    if eps <= 0.0 {
        return Err(Error::InvalidParam(format!("lift height eps = {eps} must be positive")));
    }
    if !mu.is_boundary() {
        return Err(Error::InvalidParam("holomorphic potentials take boundary measures".into()));
    }
    let mut terms: Vec<(Complex64, UPoint)> = Vec::new();
    'outer: for (u, m) in &mu.atoms {
        if *m == 0.0 {
            continue;
        }
        let lifted = UPoint { base: u.base.clone(), h: eps };
        for (c, v) in terms.iter_mut() {
            if coincide(v, &lifted) {
                *c += Complex64::new(*m, 0.0);
                continue 'outer;
            }
        }
        terms.push((Complex64::new(*m, 0.0), lifted));
    }
    KernelCombo::new(*p, terms)
}

/// Report of the necessity experiment: the equilibrium potential of a ball
/// union stays bounded below on the tent, at a scale-free level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NecessityReport {
    /// min over tent samples of Re F_{μ^A}; empty sample set gives None
    pub min_re: Option<f64>,
    pub mean_re: Option<f64>,
    pub samples: usize,
    /// ‖F_{μ^A}‖²_{H²_α} via the lifted Gram
    pub norm_sq: f64,
    pub capacity: f64,
    /// ‖F‖²/cap — bounded by a dimensional constant
    pub norm_ratio: f64,
    pub eps: f64,
}

/// Necessity-side experiment: build the equilibrium measure μ^A of the ball
/// union, form its holomorphic potential, and probe Re F on tent samples.
pub fn necessity_check(
    p: &KernelParams,
    space: &Space,
    family: &BallFamily,
    spec: &GridSpec,
    opts: &SolverOptions,
    tent_samples: usize,
    seed: u64,
) -> Result<NecessityReport> {
    if !p.in_main_theorem_range() {
        return Err(Error::AlphaRange {
            alpha: p.alpha,
            lo: p.n as f64 / 2.0,
            hi: (p.n as f64 + 1.0) / 2.0,
        });
    }
    let cert = capacity_dual(p, space, family, spec, opts)?;
    let scale = family.max_radius();
    let eps = 1e-3 * scale * scale;
    let combo = lift_measure(p, &cert.dual, eps)?;
    let norm = hs_norm_gram(&combo)?;

    // tent samples: random (base, height) pairs inside each ball, kept when
    // the metric tent criterion holds
    let mut kept: Vec<UPoint> = Vec::new();
    let per_ball = (tent_samples / family.balls.len().max(1)).max(1);
    for (i, b) in family.balls.iter().enumerate() {
        let bases = sample_ball(space, &b.center, b.r, per_ball * 4, seed + i as u64);
        let mut rng_h = 0u64;
        for base in bases {
            if kept.len() >= per_ball * (i + 1) {
                break;
            }
            rng_h = rng_h.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let frac = (rng_h >> 11) as f64 / (1u64 << 53) as f64;
            let u = UPoint { base, h: (b.r * b.r) * frac };
            if u.is_interior() && tent_contains(space, family, &u, TentMode::Metric)? {
                kept.push(u);
            }
        }
    }

    let mut min_re: Option<f64> = None;
    let mut sum_re = 0.0;
    for u in &kept {
        let v = combo.eval(u)?.re;
        min_re = Some(min_re.map_or(v, |m: f64| m.min(v)));
        sum_re += v;
    }
    let capacity = cert.value;
    Ok(NecessityReport {
        min_re,
        mean_re: if kept.is_empty() { None } else { Some(sum_re / kept.len() as f64) },
        samples: kept.len(),
        norm_sq: norm * norm,
        capacity,
        norm_ratio: norm * norm / capacity,
        eps,
    })
}

/// Report of the sufficiency experiment: the restricted Carleson constant
/// against the empirical subcapacitary constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SufficiencyReport {
    /// largest generalized eigenvalue over the union of the combos' centers
    pub carleson_lower: f64,
    /// max of subcap_ratio over the ball-family schedule
    pub subcap_constant: f64,
    /// carleson_lower / subcap_constant
    pub ratio: f64,
}

/// Sufficiency-side experiment: compare the eigenvalue pipeline against the
/// subcapacitary pipeline on a shared measure.
pub fn sufficiency_check(
    p: &KernelParams,
    space: &Space,
    mu: &AtomicMeasure,
    combos: &[KernelCombo],
    families: &[BallFamily],
    spec: &GridSpec,
    opts: &SolverOptions,
) -> Result<SufficiencyReport> {
    if !p.in_main_theorem_range() {
        return Err(Error::AlphaRange {
            alpha: p.alpha,
            lo: p.n as f64 / 2.0,
            hi: (p.n as f64 + 1.0) / 2.0,
        });
    }
    if mu.total_mass() == 0.0 {
        return Ok(SufficiencyReport { carleson_lower: 0.0, subcap_constant: 0.0, ratio: 0.0 });
    }
    let mut centers: Vec<UPoint> = Vec::new();
    for combo in combos {
        for (_, u) in &combo.terms {
            if !centers.iter().any(|v| coincide(v, u)) {
                centers.push(u.clone());
            }
        }
    }
    let g = gram_matrix(p, &centers)?;
    let m = mass_matrix(p, &centers, mu)?;
    let carleson_lower = carleson_quotient(&HermitianSystem { g, m })?;

    let mut subcap: f64 = 0.0;
    for fam in families {
        subcap = subcap.max(subcap_ratio(p, space, mu, fam, spec, opts, TentMode::Metric)?);
    }
    Ok(SufficiencyReport {
        carleson_lower,
        subcap_constant: subcap,
        ratio: if subcap > 0.0 { carleson_lower / subcap } else { 0.0 },
    })
}

/// Convenience: dual-route capacity pair (primal and dual certificates).
pub fn capacity_pair(
    p: &KernelParams,
    space: &Space,
    family: &BallFamily,
    spec: &GridSpec,
    opts: &SolverOptions,
) -> Result<(CapacityCertificate, CapacityCertificate)> {
    Ok((
        capacity_primal(p, space, family, spec, opts)?,
        capacity_dual(p, space, family, spec, opts)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;

    fn cpx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params() -> KernelParams {
        KernelParams::new(1, 0.75).unwrap()
    }

    fn centers3() -> Vec<UPoint> {
        vec![
            UPoint::new(HPoint::new(vec![cpx(0.2, -0.1)], 0.3), 0.5),
            UPoint::new(HPoint::new(vec![cpx(-0.6, 0.4)], -0.2), 0.9),
            UPoint::new(HPoint::new(vec![cpx(1.0, 0.8)], 0.1), 0.3),
        ]
    }

    #[test]
    fn combo_validation() {
        let p = params();
        let c = centers3();
        assert!(KernelCombo::new(p, vec![(cpx(1.0, 0.0), c[0].clone()), (cpx(0.0, 1.0), c[0].clone())]).is_err());
        let bd = UPoint::boundary(HPoint::new(vec![cpx(0.0, 0.0)], 0.0));
        assert!(KernelCombo::new(p, vec![(cpx(1.0, 0.0), bd)]).is_err());
    }

    #[test]
    fn gram_matrix_properties() {
        let p = params();
        let c = centers3();
        let g = gram_matrix(&p, &c).unwrap();
        // one center: positive real diagonal
        let g1 = gram_matrix(&p, &c[..1]).unwrap();
        assert!(g1.get(0, 0).re > 0.0 && g1.get(0, 0).im.abs() < 1e-15);
        // Hermitian
        for j in 0..3 {
            for k in 0..3 {
                assert!((g.get(j, k) - g.get(k, j).conj()).norm() < 1e-13);
            }
        }
        // PSD
        let (lo, _) = eig_range(&g);
        assert!(lo > -1e-10);
        // far-separated centers are nearly diagonal (slow ν = 1/2 decay)
        let mut prev = f64::INFINITY;
        for &sep in &[5.0, 50.0, 500.0] {
            let far = vec![
                UPoint::new(HPoint::new(vec![cpx(0.0, 0.0)], 0.0), 0.2),
                UPoint::new(HPoint::new(vec![cpx(sep, 0.0)], 0.0), 0.2),
            ];
            let gf = gram_matrix(&p, &far).unwrap();
            let ratio = gf.get(0, 1).norm() / gf.get(0, 0).norm();
            assert!(ratio < prev);
            prev = ratio;
        }
        assert!(prev < 0.01);
    }

    #[test]
    fn mass_matrix_and_quotient_basics() {
        let p = params();
        let c = centers3();
        let g = gram_matrix(&p, &c).unwrap();
        // zero measure -> zero matrix -> quotient 0
        let m0 = mass_matrix(&p, &c, &AtomicMeasure::empty()).unwrap();
        assert!(m0.data.iter().all(|v| v.norm() == 0.0));
        let q0 = carleson_quotient(&HermitianSystem { g: g.clone(), m: m0 }).unwrap();
        assert!(q0.abs() < 1e-12);
        // M = G -> quotient 1
        let q1 = carleson_quotient(&HermitianSystem { g: g.clone(), m: g.clone() }).unwrap();
        assert!((q1 - 1.0).abs() < 1e-9);
        // single atom -> rank-1 PSD
        let mu = AtomicMeasure::new(vec![(c[0].clone(), 2.0)]).unwrap();
        let m1 = mass_matrix(&p, &c, &mu).unwrap();
        let (lo, hi) = eig_range(&m1);
        assert!(lo > -1e-10 && hi > 0.0);
        // linearity in mu
        let mu2 = AtomicMeasure::new(vec![(c[0].clone(), 4.0)]).unwrap();
        let m2 = mass_matrix(&p, &c, &mu2).unwrap();
        for (a, b) in m1.data.iter().zip(&m2.data) {
            assert!((2.0 * a - b).norm() < 1e-12 * b.norm().max(1e-30));
        }
    }

    #[test]
    fn quotient_monotone_in_span() {
        let p = params();
        let c = centers3();
        let mu = AtomicMeasure::new(vec![
            (c[0].clone(), 0.7),
            (UPoint::new(HPoint::new(vec![cpx(0.5, 0.5)], 0.0), 0.4), 1.3),
        ])
        .unwrap();
        let mut prev = 0.0;
        for k in 1..=3 {
            let g = gram_matrix(&p, &c[..k]).unwrap();
            let m = mass_matrix(&p, &c[..k], &mu).unwrap();
            let q = carleson_quotient(&HermitianSystem { g, m }).unwrap();
            assert!(q >= prev - 1e-10, "k={k}: {q} < {prev}");
            prev = q;
        }
    }

    #[test]
    fn norm_gram_basics() {
        let p = params();
        let c = centers3();
        // single kernel: sqrt(K(z,z))
        let combo = KernelCombo::new(p, vec![(cpx(1.0, 0.0), c[0].clone())]).unwrap();
        let n1 = hs_norm_gram(&combo).unwrap();
        let expect = hs_kernel(&p, &c[0], &c[0]).unwrap().re.sqrt();
        assert!((n1 - expect).abs() < 1e-13);
        // scaling by 2 doubles the norm
        let combo2 = KernelCombo::new(p, vec![(cpx(2.0, 0.0), c[0].clone())]).unwrap();
        assert!((hs_norm_gram(&combo2).unwrap() - 2.0 * n1).abs() < 1e-12);
        // reproducing Cauchy-Schwarz: |f(z)| <= ‖f‖ sqrt(K(z,z))
        let f = KernelCombo::new(
            p,
            vec![(cpx(1.0, -0.5), c[0].clone()), (cpx(-0.3, 0.8), c[1].clone())],
        )
        .unwrap();
        let nf = hs_norm_gram(&f).unwrap();
        let z = &c[2];
        let bound = nf * hs_kernel(&p, z, z).unwrap().re.sqrt();
        assert!(f.eval(z).unwrap().norm() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn frac_diff_is_an_isometry_in_closed_form() {
        let p = params();
        let c = centers3();
        let combo = KernelCombo::new(
            p,
            vec![
                (cpx(1.0, 0.2), c[0].clone()),
                (cpx(-0.4, 0.9), c[1].clone()),
                (cpx(0.3, -0.7), c[2].clone()),
            ],
        )
        .unwrap();
        let image = frac_diff(&combo);
        assert_eq!(image.params.alpha, p.alpha / 2.0);
        let before = hs_norm_gram(&combo).unwrap();
        let after = hardy_norm_gram(&image).unwrap();
        assert!((before - after).abs() <= 1e-12 * before, "{before} vs {after}");
        // zero combo maps to zero combo
        let zero = KernelCombo::new(p, vec![]).unwrap();
        assert_eq!(frac_diff(&zero).terms.len(), 0);
    }

    #[test]
    fn tent_membership() {
        let space = Space::new(1);
        let ball = Ball { center: HPoint::new(vec![cpx(0.0, 0.0)], 0.0), r: 1.0 };
        let fam = BallFamily::new(vec![ball]);
        // directly above the center with sqrt(h) = r/2: inside in both modes
        let u = UPoint::new(HPoint::new(vec![cpx(0.0, 0.0)], 0.0), 0.25);
        assert!(tent_contains(&space, &fam, &u, TentMode::Metric).unwrap());
        assert!(
            tent_contains(&space, &fam, &u, TentMode::Sampled { samples: 500, seed: 1 }).unwrap()
        );
        // sqrt(h) > r: no tent point at that height
        let too_high = UPoint::new(HPoint::new(vec![cpx(0.0, 0.0)], 0.0), 1.5);
        assert!(!tent_contains(&space, &fam, &too_high, TentMode::Metric).unwrap());
        assert!(!tent_contains(
            &space,
            &fam,
            &too_high,
            TentMode::Sampled { samples: 500, seed: 2 }
        )
        .unwrap());
        // boundary point is an error
        let bd = UPoint::boundary(HPoint::new(vec![cpx(0.0, 0.0)], 0.0));
        assert!(tent_contains(&space, &fam, &bd, TentMode::Metric).is_err());
        // nesting: bigger family contains the tent
        let bigger = BallFamily::new(vec![
            fam.balls[0].clone(),
            Ball { center: HPoint::new(vec![cpx(4.0, 0.0)], 0.0), r: 0.5 },
        ]);
        assert!(tent_contains(&space, &bigger, &u, TentMode::Metric).unwrap());
    }

    #[test]
    fn tent_measures_and_disjoint_sum() {
        let space = Space::new(1);
        let b1 = Ball { center: HPoint::new(vec![cpx(-3.0, 0.0)], 0.0), r: 1.0 };
        let b2 = Ball { center: HPoint::new(vec![cpx(3.0, 0.0)], 0.0), r: 1.0 };
        let fam = BallFamily::new(vec![b1.clone(), b2.clone()]);
        assert!(fam.is_disjoint(&space).unwrap());
        let mu = AtomicMeasure::new(vec![
            (UPoint::new(b1.center.clone(), 0.2), 1.0),
            (UPoint::new(b2.center.clone(), 0.2), 2.0),
            (UPoint::new(HPoint::new(vec![cpx(0.0, 0.0)], 0.0), 0.2), 4.0),
        ])
        .unwrap();
        assert_eq!(tent_measure(&space, &AtomicMeasure::empty(), &fam, TentMode::Metric).unwrap(), 0.0);
        let per_ball = tent_measure_per_ball(&space, &mu, &fam, TentMode::Metric).unwrap();
        let union = tent_measure(&space, &mu, &fam, TentMode::Metric).unwrap();
        assert_eq!(per_ball, 3.0);
        assert!(per_ball <= union + 1e-12);
    }

    #[test]
    fn lift_and_holomorphic_potential() {
        let p = params();
        let mu = AtomicMeasure::new(vec![(
            UPoint::boundary(HPoint::new(vec![cpx(0.3, -0.2)], 0.1)),
            2.0,
        )])
        .unwrap();
        let zeta = UPoint::new(HPoint::new(vec![cpx(0.0, 0.0)], 0.0), 1.0);
        let (v, combo) = holomorphic_potential(&p, &mu, 1e-3, &zeta).unwrap();
        let lifted = UPoint { base: mu.atoms[0].0.base.clone(), h: 1e-3 };
        let expect = 2.0 * hs_kernel(&p, &zeta, &lifted).unwrap();
        assert!((v - expect).norm() < 1e-13 * expect.norm());
        assert_eq!(combo.terms.len(), 1);
        assert!(holomorphic_potential(&p, &mu, 0.0, &zeta).is_err());
        // empty measure evaluates to zero
        let (v0, _) = holomorphic_potential(&p, &AtomicMeasure::empty(), 1e-3, &zeta).unwrap();
        assert_eq!(v0, Complex64::ZERO);
    }
}
