//! Closed-form kernels.
//!
//! With ν = n+1−2α and the base factor
//!
//! ```text
//!   B(ω,ζ) = (ω_{n+1} − conj(ζ_{n+1}))/(2i) − ¼ ω'·conj(ζ')
//! ```
//!
//! the Hardy–Sobolev reproducing kernel is
//!
//! ```text
//!   K_α(ω,ζ) = Γ(ν) / ((4π)^{n+1} B(ω,ζ)^ν).
//! ```
//!
//! In the foliated coordinates ω = [w,s,k], ζ = [z,t,h] one has B = D/2 with
//!
//! ```text
//!   D = (h+k) + ¼|w−z|² − i(s−t+½Im(w·z̄)),
//! ```
//!
//! so K_α = 2^{−2α} Γ(ν)/(2π)^{n+1} · D^{−ν}. The modulus of D ties every
//! kernel to the extended gauge: |D(ω,ζ)| = d(ω,ζ)², which yields the exact
//! identity |K_{α/2}| = I_α on boundary pairs and the equality of the two
//! admissible-region definitions.
//!
//! Complex powers use the principal branch; Re B > 0 holds on all valid
//! inputs (interior-or-boundary pairs that are not singular), so the branch
//! cut is never crossed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HPoint, SiegelPoint, Space, UPoint};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Order parameter for the kernel family.
///
/// General range 0 < α < (n+1)/2; the capacitary characterization requires
/// the narrower n/2 < α < (n+1)/2 where the Riesz kernel of order 2α still
/// has positive exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub n: usize,
    pub alpha: f64,
}

impl KernelParams {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        let hi = (n as f64 + 1.0) / 2.0;
        if !(alpha > 0.0 && alpha < hi) {
            return Err(Error::AlphaRange { alpha, lo: 0.0, hi });
        }
        Ok(Self { n, alpha })
    }

    /// Require the main-theorem range n/2 < α < (n+1)/2.
    pub fn main_theorem(n: usize, alpha: f64) -> Result<Self> {
        let lo = n as f64 / 2.0;
        let hi = (n as f64 + 1.0) / 2.0;
        if !(alpha > lo && alpha < hi) {
            return Err(Error::AlphaRange { alpha, lo, hi });
        }
        Ok(Self { n, alpha })
    }

    pub fn in_main_theorem_range(&self) -> bool {
        self.alpha > self.n as f64 / 2.0
    }

    /// Exponent ν = n+1−2α of the kernel base.
    pub fn nu(&self) -> f64 {
        self.n as f64 + 1.0 - 2.0 * self.alpha
    }

    /// Kernel of half the order, used by fractional differentiation.
    pub fn half(&self) -> KernelParams {
        KernelParams { n: self.n, alpha: self.alpha / 2.0 }
    }

    /// U-coordinate normalization 2^{−2α} Γ(ν) / (2π)^{n+1}.
    pub fn hs_constant(&self) -> f64 {
        2f64.powf(-2.0 * self.alpha) * libm::tgamma(self.nu())
            / TWO_PI.powi(self.n as i32 + 1)
    }

    /// Riesz normalization Γ(n+1−α) / (2^α (2π)^{n+1}).
    pub fn riesz_constant(&self) -> f64 {
        libm::tgamma(self.n as f64 + 1.0 - self.alpha)
            / (2f64.powf(self.alpha) * TWO_PI.powi(self.n as i32 + 1))
    }
}

/// Kernel base D(ω,ζ) in foliated coordinates; Re D ≥ 0 on valid pairs.
pub fn kernel_base(omega: &UPoint, zeta: &UPoint) -> Complex64 {
    let mut wz = 0.0;
    let mut twist = 0.0;
    for (wj, zj) in omega.base.z.iter().zip(&zeta.base.z) {
        wz += (wj - zj).norm_sqr();
        twist += (wj * zj.conj()).im;
    }
    Complex64::new(
        (omega.h + zeta.h) + 0.25 * wz,
        -(omega.base.t - zeta.base.t + 0.5 * twist),
    )
}

fn check_pair(omega: &UPoint, zeta: &UPoint) -> Result<Complex64> {
    if omega.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch { expected: omega.dim(), actual: zeta.dim() });
    }
    let d = kernel_base(omega, zeta);
    if d.norm() == 0.0 {
        return Err(Error::SingularPair);
    }
    Ok(d)
}

/// Riesz kernel `I_α(x,y) = Γ(n+1−α) / (2^α (2π)^{n+1} d(x,y)^{2n+2−2α})`
/// on ℍₙ. Symmetric and positive; coincident points are a typed error.
pub fn riesz_kernel(p: &KernelParams, space: &Space, x: &HPoint, y: &HPoint) -> Result<f64> {
    let d = space.dist_boundary(x, y)?;
    if d == 0.0 {
        return Err(Error::SingularPair);
    }
    Ok(p.riesz_constant() * d.powf(-(2.0 * (p.n as f64 + 1.0 - p.alpha))))
}

/// Hardy–Sobolev kernel K_α(ω,ζ) in foliated coordinates (the fast path).
pub fn hs_kernel(p: &KernelParams, omega: &UPoint, zeta: &UPoint) -> Result<Complex64> {
    let d = check_pair(omega, zeta)?;
    Ok(p.hs_constant() * d.powf(-p.nu()))
}

/// Hardy–Sobolev kernel evaluated from the ambient ℂ^{n+1} definition,
/// kept as a cross-validation path for [`hs_kernel`].
pub fn hs_kernel_siegel(
    p: &KernelParams,
    omega: &SiegelPoint,
    zeta: &SiegelPoint,
) -> Result<Complex64> {
    let b = siegel_base(omega, zeta)?;
    if b.norm() == 0.0 {
        return Err(Error::SingularPair);
    }
    let c = libm::tgamma(p.nu()) / (4.0 * std::f64::consts::PI).powi(p.n as i32 + 1);
    Ok(c * b.powf(-p.nu()))
}

/// Base factor B(ω,ζ) = (ω_{n+1} − conj(ζ_{n+1}))/(2i) − ¼ ω'·conj(ζ').
pub fn siegel_base(omega: &SiegelPoint, zeta: &SiegelPoint) -> Result<Complex64> {
    if omega.dim() != zeta.dim() {
        return Err(Error::DimensionMismatch { expected: omega.dim(), actual: zeta.dim() });
    }
    let dot: Complex64 = omega
        .horizontal()
        .iter()
        .zip(zeta.horizontal())
        .map(|(wj, zj)| wj * zj.conj())
        .sum();
    Ok((omega.last() - zeta.last().conj()) / Complex64::new(0.0, 2.0) - 0.25 * dot)
}

/// Both sides of the kernel–Riesz identity at a boundary pair:
/// lhs = |K_{α/2}| through the coordinate map, rhs = I_α(x,y).
/// The two agree exactly because |D| = d².
pub fn kernel_gauge_identity(
    p: &KernelParams,
    space: &Space,
    x: &HPoint,
    y: &HPoint,
) -> Result<(f64, f64)> {
    let half = p.half();
    let k = hs_kernel(
        &half,
        &UPoint::boundary(x.clone()),
        &UPoint::boundary(y.clone()),
    )?;
    let r = riesz_kernel(p, space, x, y)?;
    Ok((k.norm(), r))
}

/// m-th vertical derivative ∂^m_{ω_{n+1}} K_α(ω,ζ):
/// the base power picks up the Pochhammer factor (ν)_m, a phase i^m from
/// ∂D/∂ω_{n+1} = −i, and the exponent rises to ν+m.
pub fn hs_kernel_vertical_derivative(
    p: &KernelParams,
    m: u32,
    omega: &UPoint,
    zeta: &UPoint,
) -> Result<Complex64> {
    if m == 0 {
        return hs_kernel(p, omega, zeta);
    }
    let d = check_pair(omega, zeta)?;
    let nu = p.nu();
    let poch = libm::tgamma(nu + m as f64) / libm::tgamma(nu);
    let phase = Complex64::i().powu(m);
    Ok(p.hs_constant() * poch * phase * d.powf(-(nu + m as f64)))
}

/// Poisson kernel of the Siegel domain in foliated coordinates:
/// `P(ζ,ω) = 2^{2n+2} h^{n+1} / d(ζ,ω)^{4(n+1)}` for interior ζ = [z,t,h]
/// and boundary ω (equal to the ambient display ρ(ζ)^{n+1}/|B(ζ,ω)|^{2(n+1)}).
pub fn poisson_kernel(space: &Space, zeta: &UPoint, omega: &HPoint) -> Result<f64> {
    if !zeta.is_interior() {
        return Err(Error::BoundaryPoint);
    }
    let np1 = space.n() as i32 + 1;
    let d = space.dist(zeta, &UPoint::boundary(omega.clone()))?;
    Ok(4f64.powi(np1) * zeta.h.powi(np1) / d.powi(4 * np1))
}

/// Ambient-coordinate Poisson kernel (cross-validation path).
pub fn poisson_kernel_siegel(
    space: &Space,
    zeta: &SiegelPoint,
    omega: &SiegelPoint,
) -> Result<f64> {
    let rho = space.rho(zeta);
    if rho <= 0.0 {
        return Err(Error::BoundaryPoint);
    }
    let b = siegel_base(zeta, omega)?;
    let np1 = space.n() as i32 + 1;
    Ok(rho.powi(np1) / b.norm_sqr().powi(np1))
}

/// Aperture parameter of an admissible (nontangential approach) region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleParams {
    pub gamma: f64,
}

impl AdmissibleParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma <= 1.0 {
            return Err(Error::InvalidParam(format!("aperture gamma = {gamma} must exceed 1")));
        }
        Ok(Self { gamma })
    }
}

/// Membership test for Γ_γ(ω) via the ambient inequality
/// `|B(ζ,ω)| < γ ρ(ζ)`.
pub fn admissible_contains_siegel(
    ap: &AdmissibleParams,
    space: &Space,
    omega: &SiegelPoint,
    zeta: &SiegelPoint,
) -> Result<bool> {
    let rho = space.rho(zeta);
    if rho <= 0.0 {
        return Ok(false);
    }
    let b = siegel_base(zeta, omega)?;
    Ok(b.norm() < ap.gamma * rho)
}

/// Membership test for Γ_γ(ω) via the gauge form
/// `d([z,t,h],[w,s]) < sqrt(2γh)`; agrees with the ambient form.
pub fn admissible_contains_gauge(
    ap: &AdmissibleParams,
    space: &Space,
    omega: &HPoint,
    zeta: &UPoint,
) -> Result<bool> {
    if !zeta.is_interior() {
        return Ok(false);
    }
    let d = space.dist(zeta, &UPoint::boundary(omega.clone()))?;
    Ok(d < (2.0 * ap.gamma * zeta.h).sqrt())
}
