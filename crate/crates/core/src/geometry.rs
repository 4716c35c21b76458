//! Group algebra of the Heisenberg group ℍₙ = ℂⁿ×ℝ, the Folland–Kaplan
//! gauge and its extension to the interior, and the coordinate maps between
//! the Siegel upper half-space
//!
//! ```text
//!     U = { ζ ∈ ℂ^{n+1} : Im ζ_{n+1} > ¼|ζ'|² }
//! ```
//!
//! and the foliated model ℍₙ×(0,∞).
//!
//! All operations are pure functions of their arguments and validate the
//! dimension against a [`Space`] context. Complex vectors are stored as
//! `Vec<Complex64>`, i.e. interleaved `(re, im)` pairs in one flat
//! allocation; this layout is relied on by the JSON schema and the grid
//! code.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{Budget, Estimate};

/// A point `[z, t]` of the Heisenberg group ℍₙ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub z: Vec<Complex64>,
    pub t: f64,
}

impl HPoint {
    pub fn new(z: Vec<Complex64>, t: f64) -> Self {
        Self { z, t }
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// Flat real coordinates `(Re z_1, Im z_1, …, Re z_n, Im z_n, t)`.
    pub fn coords(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.z.len() + 1);
        for zj in &self.z {
            v.push(zj.re);
            v.push(zj.im);
        }
        v.push(self.t);
        v
    }

    pub fn from_coords(c: &[f64]) -> Self {
        let n = (c.len() - 1) / 2;
        let z = (0..n).map(|j| Complex64::new(c[2 * j], c[2 * j + 1])).collect();
        Self { z, t: c[2 * n] }
    }
}

/// A point `[z, t, h]` of the closed foliated domain ℍₙ×[0,∞).
///
/// `h > 0` is an interior point of the Siegel domain, `h = 0` a boundary
/// point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UPoint {
    pub base: HPoint,
    pub h: f64,
}

impl UPoint {
    pub fn new(base: HPoint, h: f64) -> Self {
        Self { base, h }
    }

    pub fn boundary(base: HPoint) -> Self {
        Self { base, h: 0.0 }
    }

    pub fn is_interior(&self) -> bool {
        self.h > 0.0
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }
}

/// A point of the closed Siegel domain in ambient ℂ^{n+1} coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiegelPoint {
    pub zeta: Vec<Complex64>,
}

impl SiegelPoint {
    pub fn new(zeta: Vec<Complex64>) -> Self {
        Self { zeta }
    }

    /// Dimension n of the underlying Heisenberg group (ambient dim − 1).
    pub fn dim(&self) -> usize {
        self.zeta.len() - 1
    }

    pub fn horizontal(&self) -> &[Complex64] {
        &self.zeta[..self.zeta.len() - 1]
    }

    pub fn last(&self) -> Complex64 {
        self.zeta[self.zeta.len() - 1]
    }
}

/// A gauge ball `B(center, r)` on ℍₙ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: HPoint,
    pub r: f64,
}

/// A finite family of gauge balls; the unions appearing in capacity and
/// tent computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallFamily {
    pub balls: Vec<Ball>,
}

impl BallFamily {
    pub fn new(balls: Vec<Ball>) -> Self {
        Self { balls }
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn max_radius(&self) -> f64 {
        self.balls.iter().map(|b| b.r).fold(0.0, f64::max)
    }

    /// Check pairwise disjointness: `d(cᵢ,cⱼ) > rᵢ + rⱼ` for all i ≠ j.
    pub fn is_disjoint(&self, space: &Space) -> Result<bool> {
        for i in 0..self.balls.len() {
            for j in i + 1..self.balls.len() {
                let d = space.dist_boundary(&self.balls[i].center, &self.balls[j].center)?;
                if d <= self.balls[i].r + self.balls[j].r {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Dilate every ball: centers by `δ_r`, radii by `r`.
    pub fn dilate(&self, space: &Space, r: f64) -> Self {
        let balls = self
            .balls
            .iter()
            .map(|b| Ball {
                center: space.dilate_boundary(r, &b.center),
                r: r * b.r,
            })
            .collect();
        Self { balls }
    }

    /// Move every ball by the left translation L_g (centers map to c·g).
    pub fn translate(&self, space: &Space, g: &HPoint) -> Result<Self> {
        let balls = self
            .balls
            .iter()
            .map(|b| {
                Ok(Ball {
                    center: space.translate_boundary(g, &b.center)?,
                    r: b.r,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { balls })
    }
}

/// Dimension context. All geometric operations validate their arguments
/// against `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    n: usize,
}

impl Space {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Heisenberg dimension must be at least 1");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Homogeneous dimension Q = 2n+2.
    pub fn homogeneous_dim(&self) -> f64 {
        (2 * self.n + 2) as f64
    }

    pub fn identity(&self) -> HPoint {
        HPoint::new(vec![Complex64::ZERO; self.n], 0.0)
    }

    pub fn origin(&self) -> UPoint {
        UPoint::boundary(self.identity())
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: d });
        }
        Ok(())
    }

    /// Group law `[z,t]·[w,s] = [z+w, t+s − ½ Im(z·w̄)]`.
    pub fn group_mul(&self, p: &HPoint, q: &HPoint) -> Result<HPoint> {
        self.check_dim(p.dim())?;
        self.check_dim(q.dim())?;
        let z: Vec<Complex64> = p.z.iter().zip(&q.z).map(|(a, b)| a + b).collect();
        let twist: f64 = p.z.iter().zip(&q.z).map(|(a, b)| (a * b.conj()).im).sum();
        Ok(HPoint::new(z, p.t + q.t - 0.5 * twist))
    }

    /// Group inverse `[z,t]⁻¹ = [−z,−t]`.
    pub fn group_inv(&self, p: &HPoint) -> HPoint {
        HPoint::new(p.z.iter().map(|a| -a).collect(), -p.t)
    }

    /// Boundary trace of the left translation L_g: under the identification
    /// of ℍₙ with ∂U through its action on the origin, L_g moves the
    /// boundary point with coordinates `p` to `p·g`. The gauge distance and
    /// ρ are exactly invariant under this action.
    pub fn translate_boundary(&self, g: &HPoint, p: &HPoint) -> Result<HPoint> {
        self.group_mul(p, g)
    }

    /// The action of L_g on foliated points (height is preserved).
    pub fn translate_upoint(&self, g: &HPoint, u: &UPoint) -> Result<UPoint> {
        Ok(UPoint { base: self.translate_boundary(g, &u.base)?, h: u.h })
    }

    /// One-point gauge `d([z,t,h]) = ((1/16)(|z|²+h)² + t²)^{1/4}` on the
    /// closed foliated domain. Restricted to h = 0 this is the
    /// Folland–Kaplan gauge of ℍₙ.
    pub fn gauge(&self, u: &UPoint) -> f64 {
        let zsq: f64 = u.base.z.iter().map(|a| a.norm_sqr()).sum();
        let q = zsq + u.h;
        (q * q / 16.0 + u.base.t * u.base.t).sqrt().sqrt()
    }

    /// Gauge of a boundary point.
    pub fn gauge_boundary(&self, p: &HPoint) -> f64 {
        self.gauge(&UPoint { base: p.clone(), h: 0.0 })
    }

    /// Extended gauge distance
    /// `d([z,t,h],[w,s,k]) = d([ [z,t]·[w,s]⁻¹, 4(h+k) ])`.
    ///
    /// On boundary points (h = k = 0) this is the gauge metric of ℍₙ:
    /// symmetric, satisfying the triangle inequality, and invariant under
    /// the left-translation action p ↦ p·g.
    pub fn dist(&self, p: &UPoint, q: &UPoint) -> Result<f64> {
        let rel = self.group_mul(&p.base, &self.group_inv(&q.base))?;
        Ok(self.gauge(&UPoint { base: rel, h: 4.0 * (p.h + q.h) }))
    }

    /// Gauge metric of ℍₙ, `d([z,t],[w,s]) = d([z,t]·[w,s]⁻¹)`.
    pub fn dist_boundary(&self, p: &HPoint, q: &HPoint) -> Result<f64> {
        self.dist(
            &UPoint { base: p.clone(), h: 0.0 },
            &UPoint { base: q.clone(), h: 0.0 },
        )
    }

    /// Defining function `ρ(ζ) = Im ζ_{n+1} − ¼|ζ'|²` of the Siegel domain.
    pub fn rho(&self, zeta: &SiegelPoint) -> f64 {
        let zsq: f64 = zeta.horizontal().iter().map(|a| a.norm_sqr()).sum();
        zeta.last().im - 0.25 * zsq
    }

    /// Coordinate map Ψ(ζ) = [ζ', Re ζ_{n+1}, ρ(ζ)].
    ///
    /// Errors if ρ(ζ) < 0 beyond roundoff; a tiny negative ρ from upstream
    /// arithmetic is clamped to the boundary.
    pub fn psi(&self, zeta: &SiegelPoint) -> Result<UPoint> {
        self.check_dim(zeta.dim())?;
        let rho = self.rho(zeta);
        let scale = 1.0 + zeta.zeta.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if rho < -1e-12 * scale {
            return Err(Error::OutsideDomain { rho });
        }
        Ok(UPoint {
            base: HPoint::new(zeta.horizontal().to_vec(), zeta.last().re),
            h: rho.max(0.0),
        })
    }

    /// Inverse coordinate map Ψ⁻¹[z,t,h] = (z, t + i(¼|z|² + h)).
    pub fn psi_inv(&self, u: &UPoint) -> Result<SiegelPoint> {
        self.check_dim(u.dim())?;
        let zsq: f64 = u.base.z.iter().map(|a| a.norm_sqr()).sum();
        let mut zeta = u.base.z.clone();
        zeta.push(Complex64::new(u.base.t, 0.25 * zsq + u.h));
        Ok(SiegelPoint::new(zeta))
    }

    /// The affine action of `[z,t] ∈ ℍₙ` on the closed Siegel domain,
    /// `L_{[z,t]}(ζ) = (ζ'+z, ζ_{n+1} + t + (i/2) ζ'·z̄ + (i/4)|z|²)`.
    ///
    /// Preserves ρ and acts simply transitively on the boundary, where it
    /// restricts to p ↦ p·g in group coordinates; consequently the
    /// composition law is L_g ∘ L_{g'} = L_{g'·g}.
    pub fn left_translate(&self, g: &HPoint, zeta: &SiegelPoint) -> Result<SiegelPoint> {
        self.check_dim(g.dim())?;
        self.check_dim(zeta.dim())?;
        let dot: Complex64 = zeta
            .horizontal()
            .iter()
            .zip(&g.z)
            .map(|(zj, gj)| zj * gj.conj())
            .sum();
        let gsq: f64 = g.z.iter().map(|a| a.norm_sqr()).sum();
        let mut out: Vec<Complex64> =
            zeta.horizontal().iter().zip(&g.z).map(|(zj, gj)| zj + gj).collect();
        out.push(
            zeta.last()
                + Complex64::new(g.t, 0.0)
                + Complex64::new(0.0, 0.5) * dot
                + Complex64::new(0.0, 0.25 * gsq),
        );
        Ok(SiegelPoint::new(out))
    }

    /// Cayley map from the unit ball of ℂ^{n+1} onto the closed Siegel
    /// domain: `b ↦ (2b_1/(1−b_{n+1}), …, i(1+b_{n+1})/(1−b_{n+1}))`.
    pub fn cayley(&self, b: &[Complex64]) -> Result<SiegelPoint> {
        self.check_dim(b.len() - 1)?;
        let last = b[b.len() - 1];
        let denom = Complex64::ONE - last;
        if denom.norm() < 1e-14 {
            return Err(Error::CayleyPole);
        }
        let mut zeta: Vec<Complex64> =
            b[..b.len() - 1].iter().map(|bj| 2.0 * bj / denom).collect();
        zeta.push(Complex64::i() * (Complex64::ONE + last) / denom);
        Ok(SiegelPoint::new(zeta))
    }

    /// Heisenberg dilation `δ_r[z,t,h] = [rz, r²t, r²h]`; the gauge is
    /// homogeneous of degree one under it.
    pub fn dilate(&self, r: f64, u: &UPoint) -> UPoint {
        assert!(r > 0.0, "dilation factor must be positive");
        UPoint {
            base: self.dilate_boundary(r, &u.base),
            h: r * r * u.h,
        }
    }

    pub fn dilate_boundary(&self, r: f64, p: &HPoint) -> HPoint {
        HPoint::new(p.z.iter().map(|a| a * r).collect(), r * r * p.t)
    }

    /// Bounding box of the gauge ball `B(c, r)` in flat coordinates:
    /// `|z_j − c_j| ≤ 2r` per complex axis and the t-extent `r² + r·|c_z|`
    /// (the twist term of the group law shears t by at most `r|c_z|`).
    pub fn ball_bounding_box(&self, c: &HPoint, r: f64) -> (Vec<f64>, Vec<f64>) {
        let mut lo = Vec::with_capacity(2 * self.n + 1);
        let mut hi = Vec::with_capacity(2 * self.n + 1);
        for zj in &c.z {
            lo.push(zj.re - 2.0 * r);
            hi.push(zj.re + 2.0 * r);
            lo.push(zj.im - 2.0 * r);
            hi.push(zj.im + 2.0 * r);
        }
        let znorm = c.z.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let text = r * r + r * znorm;
        lo.push(c.t - text);
        hi.push(c.t + text);
        (lo, hi)
    }

    /// Exact ball-volume constant: `H_{2n+1}(B(x,r)) = c_n r^{2n+2}` with
    ///
    /// `c_n = 2^{2n+1} · 2πⁿ/Γ(n) · ¼ B(n/2, 3/2)`
    ///
    /// obtained by integrating the gauge level set in cylindrical
    /// coordinates (c_1 = 2π²). Cross-validated against the Monte-Carlo
    /// estimate in the test suite.
    pub fn ball_volume_exact(&self) -> f64 {
        let n = self.n as f64;
        let beta = libm::tgamma(n / 2.0) * libm::tgamma(1.5) / libm::tgamma(n / 2.0 + 1.5);
        2f64.powi(2 * self.n as i32 + 1) * 2.0 * std::f64::consts::PI.powi(self.n as i32)
            / libm::tgamma(n)
            * 0.25
            * beta
    }

    /// Monte-Carlo estimate of the ball-volume constant c_n by rejection
    /// sampling over the bounding box `|z| ≤ 2, |t| ≤ 1` of `B(0,1)`.
    pub fn ball_volume_constant(&self, budget: &Budget) -> Result<Estimate> {
        if budget.samples < 100 {
            return Err(Error::BudgetTooSmall(format!(
                "{} samples cannot resolve the ball volume",
                budget.samples
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        let mut hits = 0u64;
        let origin = self.identity();
        let mut p = self.identity();
        for _ in 0..budget.samples {
            for zj in p.z.iter_mut() {
                *zj = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            }
            p.t = rng.random_range(-1.0..1.0);
            if self.dist_boundary(&p, &origin)? < 1.0 {
                hits += 1;
            }
        }
        let boxvol = 4f64.powi(self.n as i32 * 2) * 2.0;
        let frac = hits as f64 / budget.samples as f64;
        let stderr = boxvol * (frac * (1.0 - frac) / budget.samples as f64).sqrt();
        Ok(Estimate { value: boxvol * frac, stderr })
    }
}
