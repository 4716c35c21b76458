//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by geometry, kernel and solver operations.
///
/// Kernel singularities are reported as typed errors rather than infinities
/// so that quadrature layers can exclude or correct the offending cells.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n={expected}, got n={actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("point lies outside the closed Siegel domain (rho = {rho})")]
    OutsideDomain { rho: f64 },

    #[error("Cayley map pole: last ball coordinate equals 1")]
    CayleyPole,

    #[error("singular kernel evaluation: coincident boundary arguments")]
    SingularPair,

    #[error("alpha = {alpha} outside the admissible range ({lo}, {hi})")]
    AlphaRange { alpha: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("integrand not finite at sample point {point:?}")]
    NonFiniteSample { point: Vec<f64> },

    #[error("budget too small: {0}")]
    BudgetTooSmall(String),

    #[error("infeasible discretization: no grid node falls inside the target set")]
    EmptyTargetNodes,

    #[error("solver did not converge: {0}")]
    SolverDidNotConverge(String),

    #[error("duplicate kernel centers at index {0}")]
    DuplicateCenters(usize),

    #[error("Gram matrix numerically singular (condition estimate {cond:.3e})")]
    IllConditionedGram { cond: f64 },

    #[error("boundary point where an interior point is required")]
    BoundaryPoint,
}

pub type Result<T> = std::result::Result<T, Error>;
