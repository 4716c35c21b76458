//! Riesz potential theory on the Heisenberg group ℍₙ together with the
//! reproducing-kernel machinery of the Hardy–Sobolev spaces H²_α on the
//! Siegel upper half-space, at desk scale.
//!
//! The crate is organized along the pipeline that connects the two sides:
//!
//! * [`geometry`] — group algebra of ℍₙ, the Folland–Kaplan gauge and its
//!   extension to interior points, coordinates between the Siegel domain
//!   and ℍₙ×(0,∞), dilations, and the ball-volume constant.
//! * [`quadrature`] — seeded stratified Monte-Carlo integration over boxes,
//!   gauge balls and shells, with doubling-window drivers for improper
//!   integrals over the boundary and the full domain.
//! * [`kernels`] — closed forms for the Riesz kernel, the Hardy–Sobolev
//!   reproducing kernel K_α (in both coordinate systems), its vertical
//!   derivatives, the Poisson kernel, and admissible regions.
//! * [`potential`] — Riesz potentials, maximal operators, the capacity of
//!   ball unions via a primal/dual pair of convex programs, equilibrium
//!   measures, and the strong capacitary functional.
//! * [`carleson`] — tents, subcapacitary ratios, Gram/mass matrices on the
//!   span of kernel vectors, Carleson-constant lower bounds through a
//!   generalized Hermitian eigenproblem, holomorphic potentials, and the
//!   two directions of the capacitary characterization as experiments.

pub mod carleson;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod linalg;
pub mod potential;
pub mod quadrature;
pub mod schema;

pub use error::{Error, Result};
