//! One module per experiment family; `run` dispatches a subcommand name.

pub mod capacity;
pub mod carleson;
pub mod geometry;
pub mod kernels;
pub mod norms;
pub mod potential;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hncap_core::geometry::{Ball, BallFamily, HPoint, Space, UPoint};
use hncap_core::Result;

use crate::config::ExperimentConfig;
use crate::report::Report;

pub fn run(subcommand: &str, config: &ExperimentConfig) -> Result<Report> {
    match subcommand {
        "verify-geometry" => geometry::verify_geometry(config),
        "verify-kernels" => kernels::verify_kernels(config),
        "norm-identity" => norms::norm_identity(config),
        "inner-product" => norms::inner_product(config),
        "conv-identity" => potential::conv_identity(config),
        "a1" => potential::a1(config),
        "maximal" => potential::maximal(config),
        "capacity" => capacity::capacity(config),
        "strong-cap" => capacity::strong_cap(config),
        "subcap" => carleson::subcap(config),
        "carleson" => carleson::carleson(config),
        "main-theorem" => carleson::main_theorem(config),
        other => Err(hncap_core::Error::InvalidParam(format!(
            "unknown subcommand `{other}`"
        ))),
    }
}

pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn random_hpoint(space: &Space, rng: &mut impl Rng, scale: f64) -> HPoint {
    let z = (0..space.n())
        .map(|_| Complex64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)))
        .collect();
    HPoint::new(z, rng.random_range(-scale * scale..scale * scale))
}

pub(crate) fn random_upoint(space: &Space, rng: &mut impl Rng, scale: f64) -> UPoint {
    UPoint::new(
        random_hpoint(space, rng, scale),
        rng.random_range(0.05 * scale * scale..scale * scale),
    )
}

/// Default target set: the unit ball at the origin, unless the config
/// carries an explicit family.
pub(crate) fn config_family(space: &Space, config: &ExperimentConfig) -> Result<BallFamily> {
    match &config.balls {
        Some(json) => json.into_family(),
        None => Ok(BallFamily::new(vec![Ball { center: space.identity(), r: 1.0 }])),
    }
}
