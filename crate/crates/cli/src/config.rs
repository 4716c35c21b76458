//! Experiment configuration: a JSON file with a schema version, global
//! numerics (n, alpha, seed, budgets, grids) and per-subcommand knobs.
//! Every field has a desk-scale default (n = 1, α = 0.75).

use serde::{Deserialize, Serialize};

use hncap_core::potential::{GridSpec, SolverOptions};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    /// generic Monte-Carlo budget knob (samples per window/criterion)
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    /// alphas for the kernel–Riesz sweep
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    /// apertures for admissible-region experiments
    #[serde(default = "default_gammas")]
    pub gammas: Vec<f64>,
    /// gauge distances for the convolution-identity sweep
    #[serde(default = "default_distances")]
    pub distances: Vec<f64>,
    /// radius scalings for the main-theorem experiment
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
    /// number of random cases in sampled experiments
    #[serde(default = "default_cases")]
    pub cases: usize,
    /// strong-capacitary level-schedule size
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// ball family for capacity runs; default is the unit ball at the origin
    #[serde(default)]
    pub balls: Option<hncap_core::schema::BallFamilyJson>,
    /// margin factors for the capacity-vs-margin table
    #[serde(default = "default_margins")]
    pub margin_factors: Vec<f64>,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}
fn default_n() -> usize {
    1
}
fn default_alpha() -> f64 {
    0.75
}
fn default_samples() -> u64 {
    200_000
}
fn default_alphas() -> Vec<f64> {
    vec![0.6, 0.75, 0.9]
}
fn default_gammas() -> Vec<f64> {
    vec![2.0, 4.0]
}
fn default_distances() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 4.0]
}
fn default_scales() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}
fn default_cases() -> usize {
    5
}
fn default_levels() -> usize {
    16
}
fn default_margins() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridConfig {
    pub nodes_per_axis: usize,
    pub margin_factor: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { nodes_per_axis: 20, margin_factor: 2.0 }
    }
}

impl GridConfig {
    pub fn to_spec(self) -> GridSpec {
        GridSpec {
            nodes_per_axis: self.nodes_per_axis,
            margin_factor: self.margin_factor,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig {
    pub outer: usize,
    pub inner: usize,
    pub dual_iters: usize,
    pub tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolverOptions::default();
        Self { outer: o.outer, inner: o.inner, dual_iters: o.dual_iters, tol: o.tol }
    }
}

impl SolverConfig {
    pub fn to_options(self) -> SolverOptions {
        SolverOptions {
            outer: self.outer,
            inner: self.inner,
            dual_iters: self.dual_iters,
            tol: self.tol,
        }
    }
}
