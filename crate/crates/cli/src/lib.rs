//! Library side of the experiment driver; the `hncap` binary is a thin
//! wrapper around [`commands::run`].

pub mod commands;
pub mod config;
pub mod report;
