//! Std companion to `octarec-core`: run configuration, JSON and LaTeX output.

pub mod formats;
pub mod run;

pub use octarec_core as core;
pub use run::{compare, run, Dump, Engine, Format, Outcome, RunConfig, Target};
