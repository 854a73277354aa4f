//! Hateful-user detection on directed social graphs with inductive GraphSAGE,
//! feature-only baselines, and predictive-equality fairness evaluation.

pub mod cli;
pub mod demography;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod models;
pub mod ndiff;
pub mod rng;
pub mod samplers;
pub mod synth;
pub mod training;

pub use error::{Error, Result};
pub use rng::RngStream;
