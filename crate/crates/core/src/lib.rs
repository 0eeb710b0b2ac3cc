//! Fuzzy granular approximation classifier.

pub mod baselines;
pub mod classifier;
pub mod connectives;
pub mod error;
pub mod granular;
pub mod harness;
pub mod relations;
pub mod solver;
pub mod table;

pub use error::{Error, Result};
