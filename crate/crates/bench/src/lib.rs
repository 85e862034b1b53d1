//! Presets, experiments and reports around the bootstrapping library: the
//! machinery behind the `mmpmboot` command.

pub mod error;
pub mod experiment;
pub mod explore;
pub mod keysize;
pub mod presets;
pub mod stats;

pub use error::{BenchError, Result};
