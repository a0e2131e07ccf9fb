//! Synthetic grid-resource experiments for the discovery pipeline: seeded
//! resource and query generators, precision and matching-time trials, CSV
//! output, and the `drsrd` command-line tool.

pub mod cli;
pub mod experiment;
pub mod generator;
pub mod rng;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] drsrd_core::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
