//! Command-line front end for the moment-system library: configuration
//! handling and the four experiment drivers, each writing CSV files.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;

pub use config::{parse_config, Mode, RunConfig};
pub use run::run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation; the message is meant for the user as is.
    #[error("{0}")]
    Usage(String),

    /// `--help` or `--version` was requested.
    #[error("{0}")]
    Info(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] hme_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Core(_) => 1,
        }
    }
}
