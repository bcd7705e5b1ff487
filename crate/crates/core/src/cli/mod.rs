//! Command implementations behind the `kaon-decay` binary.
//!
//! Each command is a pure function of a [`RunConfig`] returning the text it
//! would print, so the binary stays a thin argument parser.

mod commands;
mod config;

use std::path::PathBuf;

use thiserror::Error;

use crate::error::DecayError;

pub use commands::{
    cmd_compare, cmd_constants, cmd_density, cmd_discriminate, cmd_sample, read_events_csv,
    write_sample, ConstantEntry, SampleOutput,
};
pub use config::{normalize_key, Mode, OutputFormat, RunConfig, Units, CONFIG_ENV, KEYS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", describe_config(.line, .key, .message))]
    Config {
        line: Option<usize>,
        key: String,
        message: String,
    },
    #[error(transparent)]
    Decay(#[from] DecayError),
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn describe_config(line: &Option<usize>, key: &str, message: &str) -> String {
    let mut s = String::from("config error");
    if let Some(l) = line {
        s.push_str(&format!(" at line {l}"));
    }
    if !key.is_empty() {
        s.push_str(&format!(", key `{key}`"));
    }
    format!("{s}: {message}")
}

impl CliError {
    pub(crate) fn config(line: Option<usize>, key: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            line,
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for bad input, 3 for numerical failure, 4 for a support mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Decay(e) => match e {
                DecayError::InvalidParameter { .. }
                | DecayError::NegativeTime(_)
                | DecayError::UnsupportedCombination(_)
                | DecayError::IncompatibleModels(_) => 2,
                DecayError::SupportMismatch { .. } => 4,
                DecayError::NotIntegrable { .. }
                | DecayError::NotNormalizable { .. }
                | DecayError::NegativeDensity { .. }
                | DecayError::EnvelopeDegenerate { .. }
                | DecayError::QuadratureNonConvergence { .. }
                | DecayError::TooFewEvents { .. } => 3,
            },
        }
    }
}
