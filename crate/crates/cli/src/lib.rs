//! Batch front end: read a system description, run one check, report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod report;
pub mod spec;

use thiserror::Error;

/// Problems with the input file, reported with a location.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid input at {location}: {message}")]
    Validation { location: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl InputError {
    pub fn parse(location: impl Into<String>, e: impl std::fmt::Display) -> Self {
        InputError::Parse {
            location: location.into(),
            message: e.to_string(),
        }
    }

    pub fn validation(location: impl Into<String>, message: impl Into<String>) -> Self {
        InputError::Validation {
            location: location.into(),
            message: message.into(),
        }
    }
}
