// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! CLI error taxonomy mapped onto the stable exit-code contract:
//! 0 success, 1 configuration error, 2 numeric/tolerance error.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration, arguments, or input files → exit code 1.
    Config(String),
    /// Numerical failure or tolerance violation at run time → exit code 2.
    Numeric(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError::Numeric(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Core errors raised while *running* a validated scenario are numeric.
impl From<soliq_core::Error> for CliError {
    fn from(e: soliq_core::Error) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o failure: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
