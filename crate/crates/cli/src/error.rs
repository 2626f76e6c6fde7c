// SPDX-License-Identifier: Apache-2.0
use ergmk::Error as CoreError;
use thiserror::Error;

/// Failures, each tied to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Config(_) => 2,
            CliError::VerifyFailed(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::EnumerationCap { .. } => CliError::Cap(msg),
            CoreError::InvalidOrder(_)
            | CoreError::VertexOutOfRange { .. }
            | CoreError::SelfLoop(_)
            | CoreError::IncompatibleGraph { .. }
            | CoreError::RequiresDirected(_)
            | CoreError::EdgeList { .. }
            | CoreError::CovariateDimension { .. }
            | CoreError::ThetaLength { .. }
            | CoreError::NonFinite(_)
            | CoreError::MissingParameter { .. }
            | CoreError::UnexpectedParameter { .. }
            | CoreError::SimConfig(_)
            | CoreError::SamplerConfig(_)
            | CoreError::CfpParams(_) => CliError::Config(msg),
            _ => CliError::Runtime(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
