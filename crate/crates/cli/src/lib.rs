//! Configuration, pipeline, presets and artifact formats around the
//! `diskbvp` solvers.

pub mod config;
pub mod demo;
pub mod pipeline;
pub mod presets;
pub mod report;

pub use config::RunConfig;
pub use demo::{nonuniqueness_demo, DemoReport};
pub use pipeline::{run_pipeline, PipelineArtifacts};
pub use presets::{preset, preset_names};
pub use report::ReportJson;

/// Pipeline failure with its CLI exit code.
#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Config(String),
    #[error("solver did not converge: {0}")]
    Solver(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl PipelineError {
    pub fn config(msg: impl Into<String>) -> Self {
        PipelineError::Config(msg.into())
    }

    /// Core errors surfacing during configuration/assembly are config errors;
    /// iteration-budget failures are solver errors.
    pub fn from_core_config(err: diskbvp::Error) -> Self {
        match err {
            diskbvp::Error::MaxIterationsExceeded { .. } => {
                PipelineError::Solver(err.to_string())
            }
            other => PipelineError::Config(other.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Solver(_) => 3,
            PipelineError::Verification(_) => 4,
            PipelineError::Io(_) => 2,
        }
    }
}
