//! Command-line front end: configuration, the analysis pipeline and report
//! writing. `main.rs` only parses flags and dispatches here.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyze;
pub mod commands;
pub mod config;
pub mod error;
pub mod input;
pub mod output;

pub use analyze::{analyze, cmd_analyze, AnalyzeOutput, Report, SCHEMA_VERSION};
pub use commands::{cmd_cwt, cmd_returns, cmd_spectrum, cmd_synth};
pub use config::AnalysisConfig;
pub use error::CliError;

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T, F>(threads: Option<usize>, f: F) -> Result<T, CliError>
where
    T: Send,
    F: FnOnce() -> Result<T, CliError> + Send,
{
    match threads {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::validation(format!("thread pool: {e}")))?
            .install(f),
    }
}
