//! `g2lab`: config handling, verification suites and artifact writers behind the
//! command-line tool.

pub mod checks;
pub mod commands;
pub mod config;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use commands::Plan;
pub use config::{Metric, RunConfig};

pub const SUCCESS: i32 = 0;
pub const CHECK_FAILURE: i32 = 1;
pub const USAGE: i32 = 2;
pub const NON_CONVERGENCE: i32 = 3;

pub const COMMANDS: &[&str] = &["verify", "flow", "shoot", "scan", "bubble", "energy", "export"];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => USAGE,
            CliError::Numerical(_) => NON_CONVERGENCE,
        }
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub exit_code: i32,
    pub out_dir: PathBuf,
    /// File names inside `out_dir`, manifest last.
    pub artifacts: Vec<String>,
}

/// Validate, run on a pool of `threads` workers, write artifacts and the manifest.
pub fn execute(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let plan = Plan::from_config(cfg)?;
    let threads = cfg.usize("threads")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("key `threads`: {e}")))?;
    let out_dir = cfg.out_dir();
    let mut art = output::Artifacts::create(&out_dir)?;
    let start = Instant::now();
    let exit_code = pool.install(|| plan.run(cfg, &mut art))?;
    let artifacts = art.manifest(cfg, exit_code, start.elapsed().as_secs_f64())?;
    Ok(RunSummary { exit_code, out_dir, artifacts })
}
