//! Orchestration: the adaptive loop, the crack growth loop, convergence
//! studies and the slanted-crack table, plus configuration and output.

pub mod config;
pub mod output;
pub mod report;
mod runs;

pub use config::{RunMode, SimulationConfig};
pub use output::{vtk_string, OutputSink, Snapshot};
pub use report::{loglog_slope, RunReport, Termination};
pub use runs::{
    adaptive_solve, convergence_study, propagate, run_adaptive_solve, run_convergence_study, run_propagation, resolved_sifs, run_slanted_crack_table, sifs_with_retry,
    slanted_crack_table, AdaptiveOutcome, Setup,
};

use crate::error::Result;

/// Runs whatever `problem.mode` asks for.
pub fn run(cfg: &SimulationConfig) -> Result<RunReport> {
    match cfg.problem.mode {
        RunMode::Adaptive => run_adaptive_solve(cfg),
        RunMode::Propagate => run_propagation(cfg),
        RunMode::Convergence => run_convergence_study(cfg),
        RunMode::Table => run_slanted_crack_table(cfg),
    }
}
