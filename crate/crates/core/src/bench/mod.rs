//! Benchmark harness: test problems, data profiles and gain statistics.

pub mod problems;
pub mod profile;
pub mod runner;
mod svg;

pub use problems::{standard_suite, TestProblem};
pub use profile::{
    converged, data_profile, evals_to_converge, DataProfile, FiveNumberSummary, ProfileTable,
};
pub use runner::{run_experiment, ExperimentArtifacts, ExperimentConfig, SolverKind};
