//! Derivative-free optimization with finite-difference gradients and
//! surrogate acceleration.
//!
//! The crate implements a gradient-descent-style solver that approximates
//! gradients by forward differences ([`solve_base`]) and a variant that
//! reuses the points, values and approximate gradients collected along the
//! way to train a surrogate model, taking cheap extra descent steps on the
//! surrogate as long as they keep decreasing the true objective
//! ([`solve_accelerated`]). Surrogates come in two families: radial basis
//! functions fitted by minimal-norm least squares, and shallow neural
//! networks trained with L-BFGS, optionally on values and gradients jointly
//! (Sobolev learning).
//!
//! The [`bench`] module contains a suite of classical smooth test problems
//! and a data-profile benchmark harness; the `sadfo` binary exposes it on the
//! command line.
//!
//! ```
//! use sadfo::{solve_base, Oracle, SolverConfig};
//!
//! let mut oracle = Oracle::with_budget(2, 10_000, |x: &[f64]| {
//!     x.iter().map(|v| v * v).sum()
//! });
//! let cfg = SolverConfig::for_dimension(2);
//! let result = solve_base(&mut oracle, &[3.0, -4.0], &cfg).unwrap();
//! assert!(result.f < 1e-8);
//! ```

pub mod bench;
pub mod config;
pub mod dataset;
pub mod error;
pub mod fd;
pub mod oracle;
pub mod solver;
pub mod surrogate;
pub mod trace;

pub use config::SolverConfig;
pub use dataset::{GradDataset, ValueDataset};
pub use error::{Error, Result};
pub use oracle::Oracle;
pub use solver::{
    check_complexity_bounds, eta, fe_bound_check, solve_accelerated, solve_base,
    solve_with_family, surrogate_gain, BoundCheck, FamilySpec, SolveResult,
};
pub use surrogate::descent::{surrogate_descend, SurrogateOutcome};
pub use surrogate::nn::{init_nn, train_nn, Activation, NnFamily, NnSurrogate};
pub use surrogate::rbf::{fit_rbf, RbfFamily, RbfKernel, RbfSurrogate};
pub use surrogate::{loss, SurrogateFamily, SurrogateModel, TrainingProblem};
pub use trace::{Certificate, IterationRecord, SolverTrace, TerminalStatus};
