//! Derivative-free solvers: the finite-difference base method and its
//! surrogate-accelerated variant.

mod accelerated;
mod base;
mod step;

pub use accelerated::{
    check_complexity_bounds, fe_bound_check, solve_accelerated, solve_with_family, surrogate_gain,
    BoundCheck, FamilySpec,
};
pub use base::solve_base;

/// Final point and the full per-iteration trace of a run.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// Best evaluated point.
    pub x: Vec<f64>,
    /// Objective value at `x`.
    pub f: f64,
    /// Per-iteration record of the run.
    pub trace: crate::trace::SolverTrace,
}

/// Surrogate gain factor `eta(S) = (1 + S / (2 (n+1))) / (1 + S)`.
pub fn eta(s: f64, n: usize) -> f64 {
    (1.0 + s / (2.0 * (n as f64 + 1.0))) / (1.0 + s)
}
