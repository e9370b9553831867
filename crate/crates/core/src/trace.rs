//! Per-iteration solver records.
//!
//! The trace itemizes every oracle evaluation a run made, which lets tests
//! check the evaluation-accounting identity against the oracle's counter and
//! the per-iteration decrease guarantees against the recorded values.

use std::io::Write;

use crate::error::{Error, Result};

/// Why a solver run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalStatus {
    /// The inner halving safeguard fired: the finite-difference gradient
    /// stayed below the stationarity certificate threshold (or sufficient
    /// decrease kept failing) for the configured number of halvings.
    NearStationary,
    /// The oracle budget was spent mid-run; the best point found is returned.
    BudgetExhausted,
}

/// Small-gradient certificate reported on a near-stationary stop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    /// Norm of the last finite-difference gradient.
    pub grad_norm: f64,
    /// Difference step that produced it.
    pub h: f64,
}

/// One completed outer iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Outer iteration index `k`.
    pub k: usize,
    /// Accepted halving level `i_k`.
    pub i_k: usize,
    /// Step-size parameter `sigma_k` at the start of the iteration.
    pub sigma_k: f64,
    /// Successful surrogate steps taken this iteration (0 for the base method).
    pub t_k: usize,
    /// Objective at the iterate `x_k`.
    pub f_start: f64,
    /// Objective after the finite-difference descent step, `f(x_k^+)`.
    pub f_after_step: f64,
    /// Objective at the next iterate `x_{k+1}` (equals `f_after_step` when no
    /// surrogate step succeeded).
    pub f_end: f64,
    /// The next iterate `x_{k+1}`.
    pub x_end: Vec<f64>,
    /// Oracle evaluations spent on finite differences this iteration.
    pub diff_evals: usize,
    /// Oracle evaluations spent on descent trial points this iteration.
    pub trial_evals: usize,
    /// Oracle evaluations spent inside the surrogate descent this iteration.
    pub surrogate_evals: usize,
    /// Total oracle evaluations after this iteration completed (including the
    /// run's initial evaluation of `f(x_0)`).
    pub cum_evals: usize,
}

impl IterationRecord {
    fn evals(&self) -> usize {
        self.diff_evals + self.trial_evals + self.surrogate_evals
    }
}

/// Full record of a solver run.
#[derive(Debug, Clone)]
pub struct SolverTrace {
    /// Starting point.
    pub x0: Vec<f64>,
    /// Objective at the starting point.
    pub f0: f64,
    /// Completed outer iterations, in order.
    pub iterations: Vec<IterationRecord>,
    /// Evaluations spent in the final unfinished iteration (if any).
    pub tail_evals: usize,
    /// Why the run stopped.
    pub status: TerminalStatus,
    /// Oracle evaluation counter at the end of the run.
    pub total_evals: usize,
    /// Last small-gradient certificate, present on near-stationary stops.
    pub certificate: Option<Certificate>,
}

impl SolverTrace {
    /// Number of completed outer iterations.
    pub fn num_iterations(&self) -> usize {
        self.iterations.len()
    }

    /// Sum of the itemized per-iteration evaluations, plus the initial
    /// evaluation of `f(x_0)` and the unfinished tail. Always equals
    /// [`SolverTrace::total_evals`] on a correct run.
    pub fn itemized_evals(&self) -> usize {
        1 + self
            .iterations
            .iter()
            .map(IterationRecord::evals)
            .sum::<usize>()
            + self.tail_evals
    }

    /// Average number of successful surrogate steps over the first `t`
    /// iterations, `S(t)`.
    pub fn mean_successes(&self, t: usize) -> Result<f64> {
        if t == 0 || t > self.iterations.len() {
            return Err(Error::EmptyTrace);
        }
        let total: usize = self.iterations[..t].iter().map(|r| r.t_k).sum();
        Ok(total as f64 / t as f64)
    }

    /// Writes the trace as CSV with columns `k,i_k,sigma_k,t_k,f_xk,cum_fe`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "k,i_k,sigma_k,t_k,f_xk,cum_fe")?;
        for rec in &self.iterations {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                rec.k, rec.i_k, rec.sigma_k, rec.t_k, rec.f_start, rec.cum_evals
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: usize, t_k: usize) -> IterationRecord {
        IterationRecord {
            k,
            i_k: 0,
            sigma_k: 1.0,
            t_k,
            f_start: 1.0,
            f_after_step: 0.5,
            f_end: 0.5,
            x_end: vec![0.0],
            diff_evals: 1,
            trial_evals: 1,
            surrogate_evals: t_k + 1,
            cum_evals: 0,
        }
    }

    #[test]
    fn mean_successes_averages_t_k() {
        let trace = SolverTrace {
            x0: vec![1.0],
            f0: 1.0,
            iterations: vec![record(0, 2), record(1, 2)],
            tail_evals: 0,
            status: TerminalStatus::NearStationary,
            total_evals: 11,
            certificate: None,
        };
        assert_eq!(trace.mean_successes(2).unwrap(), 2.0);
        assert!(trace.mean_successes(0).is_err());
        assert!(trace.mean_successes(3).is_err());
    }

    #[test]
    fn csv_has_expected_columns() {
        let trace = SolverTrace {
            x0: vec![1.0],
            f0: 1.0,
            iterations: vec![record(0, 0)],
            tail_evals: 0,
            status: TerminalStatus::BudgetExhausted,
            total_evals: 4,
            certificate: None,
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,i_k,sigma_k,t_k,f_xk,cum_fe\n"));
        assert_eq!(text.lines().count(), 2);
    }
}
