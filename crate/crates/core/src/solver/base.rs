//! Derivative-free gradient descent with forward-difference gradients and
//! doubling backtracking on the step-size parameter.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::solver::step::{descent_step, StepResult};
use crate::solver::SolveResult;
use crate::trace::{Certificate, IterationRecord, SolverTrace, TerminalStatus};

/// Runs the base method from `x0` until the oracle budget is spent or the
/// halving safeguard certifies a near-stationary point. Returns the best
/// evaluated point together with the trace.
pub fn solve_base(oracle: &mut Oracle, x0: &[f64], cfg: &SolverConfig) -> Result<SolveResult> {
    cfg.validate()?;
    if x0.len() != oracle.dimension() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dimension(),
            got: x0.len(),
        });
    }

    let f0 = oracle.evaluate(x0)?;
    let mut best_x = x0.to_vec();
    let mut best_f = f0;

    let mut x = x0.to_vec();
    let mut fx = f0;
    let mut sigma = cfg.sigma0;
    let mut iterations: Vec<IterationRecord> = Vec::new();
    let mut cum_completed = oracle.eval_count();
    let status;
    let mut certificate = None;

    loop {
        let k = iterations.len();
        let result = descent_step(oracle, &x, fx, sigma, cfg, |points| {
            for (p, f) in points {
                if *f < best_f {
                    best_f = *f;
                    best_x = p.clone();
                }
            }
        });
        match result {
            StepResult::Accepted(step) => {
                if step.f_plus < best_f {
                    best_f = step.f_plus;
                    best_x = step.x_plus.clone();
                }
                let cum = oracle.eval_count();
                iterations.push(IterationRecord {
                    k,
                    i_k: step.i_k,
                    sigma_k: sigma,
                    t_k: 0,
                    f_start: fx,
                    f_after_step: step.f_plus,
                    f_end: step.f_plus,
                    x_end: step.x_plus.clone(),
                    diff_evals: step.diff_evals,
                    trial_evals: step.trial_evals,
                    surrogate_evals: 0,
                    cum_evals: cum,
                });
                debug_assert_eq!(
                    cum - cum_completed,
                    step.diff_evals + step.trial_evals,
                    "itemized evaluations must match the oracle counter"
                );
                cum_completed = cum;
                x = step.x_plus;
                fx = step.f_plus;
                sigma = (step.sigma_eff / 2.0).max(cfg.sigma_min);
            }
            StepResult::NearStationary { grad_norm, h } => {
                status = TerminalStatus::NearStationary;
                certificate = Some(Certificate { grad_norm, h });
                break;
            }
            StepResult::Budget => {
                status = TerminalStatus::BudgetExhausted;
                break;
            }
        }
    }

    let total_evals = oracle.eval_count();
    Ok(SolveResult {
        x: best_x,
        f: best_f,
        trace: SolverTrace {
            x0: x0.to_vec(),
            f0,
            iterations,
            tail_evals: total_evals - cum_completed,
            status,
            total_evals,
            certificate,
        },
    })
}
