//! The shared inner loop of both solvers: per halving level, recompute the
//! forward-difference gradient, certify a small gradient or test the descent
//! trial point, and double the effective step-size parameter on failure.

use crate::config::SolverConfig;
use crate::error::Error;
use crate::fd::{fd_step, forward_gradient};
use crate::oracle::Oracle;

/// An accepted descent step.
pub(crate) struct StepOutcome {
    /// Accepted halving level `i_k`.
    pub i_k: usize,
    /// `2^{i_k} sigma_k`.
    pub sigma_eff: f64,
    /// Trial point `x_k - g / (2^{i_k} sigma_k)`.
    pub x_plus: Vec<f64>,
    pub f_plus: f64,
    /// The accepted level's gradient approximation and difference step.
    pub grad: Vec<f64>,
    pub h: f64,
    pub diff_evals: usize,
    pub trial_evals: usize,
}

pub(crate) enum StepResult {
    Accepted(StepOutcome),
    /// The halving safeguard fired; carries the last gradient certificate.
    NearStationary { grad_norm: f64, h: f64 },
    /// The oracle budget ran out mid-step.
    Budget,
}

/// Runs the halving loop at `x` with known value `fx` and parameter
/// `sigma_k`. `on_diff_points` sees every evaluated difference point (the
/// accelerated solver inserts them into its value dataset; both solvers use
/// it for best-point tracking).
pub(crate) fn descent_step(
    oracle: &mut Oracle,
    x: &[f64],
    fx: f64,
    sigma_k: f64,
    cfg: &SolverConfig,
    mut on_diff_points: impl FnMut(&[(Vec<f64>, f64)]),
) -> StepResult {
    let n = x.len();
    let mut sigma_eff = sigma_k;
    let mut diff_evals = 0usize;
    let mut trial_evals = 0usize;
    let mut last_cert = (f64::NAN, f64::NAN);

    for level in 0.. {
        if level >= cfg.max_inner_halvings {
            return StepResult::NearStationary {
                grad_norm: last_cert.0,
                h: last_cert.1,
            };
        }
        let h = fd_step(cfg.epsilon, n, sigma_eff).expect("validated config");
        let fg = match forward_gradient(oracle, x, fx, h) {
            Ok(fg) => fg,
            Err(Error::BudgetExhausted { .. }) => return StepResult::Budget,
            Err(e) => unreachable!("forward_gradient on validated inputs: {e}"),
        };
        diff_evals += n;
        on_diff_points(&fg.points);

        let grad_sq: f64 = fg.grad.iter().map(|g| g * g).sum();
        let grad_norm = grad_sq.sqrt();
        last_cert = (grad_norm, h);
        if grad_norm < 0.8 * cfg.epsilon {
            sigma_eff *= 2.0;
            continue;
        }

        let trial: Vec<f64> = x
            .iter()
            .zip(&fg.grad)
            .map(|(xi, gi)| xi - gi / sigma_eff)
            .collect();
        let f_trial = match oracle.evaluate(&trial) {
            Ok(f) => f,
            Err(_) => return StepResult::Budget,
        };
        trial_evals += 1;

        if fx - f_trial >= grad_sq / (8.0 * sigma_eff) {
            return StepResult::Accepted(StepOutcome {
                i_k: level,
                sigma_eff,
                x_plus: trial,
                f_plus: f_trial,
                grad: fg.grad,
                h,
                diff_evals,
                trial_evals,
            });
        }
        sigma_eff *= 2.0;
    }
    unreachable!()
}
