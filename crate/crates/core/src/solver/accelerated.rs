//! The base method augmented with dataset collection, surrogate training and
//! surrogate descent after each successful outer step.

use crate::config::SolverConfig;
use crate::dataset::{GradDataset, ValueDataset};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::solver::step::{descent_step, StepResult};
use crate::solver::{eta, SolveResult};
use crate::surrogate::descent::surrogate_descend;
use crate::surrogate::nn::{Activation, NnFamily};
use crate::surrogate::rbf::{RbfFamily, RbfKernel};
use crate::surrogate::SurrogateFamily;
use crate::trace::{Certificate, IterationRecord, SolverTrace, TerminalStatus};

/// Which surrogate family the accelerated solver should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    Rbf { kernel: RbfKernel, sobolev: bool },
    Nn { activation: Activation, sobolev: bool },
}

impl FamilySpec {
    /// Builds the family state for a run. The RBF fit is parameter free; the
    /// NN trainer takes the ridge weight from the solver configuration and
    /// the seed for its initialization.
    pub fn build(self, cfg: &SolverConfig, seed: u64) -> Box<dyn SurrogateFamily> {
        match self {
            FamilySpec::Rbf { kernel, sobolev } => Box::new(RbfFamily::new(kernel, sobolev)),
            FamilySpec::Nn { activation, sobolev } => {
                Box::new(NnFamily::new(activation, sobolev, cfg.lambda, seed))
            }
        }
    }
}

/// Runs the accelerated solver with one of the built-in surrogate families.
pub fn solve_accelerated(
    oracle: &mut Oracle,
    x0: &[f64],
    cfg: &SolverConfig,
    spec: FamilySpec,
    seed: u64,
) -> Result<SolveResult> {
    let mut family = spec.build(cfg, seed);
    solve_with_family(oracle, x0, cfg, family.as_mut())
}

/// Runs the accelerated solver with a caller-supplied surrogate family.
///
/// Per outer iteration: the finite-difference descent step collects every
/// difference point into the value dataset and, on success, the trial point
/// and the accepted gradient; the family is then refitted and surrogate
/// descent runs from the trial point with `sigma = 2^{i_k} sigma_k`. A fit
/// failure skips the surrogate phase for that iteration.
pub fn solve_with_family(
    oracle: &mut Oracle,
    x0: &[f64],
    cfg: &SolverConfig,
    family: &mut dyn SurrogateFamily,
) -> Result<SolveResult> {
    cfg.validate()?;
    if x0.len() != oracle.dimension() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dimension(),
            got: x0.len(),
        });
    }

    let f0 = oracle.evaluate(x0)?;
    let mut values = ValueDataset::new(cfg.cap_values);
    let mut grads = GradDataset::new(cfg.cap_grads);
    values.insert(x0.to_vec(), f0);

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
                values.insert(p.clone(), *f);
                if *f < best_f {
                    best_f = *f;
                    best_x = p.clone();
                }
            }
        });
        let step = match result {
            StepResult::Accepted(step) => step,
            StepResult::NearStationary { grad_norm, h } => {
                status = TerminalStatus::NearStationary;
                certificate = Some(Certificate { grad_norm, h });
                break;
            }
            StepResult::Budget => {
                status = TerminalStatus::BudgetExhausted;
                break;
            }
        };
        values.insert(step.x_plus.clone(), step.f_plus);
        grads
            .insert(x.clone(), step.grad.clone(), step.h)
            .expect("gradient dimension matches point dimension");
        if step.f_plus < best_f {
            best_f = step.f_plus;
            best_x = step.x_plus.clone();
        }

        // Train on the current datasets and attempt surrogate steps. Training
        // failures degrade to a skipped surrogate phase, never an abort.
        let (x_next, f_next, t_k, surrogate_evals, budget_hit) =
            match family.fit(&values, &grads) {
                Ok(model) => {
                    let out = surrogate_descend(
                        &step.x_plus,
                        step.f_plus,
                        oracle,
                        model,
                        step.sigma_eff,
                        cfg.rho,
                        cfg.gamma,
                        cfg.epsilon,
                    );
                    for (p, f) in &out.new_values {
                        values.insert(p.clone(), *f);
                        if *f < best_f {
                            best_f = *f;
                            best_x = p.clone();
                        }
                    }
                    (
                        out.v_plus,
                        out.f_v_plus,
                        out.successes,
                        out.evals_used,
                        out.budget_hit,
                    )
                }
                Err(_) => (step.x_plus.clone(), step.f_plus, 0, 0, false),
            };

        let cum = oracle.eval_count();
        iterations.push(IterationRecord {
            k,
            i_k: step.i_k,
            sigma_k: sigma,
            t_k,
            f_start: fx,
            f_after_step: step.f_plus,
            f_end: f_next,
            x_end: x_next.clone(),
            diff_evals: step.diff_evals,
            trial_evals: step.trial_evals,
            surrogate_evals,
            cum_evals: cum,
        });
        debug_assert_eq!(
            cum - cum_completed,
            step.diff_evals + step.trial_evals + surrogate_evals,
            "itemized evaluations must match the oracle counter"
        );
        cum_completed = cum;

        x = x_next;
        fx = f_next;
        sigma = (step.sigma_eff / 2.0).max(cfg.sigma_min);
        if budget_hit {
            status = TerminalStatus::BudgetExhausted;
            break;
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

/// Surrogate gain `eta(S(T))` over the whole trace, with `S(T)` the average
/// number of successful surrogate steps per completed outer iteration.
pub fn surrogate_gain(trace: &SolverTrace, n: usize) -> Result<f64> {
    let t = trace.num_iterations();
    let s = trace.mean_successes(t)?;
    Ok(eta(s, n))
}

/// Outcome of checking a run against the worst-case complexity bounds.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    /// First iterate index with true gradient norm at most epsilon.
    pub t_eps: usize,
    /// Oracle evaluations consumed up to that iterate.
    pub fe_eps: usize,
    /// Right-hand side of the evaluation-count bound.
    pub fe_bound: f64,
    /// Right-hand side of the iteration-count bound.
    pub t_bound: f64,
    pub fe_ok: bool,
    pub t_ok: bool,
}

/// Evaluates both complexity bounds on a finished run of a problem with
/// known gradient, Lipschitz constant and infimum. Returns `None` when no
/// recorded iterate is epsilon-stationary (the run stopped for other
/// reasons), or when the starting point already is (both bounds are then
/// vacuous).
pub fn check_complexity_bounds(
    trace: &SolverTrace,
    gradient: impl Fn(&[f64]) -> Vec<f64>,
    lipschitz: f64,
    f_low: f64,
    cfg: &SolverConfig,
) -> Option<BoundCheck> {
    let n = trace.x0.len();
    let grad_norm = |x: &[f64]| {
        gradient(x)
            .iter()
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt()
    };

    let mut t_eps = None;
    if grad_norm(&trace.x0) <= cfg.epsilon {
        t_eps = Some(0);
    } else {
        for (idx, rec) in trace.iterations.iter().enumerate() {
            if grad_norm(&rec.x_end) <= cfg.epsilon {
                t_eps = Some(idx + 1);
                break;
            }
        }
    }
    let t_eps = t_eps?;
    if t_eps == 0 {
        return None;
    }

    let fe_eps = trace.iterations[t_eps - 1].cum_evals;
    let s = trace
        .mean_successes(t_eps)
        .expect("t_eps >= 1 within the trace");

    let sigma_max = 2.0 * cfg.sigma0.max(2.0 * lipschitz);
    let c_f = 81.0 / 8.0 * sigma_max.max(lipschitz * lipschitz / cfg.sigma_min);
    let c_max = c_f.max(cfg.gamma * sigma_max);
    let gap = trace.f0 - f_low;
    let eps_sq = cfg.epsilon * cfg.epsilon;
    let np1 = (n + 1) as f64;

    let fe_bound = 4.0 * eta(s, n) * np1 * c_max * gap / eps_sq
        + (sigma_max / cfg.sigma0).log2() * np1
        + t_eps as f64;
    let t_bound = 2.0 * c_max * gap / ((1.0 + s) * eps_sq);

    Some(BoundCheck {
        t_eps,
        fe_eps,
        fe_bound,
        t_bound,
        fe_ok: (fe_eps as f64) <= fe_bound,
        t_ok: (t_eps as f64) <= t_bound,
    })
}

/// True when the run satisfies the proven evaluation-count bound (and the
/// iteration-count bound) for the given problem constants.
pub fn fe_bound_check(
    trace: &SolverTrace,
    gradient: impl Fn(&[f64]) -> Vec<f64>,
    lipschitz: f64,
    f_low: f64,
    cfg: &SolverConfig,
) -> bool {
    match check_complexity_bounds(trace, gradient, lipschitz, f_low, cfg) {
        Some(check) => check.fe_ok && check.t_ok,
        None => true,
    }
}
