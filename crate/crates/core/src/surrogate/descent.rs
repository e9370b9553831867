//! Armijo gradient descent on a surrogate model, accepted step by step only
//! while the true objective keeps decreasing by the required threshold.
//!
//! Each attempted step backtracks on the *model* until the model decrease is
//! sufficient, then spends exactly one true evaluation on the candidate. A
//! candidate is kept when `f(v_t) - f(v_hat) >= epsilon^2 / (gamma sigma)`;
//! the first failure ends the loop. Every evaluated candidate, accepted or
//! not, is reported for insertion into the value dataset.

use crate::oracle::Oracle;
use crate::surrogate::SurrogateModel;

/// Model gradients with norm at or below this are treated as zero; the
/// descent direction is then meaningless and the loop stops.
const ZERO_GRAD_TOL: f64 = 1e-14;

/// Backtracking halvings allowed per step before treating it as a rejection.
const MAX_MODEL_BACKTRACKS: u32 = 60;

/// Result of one surrogate descent run.
#[derive(Debug, Clone)]
pub struct SurrogateOutcome {
    /// Final point `v^+` (the last accepted iterate, or the input point).
    pub v_plus: Vec<f64>,
    /// Objective value at `v_plus`.
    pub f_v_plus: f64,
    /// Number of accepted (successful) surrogate steps `t^+`.
    pub successes: usize,
    /// All points evaluated inside the loop with their values, in evaluation
    /// order; includes the final rejected candidate.
    pub new_values: Vec<(Vec<f64>, f64)>,
    /// Oracle evaluations consumed. Equals `successes + 1` when the loop
    /// ended by an ordinary rejection; one less when it ended on a zero model
    /// gradient, a backtracking cap, or budget exhaustion.
    pub evals_used: usize,
    /// Set when the oracle budget ran out mid-loop.
    pub budget_hit: bool,
}

/// Runs surrogate descent from `(v, fv)` with initial model step size
/// `sigma`. Consumes one oracle evaluation per attempted step.
pub fn surrogate_descend(
    v: &[f64],
    fv: f64,
    oracle: &mut Oracle,
    model: &dyn SurrogateModel,
    sigma: f64,
    rho: f64,
    gamma: f64,
    epsilon: f64,
) -> SurrogateOutcome {
    debug_assert!(sigma > 0.0 && rho > 0.0 && gamma > 0.0 && epsilon > 0.0);
    let threshold = epsilon * epsilon / (gamma * sigma);

    let mut v_t = v.to_vec();
    let mut fv_t = fv;
    let mut step_l = sigma; // L_t
    let mut successes = 0usize;
    let mut new_values = Vec::new();
    let mut evals_used = 0usize;
    let mut budget_hit = false;

    loop {
        let grad = model.spatial_gradient(&v_t);
        let grad_sq: f64 = grad.iter().map(|g| g * g).sum();

        if grad_sq.sqrt() <= ZERO_GRAD_TOL {
            // Degenerate direction. The model test is satisfied with an
            // (essentially) unmoved candidate; when the candidate is exactly
            // v_t the true-function check is a comparison of f(v_t) with
            // itself, so the oracle call is skipped.
            let candidate: Vec<f64> = v_t
                .iter()
                .zip(&grad)
                .map(|(vi, gi)| vi - gi / step_l)
                .collect();
            if candidate != v_t {
                match oracle.evaluate(&candidate) {
                    Ok(f_hat) => {
                        evals_used += 1;
                        new_values.push((candidate, f_hat));
                    }
                    Err(_) => budget_hit = true,
                }
            }
            break;
        }

        // Backtrack on the model: smallest l with
        // m(v_t) - m(v_hat) >= rho / (2^l L_t) * |grad|^2.
        let m_v = model.value(&v_t);
        let mut denom = step_l;
        let mut candidate = None;
        for _ in 0..=MAX_MODEL_BACKTRACKS {
            let v_hat: Vec<f64> = v_t
                .iter()
                .zip(&grad)
                .map(|(vi, gi)| vi - gi / denom)
                .collect();
            if m_v - model.value(&v_hat) >= rho / denom * grad_sq {
                candidate = Some((v_hat, denom));
                break;
            }
            denom *= 2.0;
        }
        let Some((v_hat, denom)) = candidate else {
            // No acceptable model step within the cap; treat as a rejection
            // without spending an evaluation.
            break;
        };

        let f_hat = match oracle.evaluate(&v_hat) {
            Ok(f) => f,
            Err(_) => {
                budget_hit = true;
                break;
            }
        };
        evals_used += 1;
        new_values.push((v_hat.clone(), f_hat));

        if fv_t - f_hat >= threshold {
            // Accept: L_{t+1} = 2^(l-1) L_t.
            step_l = denom / 2.0;
            v_t = v_hat;
            fv_t = f_hat;
            successes += 1;
        } else {
            break;
        }
    }

    SurrogateOutcome {
        v_plus: v_t,
        f_v_plus: fv_t,
        successes,
        new_values,
        evals_used,
        budget_hit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Quadratic1d;

    impl SurrogateModel for Quadratic1d {
        fn dimension(&self) -> usize {
            1
        }
        fn value(&self, x: &[f64]) -> f64 {
            x[0] * x[0]
        }
        fn spatial_gradient(&self, x: &[f64]) -> Vec<f64> {
            vec![2.0 * x[0]]
        }
        fn parameters(&self) -> Vec<f64> {
            vec![]
        }
    }

    struct Linear1d(f64);

    impl SurrogateModel for Linear1d {
        fn dimension(&self) -> usize {
            1
        }
        fn value(&self, x: &[f64]) -> f64 {
            self.0 * x[0]
        }
        fn spatial_gradient(&self, _x: &[f64]) -> Vec<f64> {
            vec![self.0]
        }
        fn parameters(&self) -> Vec<f64> {
            vec![self.0]
        }
    }

    #[test]
    fn backtracking_finds_the_hand_computed_level() {
        // m(v) = v^2 from v = 2 with L_0 = 1, rho = 1e-4: l = 0 moves to -2
        // with zero model decrease; l = 1 lands exactly on the minimizer.
        let mut oracle = Oracle::new(1, |x: &[f64]| x[0] * x[0]);
        let out = surrogate_descend(
            &[2.0],
            4.0,
            &mut oracle,
            &Quadratic1d,
            1.0,
            1e-4,
            12.5,
            1e-5,
        );
        assert!(!out.new_values.is_empty());
        assert_eq!(out.new_values[0].0, vec![0.0], "first candidate is v=0");
        assert_eq!(out.new_values[0].1, 0.0);
        // The step to 0 decreases f by 4 >= eps^2/(gamma sigma), so t+ >= 1.
        assert!(out.successes >= 1);
        assert_eq!(out.v_plus, vec![0.0]);
        // Once at the minimizer the model gradient is exactly zero and the
        // loop stops without a redundant evaluation.
        assert_eq!(out.evals_used, out.successes);
        assert!(!out.budget_hit);
    }

    #[test]
    fn telescoped_decrease_meets_the_guarantee() {
        let mut oracle = Oracle::new(1, |x: &[f64]| x[0] * x[0]);
        let sigma = 4.0;
        let (gamma, epsilon) = (12.5, 1e-5);
        let fv = 9.0;
        let out = surrogate_descend(
            &[3.0],
            fv,
            &mut oracle,
            &Quadratic1d,
            sigma,
            1e-4,
            gamma,
            epsilon,
        );
        let bound = out.successes as f64 * epsilon * epsilon / (gamma * sigma);
        assert!(fv - out.f_v_plus >= bound);
    }

    #[test]
    fn exact_zero_gradient_stops_without_evaluation() {
        let mut oracle = Oracle::new(1, |x: &[f64]| x[0] + 1.0);
        let out = surrogate_descend(
            &[2.0],
            3.0,
            &mut oracle,
            &Linear1d(0.0),
            1.0,
            1e-4,
            12.5,
            1e-5,
        );
        assert_eq!(out.v_plus, vec![2.0]);
        assert_eq!(out.successes, 0);
        assert_eq!(out.evals_used, 0);
        assert_eq!(oracle.eval_count(), 0);
    }

    #[test]
    fn tiny_gradient_spends_one_check_and_stops() {
        // |grad| = 1e-15 <= tol, but the candidate differs from v in the last
        // bits, so the true-function check costs one evaluation and fails.
        let mut oracle = Oracle::new(1, |x: &[f64]| 1e-15 * x[0]);
        let out = surrogate_descend(
            &[2.0],
            2e-15,
            &mut oracle,
            &Linear1d(1e-15),
            1.0,
            1e-4,
            12.5,
            1e-5,
        );
        assert_eq!(out.v_plus, vec![2.0]);
        assert_eq!(out.successes, 0);
        assert_eq!(out.evals_used, 1);
        assert_eq!(out.new_values.len(), 1);
    }

    #[test]
    fn rejected_candidate_is_still_reported() {
        // The model's descent direction (+1) is an ascent direction of f, so
        // the first candidate is rejected but still lands in the outcome.
        let mut oracle = Oracle::new(1, |x: &[f64]| x[0]);
        let out = surrogate_descend(
            &[0.0],
            0.0,
            &mut oracle,
            &Linear1d(-1.0),
            1.0,
            1e-4,
            12.5,
            1e-5,
        );
        assert_eq!(out.successes, 0);
        assert_eq!(out.evals_used, 1);
        assert_eq!(out.new_values.len(), 1);
        assert_eq!(out.v_plus, vec![0.0]);
    }

    #[test]
    fn budget_exhaustion_returns_partial_outcome() {
        let mut oracle = Oracle::with_budget(1, 2, |x: &[f64]| x[0] * x[0]);
        // A linear model of an unbounded-below direction keeps succeeding on
        // f(x) = x^2 only while moving toward 0; give it a small budget.
        let out = surrogate_descend(
            &[8.0],
            64.0,
            &mut oracle,
            &Linear1d(1.0),
            1.0,
            1e-4,
            12.5,
            1e-5,
        );
        assert!(out.budget_hit);
        assert_eq!(out.evals_used, oracle.eval_count());
        assert_eq!(out.evals_used, 2);
    }

    #[test]
    fn evals_are_successes_plus_one_on_ordinary_rejection() {
        let mut oracle = Oracle::new(1, |x: &[f64]| x[0] * x[0]);
        let out = surrogate_descend(
            &[3.0],
            9.0,
            &mut oracle,
            &Quadratic1d,
            16.0,
            1e-4,
            12.5,
            1e-3,
        );
        // With a large sigma the first model steps are small; eventually a
        // candidate fails the true-decrease test (or the minimizer is hit).
        assert!(out.evals_used == out.successes + 1 || out.evals_used == out.successes);
        assert_eq!(oracle.eval_count(), out.evals_used);
    }
}
