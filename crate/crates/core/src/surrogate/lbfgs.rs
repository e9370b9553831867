//! Limited-memory BFGS with backtracking Armijo line search.
//!
//! This is the trainer behind the neural-network surrogate. It works on a
//! flat parameter vector and two callbacks (value only, used by the line
//! search, and value plus gradient, used once per accepted iterate), so it
//! never touches the objective oracle.

use std::collections::VecDeque;

/// Trainer settings. The stopping rule is
/// `|grad L(theta_K)| <= grad_tol_rel * max(1, |grad L(theta_0)|)` or
/// `K = max_iters`.
#[derive(Debug, Clone)]
pub struct LbfgsConfig {
    pub memory: usize,
    pub max_iters: usize,
    pub grad_tol_rel: f64,
    /// Armijo sufficient-decrease constant.
    pub c1: f64,
    /// Step halvings allowed per line search before giving up.
    pub max_backtracks: usize,
}

impl Default for LbfgsConfig {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iters: 1000,
            grad_tol_rel: 1e-6,
            c1: 1e-4,
            max_backtracks: 50,
        }
    }
}

/// How a minimization run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LbfgsStop {
    /// Gradient tolerance reached.
    Converged,
    /// Iteration budget reached.
    MaxIters,
    /// No Armijo step found; the best iterate so far is returned.
    LineSearchFailure,
}

#[derive(Debug, Clone)]
pub struct LbfgsOutcome {
    pub theta: Vec<f64>,
    pub loss: f64,
    pub iterations: usize,
    pub stop: LbfgsStop,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Pair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

/// Two-loop recursion; returns the ascent direction `H g` (caller negates).
fn two_loop(grad: &[f64], history: &VecDeque<Pair>) -> Vec<f64> {
    let mut q = grad.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for pair in history.iter().rev() {
        let alpha = pair.rho * dot(&pair.s, &q);
        for (qi, yi) in q.iter_mut().zip(&pair.y) {
            *qi -= alpha * yi;
        }
        alphas.push(alpha);
    }
    if let Some(last) = history.back() {
        let scale = dot(&last.s, &last.y) / dot(&last.y, &last.y);
        for qi in q.iter_mut() {
            *qi *= scale;
        }
    }
    for (pair, alpha) in history.iter().zip(alphas.into_iter().rev()) {
        let beta = pair.rho * dot(&pair.y, &q);
        for (qi, si) in q.iter_mut().zip(&pair.s) {
            *qi += (alpha - beta) * si;
        }
    }
    q
}

/// Minimizes a smooth function from `theta0`.
///
/// `value` is called by the line search; `value_grad` once at `theta0` and
/// once per accepted iterate. Accepted losses are non-increasing.
pub fn minimize(
    theta0: Vec<f64>,
    mut value: impl FnMut(&[f64]) -> f64,
    mut value_grad: impl FnMut(&[f64]) -> (f64, Vec<f64>),
    cfg: &LbfgsConfig,
) -> LbfgsOutcome {
    let (f0, g0) = value_grad(&theta0);
    let tol = cfg.grad_tol_rel * norm(&g0).max(1.0);
    if norm(&g0) <= tol {
        return LbfgsOutcome {
            theta: theta0,
            loss: f0,
            iterations: 0,
            stop: LbfgsStop::Converged,
        };
    }

    let mut theta = theta0;
    let mut f = f0;
    let mut grad = g0;
    let mut best_theta = theta.clone();
    let mut best_f = f;
    let mut history: VecDeque<Pair> = VecDeque::with_capacity(cfg.memory);

    for iter in 0..cfg.max_iters {
        let mut dir = two_loop(&grad, &history);
        for d in dir.iter_mut() {
            *d = -*d;
        }
        let mut slope = dot(&dir, &grad);
        if !(slope < 0.0) {
            // Not a descent direction (stale curvature); fall back to steepest
            // descent and drop the history.
            history.clear();
            dir = grad.iter().map(|g| -g).collect();
            slope = dot(&dir, &grad);
            if !(slope < 0.0) {
                break;
            }
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..=cfg.max_backtracks {
            let candidate: Vec<f64> = theta
                .iter()
                .zip(&dir)
                .map(|(t, d)| t + step * d)
                .collect();
            let fc = value(&candidate);
            if fc <= f + cfg.c1 * step * slope {
                accepted = Some(candidate);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            return LbfgsOutcome {
                theta: best_theta,
                loss: best_f,
                iterations: iter,
                stop: LbfgsStop::LineSearchFailure,
            };
        };

        let (f_next, grad_next) = value_grad(&next);
        let s: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = grad_next.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-10 * norm(&s) * norm(&y) {
            if history.len() == cfg.memory {
                history.pop_front();
            }
            history.push_back(Pair {
                s,
                y,
                rho: 1.0 / sy,
            });
        }

        theta = next;
        f = f_next;
        grad = grad_next;
        if f < best_f {
            best_f = f;
            best_theta = theta.clone();
        }
        if norm(&grad) <= tol {
            return LbfgsOutcome {
                theta: best_theta,
                loss: best_f,
                iterations: iter + 1,
                stop: LbfgsStop::Converged,
            };
        }
    }

    LbfgsOutcome {
        theta: best_theta,
        loss: best_f,
        iterations: cfg.max_iters,
        stop: LbfgsStop::MaxIters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;

    #[test]
    fn quadratic_bowl_converges() {
        let fg = |x: &[f64]| {
            let f = x[0] * x[0] + 10.0 * x[1] * x[1];
            (f, vec![2.0 * x[0], 20.0 * x[1]])
        };
        let out = minimize(
            vec![5.0, -3.0],
            |x| fg(x).0,
            fg,
            &LbfgsConfig::default(),
        );
        assert_eq!(out.stop, LbfgsStop::Converged);
        assert!(out.loss < 1e-10);
    }

    #[test]
    fn rosenbrock_converges() {
        let fg = |x: &[f64]| {
            let (a, b) = (1.0, 100.0);
            let f = (a - x[0]).powi(2) + b * (x[1] - x[0] * x[0]).powi(2);
            let g = vec![
                -2.0 * (a - x[0]) - 4.0 * b * (x[1] - x[0] * x[0]) * x[0],
                2.0 * b * (x[1] - x[0] * x[0]),
            ];
            (f, g)
        };
        let out = minimize(
            vec![-1.2, 1.0],
            |x| fg(x).0,
            fg,
            &LbfgsConfig::default(),
        );
        assert!(out.loss < 1e-8, "loss {}", out.loss);
        assert!((out.theta[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn zero_gradient_start_returns_immediately() {
        let fg = |x: &[f64]| (x[0] * x[0], vec![2.0 * x[0]]);
        let out = minimize(vec![0.0], |x| fg(x).0, fg, &LbfgsConfig::default());
        assert_eq!(out.iterations, 0);
        assert_eq!(out.stop, LbfgsStop::Converged);
    }

    #[test]
    fn accepted_losses_are_non_increasing() {
        let accepted = RefCell::new(Vec::new());
        let fg = |x: &[f64]| {
            let f = (x[0] - 2.0).powi(4) + (x[1] + 1.0).powi(2);
            (f, vec![4.0 * (x[0] - 2.0).powi(3), 2.0 * (x[1] + 1.0)])
        };
        minimize(
            vec![5.0, 5.0],
            |x| fg(x).0,
            |x| {
                let (f, g) = fg(x);
                accepted.borrow_mut().push(f);
                (f, g)
            },
            &LbfgsConfig::default(),
        );
        let seq = accepted.borrow();
        assert!(seq.windows(2).all(|w| w[1] <= w[0]));
    }
}
