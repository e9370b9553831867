//! Forward finite-difference gradients and the difference-step schedule.

use crate::error::{Error, Result};
use crate::oracle::Oracle;

/// Difference step for tolerance `epsilon`, dimension `n` and the current
/// effective step-size parameter `sigma_eff = 2^i * sigma_k`:
///
/// `h = 2 epsilon / (5 sqrt(n) sigma_eff)`.
pub fn fd_step(epsilon: f64, n: usize, sigma_eff: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositiveInput {
            name: "epsilon",
            value: epsilon,
        });
    }
    if n == 0 {
        return Err(Error::NonPositiveInput {
            name: "n",
            value: 0.0,
        });
    }
    if !(sigma_eff > 0.0) {
        return Err(Error::NonPositiveInput {
            name: "sigma_eff",
            value: sigma_eff,
        });
    }
    Ok(2.0 * epsilon / (5.0 * (n as f64).sqrt() * sigma_eff))
}

/// Forward-difference gradient together with the points it evaluated.
#[derive(Debug, Clone)]
pub struct ForwardGradient {
    /// `grad_j = (f(x + h e_j) - f(x)) / h`.
    pub grad: Vec<f64>,
    /// The `n` evaluated points `(x + h e_j, f(x + h e_j))`, for insertion
    /// into a value dataset.
    pub points: Vec<(Vec<f64>, f64)>,
}

/// Computes the forward-difference gradient of the oracle at `x`.
///
/// `fx` must be the already-known value `f(x)`; the center is never
/// re-evaluated, so the call consumes exactly `n` oracle evaluations. On
/// budget exhaustion the error propagates and the partial results are
/// discarded (the evaluations stay counted by the oracle).
pub fn forward_gradient(
    oracle: &mut Oracle,
    x: &[f64],
    fx: f64,
    h: f64,
) -> Result<ForwardGradient> {
    if x.len() != oracle.dimension() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dimension(),
            got: x.len(),
        });
    }
    if !(h > 0.0) {
        return Err(Error::NonPositiveInput { name: "h", value: h });
    }
    let n = x.len();
    let mut grad = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + h;
        let fj = oracle.evaluate(&probe)?;
        grad.push((fj - fx) / h);
        points.push((probe.clone(), fj));
        probe[j] = x[j];
    }
    Ok(ForwardGradient { grad, points })
}
