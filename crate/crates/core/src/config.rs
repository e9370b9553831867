//! Solver parameters.

use crate::error::{Error, Result};

/// Parameters shared by the base and accelerated solvers.
///
/// `cap_values` defaults to `10 * (n + 1)` and therefore depends on the
/// problem dimension; use [`SolverConfig::for_dimension`] to obtain the
/// standard configuration for a given `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Initial curvature estimate sigma_0.
    pub sigma0: f64,
    /// Lower bound kept on sigma across iterations.
    pub sigma_min: f64,
    /// Target stationarity tolerance.
    pub epsilon: f64,
    /// Armijo sufficient-decrease factor for the model line search.
    pub rho: f64,
    /// Scale of the true-decrease threshold for surrogate steps.
    pub gamma: f64,
    /// Ridge penalty on surrogate parameters (used by the NN trainer).
    pub lambda: f64,
    /// Cap on the value dataset.
    pub cap_values: usize,
    /// Cap on the gradient dataset.
    pub cap_grads: usize,
    /// Safeguard: consecutive step-size halvings allowed within one outer
    /// iteration before the solver reports a near-stationary stop.
    pub max_inner_halvings: usize,
}

impl SolverConfig {
    /// Standard configuration for an `n`-dimensional problem.
    pub fn for_dimension(n: usize) -> Self {
        Self {
            sigma0: 1.0,
            sigma_min: 1e-2,
            epsilon: 1e-5,
            rho: 1e-4,
            gamma: 12.5,
            lambda: 1e-4,
            cap_values: 10 * (n + 1),
            cap_grads: 10,
            max_inner_halvings: 60,
        }
    }

    /// Checks positivity and ordering constraints on the parameters.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("sigma0", self.sigma0),
            ("sigma_min", self.sigma_min),
            ("epsilon", self.epsilon),
            ("rho", self.rho),
            ("gamma", self.gamma),
        ] {
            if !(value > 0.0) {
                return Err(Error::NonPositiveInput { name, value });
            }
        }
        if self.lambda < 0.0 || !self.lambda.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda must be non-negative, got {}",
                self.lambda
            )));
        }
        if self.sigma0 < self.sigma_min {
            return Err(Error::InvalidConfig(format!(
                "sigma0 ({}) must be at least sigma_min ({})",
                self.sigma0, self.sigma_min
            )));
        }
        if self.cap_values == 0 || self.cap_grads == 0 || self.max_inner_halvings == 0 {
            return Err(Error::InvalidConfig(
                "cap_values, cap_grads and max_inner_halvings must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_standard_values() {
        let cfg = SolverConfig::for_dimension(3);
        assert_eq!(cfg.sigma0, 1.0);
        assert_eq!(cfg.sigma_min, 1e-2);
        assert_eq!(cfg.epsilon, 1e-5);
        assert_eq!(cfg.rho, 1e-4);
        assert_eq!(cfg.gamma, 12.5);
        assert_eq!(cfg.cap_values, 40);
        assert_eq!(cfg.cap_grads, 10);
        cfg.validate().unwrap();
    }

    #[test]
    fn sigma_ordering_enforced() {
        let mut cfg = SolverConfig::for_dimension(2);
        cfg.sigma0 = 1e-3;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn non_positive_inputs_rejected() {
        let mut cfg = SolverConfig::for_dimension(2);
        cfg.epsilon = 0.0;
        assert!(matches!(
            cfg.validate(),
            Err(Error::NonPositiveInput { name: "epsilon", .. })
        ));
    }
}
