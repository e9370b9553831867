//! Zeroth-order oracle with exact evaluation accounting.
//!
//! Every function evaluation in the crate goes through [`Oracle::evaluate`],
//! which increments the counter by exactly one per query and rejects queries
//! once the optional budget is spent. Solver-reported evaluation totals are
//! checked against this counter, so nothing may bypass it.

use crate::error::{Error, Result};

/// A black-box objective together with its evaluation ledger.
pub struct Oracle<'a> {
    objective: Box<dyn FnMut(&[f64]) -> f64 + 'a>,
    dimension: usize,
    eval_count: usize,
    budget: Option<usize>,
    history: Vec<f64>,
}

impl<'a> Oracle<'a> {
    /// Wraps `objective` of the given dimension with no evaluation budget.
    pub fn new(dimension: usize, objective: impl FnMut(&[f64]) -> f64 + 'a) -> Self {
        Self {
            objective: Box::new(objective),
            dimension,
            eval_count: 0,
            budget: None,
            history: Vec::new(),
        }
    }

    /// Wraps `objective` with a hard cap on the number of evaluations.
    pub fn with_budget(
        dimension: usize,
        budget: usize,
        objective: impl FnMut(&[f64]) -> f64 + 'a,
    ) -> Self {
        let mut oracle = Self::new(dimension, objective);
        oracle.budget = Some(budget);
        oracle
    }

    /// Evaluates the objective at `x`, charging one evaluation.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        if let Some(budget) = self.budget {
            if self.eval_count >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        let value = (self.objective)(x);
        self.eval_count += 1;
        self.history.push(value);
        Ok(value)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn eval_count(&self) -> usize {
        self.eval_count
    }

    pub fn budget(&self) -> Option<usize> {
        self.budget
    }

    /// Evaluations remaining under the budget, if one is set.
    pub fn remaining(&self) -> Option<usize> {
        self.budget.map(|b| b.saturating_sub(self.eval_count))
    }

    /// All values returned so far, in evaluation order. The benchmark harness
    /// uses this to determine the best value "found" by a run and the running
    /// best needed by the convergence test.
    pub fn history(&self) -> &[f64] {
        &self.history
    }
}

impl std::fmt::Debug for Oracle<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Oracle")
            .field("dimension", &self.dimension)
            .field("eval_count", &self.eval_count)
            .field("budget", &self.budget)
            .finish()
    }
}
