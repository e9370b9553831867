//! Convergence test, data profiles and gain summaries.

use crate::error::{Error, Result};

/// The convergence test: `f(x0) - f(x) >= (1 - tau) (f(x0) - f_best)`, with
/// `f_best` the best value found by any compared solver under the budget.
pub fn converged(f_x0: f64, f_x: f64, f_best: f64, tau: f64) -> bool {
    f_x0 - f_x >= (1.0 - tau) * (f_x0 - f_best)
}

/// First evaluation count at which the running best value of `history`
/// passes the convergence test, or `None` if it never does.
pub fn evals_to_converge(history: &[f64], f_best: f64, tau: f64) -> Option<usize> {
    let f_x0 = *history.first()?;
    let mut running = f64::INFINITY;
    for (idx, &value) in history.iter().enumerate() {
        running = running.min(value);
        if converged(f_x0, running, f_best, tau) {
            return Some(idx + 1);
        }
    }
    None
}

/// Per-(problem, solver) evaluation counts to convergence.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    pub solver: String,
    /// One entry per problem, aligned across solvers: problem dimension and
    /// the evaluations to convergence (`None` when the budget ran out first).
    pub entries: Vec<(usize, Option<usize>)>,
}

/// A solver's data-profile curve: the fraction of problems solved within a
/// budget of `alpha` simplex gradients (one simplex gradient is `n + 1`
/// evaluations of the problem's own dimension).
#[derive(Debug, Clone)]
pub struct DataProfile {
    pub solver: String,
    /// Normalized cost per problem, `evals / (n + 1)`; infinite when the
    /// problem was not solved.
    costs: Vec<f64>,
}

impl DataProfile {
    /// Fraction of problems with normalized cost at most `alpha`.
    pub fn fraction_at(&self, alpha: f64) -> f64 {
        let solved = self.costs.iter().filter(|c| **c <= alpha).count();
        solved as f64 / self.costs.len() as f64
    }
}

/// Builds one curve per solver. All tables must cover the same problems in
/// the same order.
pub fn data_profile(tables: &[ProfileTable]) -> Result<Vec<DataProfile>> {
    let Some(first) = tables.first() else {
        return Ok(Vec::new());
    };
    for table in tables {
        if table.entries.len() != first.entries.len()
            || table
                .entries
                .iter()
                .zip(&first.entries)
                .any(|(a, b)| a.0 != b.0)
        {
            return Err(Error::MismatchedProblemSets);
        }
    }
    Ok(tables
        .iter()
        .map(|table| DataProfile {
            solver: table.solver.clone(),
            costs: table
                .entries
                .iter()
                .map(|(n, evals)| match evals {
                    Some(e) => *e as f64 / (*n as f64 + 1.0),
                    None => f64::INFINITY,
                })
                .collect(),
        })
        .collect())
}

/// Minimum, quartiles and maximum of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNumberSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linearly interpolated quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

impl FiveNumberSummary {
    /// Summary of a non-empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(Self {
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: *sorted.last().unwrap(),
        })
    }
}
