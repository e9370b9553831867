//! Surrogate-model contract, training objectives, and the descent step that
//! validates surrogate progress against the true objective.

pub mod descent;
pub mod lbfgs;
pub mod nn;
pub mod rbf;

use crate::dataset::{GradDataset, ValueDataset};
use crate::error::{Error, Result};

/// A trained, continuously differentiable model of the objective.
///
/// `spatial_gradient` must be the exact gradient of `value`; every concrete
/// family is checked against central finite differences for this.
pub trait SurrogateModel {
    fn dimension(&self) -> usize;

    /// Model value at `x`.
    fn value(&self, x: &[f64]) -> f64;

    /// Gradient of the model value at `x`.
    fn spatial_gradient(&self, x: &[f64]) -> Vec<f64>;

    /// All trainable parameters as one flat vector, used by the ridge term of
    /// the training loss and by (de)serialization.
    fn parameters(&self) -> Vec<f64>;
}

/// The data and settings defining one training objective.
///
/// With `sobolev` unset the gradient dataset is ignored and the loss reduces
/// to the plain mean-squared value error (plus the ridge term, which `lambda
/// = 0` removes exactly).
pub struct TrainingProblem<'a> {
    pub values: &'a ValueDataset,
    pub grads: &'a GradDataset,
    pub lambda: f64,
    pub sobolev: bool,
}

/// Training loss of `model` on `prob`:
///
/// `(1/N) sum_i (m(y_i) - f_i)^2 [+ (1/M) sum_j |grad m(z_j) - g_j|^2] + lambda |theta|^2`.
pub fn loss(model: &dyn SurrogateModel, prob: &TrainingProblem) -> Result<f64> {
    if prob.values.is_empty() {
        return Err(Error::EmptyValueDataset);
    }
    let n_values = prob.values.len() as f64;
    let mut total = prob
        .values
        .iter()
        .map(|e| {
            let r = model.value(&e.point) - e.value;
            r * r
        })
        .sum::<f64>()
        / n_values;
    if prob.sobolev && !prob.grads.is_empty() {
        let n_grads = prob.grads.len() as f64;
        total += prob
            .grads
            .iter()
            .map(|e| {
                let mg = model.spatial_gradient(&e.point);
                mg.iter()
                    .zip(&e.grad)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
            })
            .sum::<f64>()
            / n_grads;
    }
    if prob.lambda > 0.0 {
        total += prob.lambda * model.parameters().iter().map(|t| t * t).sum::<f64>();
    }
    Ok(total)
}

/// A model family the accelerated solver can refit as the datasets grow.
///
/// Implementations own whatever state persists across fits (the NN family
/// keeps its parameters for warm starts; the RBF family refits from scratch).
pub trait SurrogateFamily {
    /// Fits the family to the current datasets and returns the trained model.
    /// Never consumes oracle evaluations.
    fn fit(&mut self, values: &ValueDataset, grads: &GradDataset)
        -> Result<&dyn SurrogateModel>;

    /// Name used in trace files and CLI output.
    fn name(&self) -> &str;
}
