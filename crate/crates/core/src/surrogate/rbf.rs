//! Radial-basis-function surrogate fitted by linear least squares.
//!
//! The model is `m(x) = sum_i alpha_i psi(|x - y_i|) + beta'x + delta` with
//! the centers `y_i` taken verbatim from the current value dataset. Fitting
//! minimizes the training loss with `lambda = 0`, which after row scaling is
//! an ordinary least-squares problem; among minimizers the solver returns the
//! one with the smallest coefficient norm (SVD pseudoinverse).

use nalgebra::{DMatrix, DVector};

use crate::dataset::{GradDataset, ValueDataset};
use crate::error::{Error, Result};
use crate::surrogate::{SurrogateFamily, SurrogateModel};

/// Singular values below `RANK_TOL * sigma_max` are truncated when solving.
const RANK_TOL: f64 = 1e-12;

/// The three radial basis functions considered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbfKernel {
    Gaussian,
    Multiquadratic,
    Cubic,
}

impl RbfKernel {
    /// `psi(r)`.
    pub fn psi(self, r: f64) -> f64 {
        match self {
            RbfKernel::Gaussian => (-r * r).exp(),
            RbfKernel::Multiquadratic => -(1.0 + r * r).sqrt(),
            RbfKernel::Cubic => r * r * r,
        }
    }

    /// `psi'(r) / r`, extended by its limit at `r = 0`. This is the factor
    /// multiplying the displacement `x - y_i` in the model gradient, so the
    /// gradient stays well defined at the centers.
    pub fn psi_over_r(self, r: f64) -> f64 {
        match self {
            RbfKernel::Gaussian => -2.0 * (-r * r).exp(),
            RbfKernel::Multiquadratic => -1.0 / (1.0 + r * r).sqrt(),
            RbfKernel::Cubic => 3.0 * r,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RbfKernel::Gaussian => "gaussian",
            RbfKernel::Multiquadratic => "multiquadratic",
            RbfKernel::Cubic => "cubic",
        }
    }
}

impl std::str::FromStr for RbfKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(RbfKernel::Gaussian),
            "multiquadratic" => Ok(RbfKernel::Multiquadratic),
            "cubic" => Ok(RbfKernel::Cubic),
            other => Err(Error::InvalidConfig(format!("unknown kernel '{other}'"))),
        }
    }
}

/// A fitted RBF surrogate.
#[derive(Debug, Clone)]
pub struct RbfSurrogate {
    kernel: RbfKernel,
    centers: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    delta: f64,
}

impl RbfSurrogate {
    pub fn kernel(&self) -> RbfKernel {
        self.kernel
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Rebuilds a surrogate from a flat coefficient vector `(alpha, beta,
    /// delta)` and its centers.
    pub fn from_parts(
        kernel: RbfKernel,
        centers: Vec<Vec<f64>>,
        coefficients: &[f64],
    ) -> Result<Self> {
        let n = centers.first().map_or(0, Vec::len);
        let expected = centers.len() + n + 1;
        if coefficients.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coefficients.len(),
            });
        }
        let (alpha, rest) = coefficients.split_at(centers.len());
        let (beta, delta) = rest.split_at(n);
        Ok(Self {
            kernel,
            centers,
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
            delta: delta[0],
        })
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl SurrogateModel for RbfSurrogate {
    fn dimension(&self) -> usize {
        self.beta.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        let mut v: f64 = self
            .alpha
            .iter()
            .zip(&self.centers)
            .map(|(a, c)| a * self.kernel.psi(distance(x, c)))
            .sum();
        v += self.beta.iter().zip(x).map(|(b, xi)| b * xi).sum::<f64>();
        v + self.delta
    }

    fn spatial_gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut grad = self.beta.clone();
        for (a, c) in self.alpha.iter().zip(&self.centers) {
            let w = a * self.kernel.psi_over_r(distance(x, c));
            for (g, (xi, ci)) in grad.iter_mut().zip(x.iter().zip(c)) {
                *g += w * (xi - ci);
            }
        }
        grad
    }

    fn parameters(&self) -> Vec<f64> {
        let mut p = self.alpha.clone();
        p.extend_from_slice(&self.beta);
        p.push(self.delta);
        p
    }
}

/// Fits an RBF surrogate to the datasets by minimal-norm least squares.
///
/// Value rows are scaled by `1/sqrt(N)` and, when `sobolev` is set, gradient
/// rows by `1/sqrt(M)`, so the squared residual norm equals the averaged
/// training loss with `lambda = 0`.
pub fn fit_rbf(
    kernel: RbfKernel,
    values: &ValueDataset,
    grads: &GradDataset,
    sobolev: bool,
) -> Result<RbfSurrogate> {
    if values.is_empty() {
        return Err(Error::EmptyValueDataset);
    }
    let centers: Vec<Vec<f64>> = values.iter().map(|e| e.point.clone()).collect();
    let n_centers = centers.len();
    let dim = centers[0].len();
    let n_grad_rows = if sobolev { grads.len() * dim } else { 0 };
    let rows = n_centers + n_grad_rows;
    let cols = n_centers + dim + 1;

    let mut a = DMatrix::<f64>::zeros(rows, cols);
    let mut b = DVector::<f64>::zeros(rows);

    let w_val = 1.0 / (n_centers as f64).sqrt();
    for (row, entry) in values.iter().enumerate() {
        for (i, c) in centers.iter().enumerate() {
            a[(row, i)] = w_val * kernel.psi(distance(&entry.point, c));
        }
        for l in 0..dim {
            a[(row, n_centers + l)] = w_val * entry.point[l];
        }
        a[(row, n_centers + dim)] = w_val;
        b[row] = w_val * entry.value;
    }

    if sobolev && !grads.is_empty() {
        let w_grad = 1.0 / (grads.len() as f64).sqrt();
        let mut row = n_centers;
        for entry in grads.iter() {
            for (i, c) in centers.iter().enumerate() {
                let w = w_grad * kernel.psi_over_r(distance(&entry.point, c));
                for l in 0..dim {
                    a[(row + l, i)] = w * (entry.point[l] - c[l]);
                }
            }
            for l in 0..dim {
                a[(row + l, n_centers + l)] = w_grad;
                b[row + l] = w_grad * entry.grad[l];
            }
            row += dim;
        }
    }

    let svd = a.svd(true, true);
    let s_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let coeffs = svd
        .solve(&b, RANK_TOL * s_max)
        .map_err(|e| Error::FitFailed(e.to_string()))?;
    let coeffs: Vec<f64> = coeffs.iter().cloned().collect();
    RbfSurrogate::from_parts(kernel, centers, &coeffs)
}

/// [`SurrogateFamily`] that refits an RBF model from scratch at every call.
pub struct RbfFamily {
    kernel: RbfKernel,
    sobolev: bool,
    name: String,
    model: Option<RbfSurrogate>,
}

impl RbfFamily {
    pub fn new(kernel: RbfKernel, sobolev: bool) -> Self {
        let name = if sobolev { "rbf-sobolev" } else { "rbf-plain" };
        Self {
            kernel,
            sobolev,
            name: name.to_string(),
            model: None,
        }
    }
}

impl SurrogateFamily for RbfFamily {
    fn fit(
        &mut self,
        values: &ValueDataset,
        grads: &GradDataset,
    ) -> Result<&dyn SurrogateModel> {
        let fitted = fit_rbf(self.kernel, values, grads, self.sobolev)?;
        self.model = Some(fitted);
        Ok(self.model.as_ref().unwrap())
    }

    fn name(&self) -> &str {
        &self.name
    }
}
