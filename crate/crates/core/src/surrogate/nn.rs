//! One-hidden-layer neural-network surrogate.
//!
//! The model is `m(x) = W2 phi(W1 x + b1) + b2` with hidden width `q = 5 n`.
//! Training minimizes the (optionally Sobolev) loss with an analytic
//! parameter gradient; the Sobolev term needs the second derivative of the
//! activation, which is why only smooth activations are offered.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{GradDataset, ValueDataset};
use crate::error::{Error, Result};
use crate::surrogate::lbfgs::{self, LbfgsConfig, LbfgsOutcome};
use crate::surrogate::{SurrogateFamily, SurrogateModel, TrainingProblem};

/// Hidden width per input dimension.
const WIDTH_FACTOR: usize = 5;

/// Smooth activations. ReLU-style kinks are excluded: the surrogate must be
/// continuously differentiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// `log(1 + e^u)`; evaluated in shifted form so it is stable for |u| up
    /// to well beyond 1e3.
    Softplus,
    /// Logistic `1 / (1 + e^-u)`.
    Sigmoid,
    /// `u / (1 + e^-u)`.
    Silu,
}

impl Activation {
    /// `(phi(u), phi'(u), phi''(u))` from a single logistic evaluation.
    #[inline]
    pub fn eval(self, u: f64) -> (f64, f64, f64) {
        let sig = if u >= 0.0 {
            1.0 / (1.0 + (-u).exp())
        } else {
            let e = u.exp();
            e / (1.0 + e)
        };
        let dsig = sig * (1.0 - sig);
        match self {
            Activation::Softplus => {
                let phi = if u > 0.0 {
                    u + (-u).exp().ln_1p()
                } else {
                    u.exp().ln_1p()
                };
                (phi, sig, dsig)
            }
            Activation::Sigmoid => (sig, dsig, dsig * (1.0 - 2.0 * sig)),
            Activation::Silu => (
                u * sig,
                sig * (1.0 + u * (1.0 - sig)),
                dsig * (2.0 + u * (1.0 - 2.0 * sig)),
            ),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Softplus => "softplus",
            Activation::Sigmoid => "sigmoid",
            Activation::Silu => "silu",
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "softplus" => Ok(Activation::Softplus),
            "sigmoid" => Ok(Activation::Sigmoid),
            "silu" => Ok(Activation::Silu),
            other => Err(Error::InvalidConfig(format!(
                "unknown activation '{other}'"
            ))),
        }
    }
}

/// A one-hidden-layer network with scalar output.
#[derive(Debug, Clone)]
pub struct NnSurrogate {
    /// `q x n`, row-major.
    w1: Vec<f64>,
    b1: Vec<f64>,
    /// `1 x q`.
    w2: Vec<f64>,
    b2: f64,
    activation: Activation,
    n: usize,
    q: usize,
}

impl NnSurrogate {
    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn hidden_width(&self) -> usize {
        self.q
    }

    /// Flat parameter vector in the order `W1, b1, W2, b2`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut theta = Vec::with_capacity(self.q * self.n + 2 * self.q + 1);
        theta.extend_from_slice(&self.w1);
        theta.extend_from_slice(&self.b1);
        theta.extend_from_slice(&self.w2);
        theta.push(self.b2);
        theta
    }

    /// Rebuilds a network from a flat parameter vector.
    pub fn from_flat(n: usize, activation: Activation, theta: &[f64]) -> Result<Self> {
        let q = WIDTH_FACTOR * n;
        let expected = q * n + 2 * q + 1;
        if theta.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: theta.len(),
            });
        }
        let (w1, rest) = theta.split_at(q * n);
        let (b1, rest) = rest.split_at(q);
        let (w2, b2) = rest.split_at(q);
        Ok(Self {
            w1: w1.to_vec(),
            b1: b1.to_vec(),
            w2: w2.to_vec(),
            b2: b2[0],
            activation,
            n,
            q,
        })
    }

    /// Pre-activations `W1 x + b1`.
    fn hidden(&self, x: &[f64]) -> Vec<f64> {
        let mut u = self.b1.clone();
        for p in 0..self.q {
            let row = &self.w1[p * self.n..(p + 1) * self.n];
            u[p] += row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>();
        }
        u
    }
}

impl SurrogateModel for NnSurrogate {
    fn dimension(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64]) -> f64 {
        let u = self.hidden(x);
        let mut v = self.b2;
        for p in 0..self.q {
            v += self.w2[p] * self.activation.eval(u[p]).0;
        }
        v
    }

    fn spatial_gradient(&self, x: &[f64]) -> Vec<f64> {
        let u = self.hidden(x);
        let mut grad = vec![0.0; self.n];
        for p in 0..self.q {
            let w = self.w2[p] * self.activation.eval(u[p]).1;
            let row = &self.w1[p * self.n..(p + 1) * self.n];
            for (g, wij) in grad.iter_mut().zip(row) {
                *g += w * wij;
            }
        }
        grad
    }

    fn parameters(&self) -> Vec<f64> {
        self.to_flat()
    }
}

/// Freshly initialized network of width `5 n`: He-normal weights for softplus
/// and SiLU, Glorot-uniform for the sigmoid, zero biases. Deterministic for a
/// given seed.
pub fn init_nn(n: usize, activation: Activation, seed: u64) -> NnSurrogate {
    assert!(n >= 1, "dimension must be at least 1");
    let q = WIDTH_FACTOR * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w1 = Vec::with_capacity(q * n);
    let mut w2 = Vec::with_capacity(q);
    match activation {
        Activation::Softplus | Activation::Silu => {
            let layer1 = Normal::new(0.0, (2.0 / n as f64).sqrt()).unwrap();
            for _ in 0..q * n {
                w1.push(layer1.sample(&mut rng));
            }
            let layer2 = Normal::new(0.0, (2.0 / q as f64).sqrt()).unwrap();
            for _ in 0..q {
                w2.push(layer2.sample(&mut rng));
            }
        }
        Activation::Sigmoid => {
            let a1 = (6.0 / (n + q) as f64).sqrt();
            for _ in 0..q * n {
                w1.push(rng.gen_range(-a1..a1));
            }
            let a2 = (6.0 / (q + 1) as f64).sqrt();
            for _ in 0..q {
                w2.push(rng.gen_range(-a2..a2));
            }
        }
    }
    NnSurrogate {
        w1,
        b1: vec![0.0; q],
        w2,
        b2: 0.0,
        activation,
        n,
        q,
    }
}

/// Offsets into the flat parameter vector.
struct Layout {
    n: usize,
    q: usize,
}

impl Layout {
    fn w1(&self) -> std::ops::Range<usize> {
        0..self.q * self.n
    }
    fn b1(&self) -> std::ops::Range<usize> {
        self.q * self.n..self.q * self.n + self.q
    }
    fn w2(&self) -> std::ops::Range<usize> {
        self.q * self.n + self.q..self.q * self.n + 2 * self.q
    }
    fn b2(&self) -> usize {
        self.q * self.n + 2 * self.q
    }
}

fn loss_flat(theta: &[f64], layout: &Layout, activation: Activation, prob: &TrainingProblem) -> f64 {
    let (n, q) = (layout.n, layout.q);
    let w1 = &theta[layout.w1()];
    let b1 = &theta[layout.b1()];
    let w2 = &theta[layout.w2()];
    let b2 = theta[layout.b2()];

    let mut total = 0.0;
    let n_values = prob.values.len() as f64;
    for entry in prob.values.iter() {
        let mut m = b2;
        for p in 0..q {
            let row = &w1[p * n..(p + 1) * n];
            let u = b1[p] + row.iter().zip(&entry.point).map(|(w, x)| w * x).sum::<f64>();
            m += w2[p] * activation.eval(u).0;
        }
        let r = m - entry.value;
        total += r * r / n_values;
    }

    if prob.sobolev && !prob.grads.is_empty() {
        let n_grads = prob.grads.len() as f64;
        for entry in prob.grads.iter() {
            let mut mg = vec![0.0; n];
            for p in 0..q {
                let row = &w1[p * n..(p + 1) * n];
                let u = b1[p] + row.iter().zip(&entry.point).map(|(w, x)| w * x).sum::<f64>();
                let w = w2[p] * activation.eval(u).1;
                for (g, wij) in mg.iter_mut().zip(row) {
                    *g += w * wij;
                }
            }
            total += mg
                .iter()
                .zip(&entry.grad)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                / n_grads;
        }
    }

    if prob.lambda > 0.0 {
        total += prob.lambda * theta.iter().map(|t| t * t).sum::<f64>();
    }
    total
}

/// Loss and its exact gradient with respect to all parameters.
fn loss_grad_flat(
    theta: &[f64],
    layout: &Layout,
    activation: Activation,
    prob: &TrainingProblem,
) -> (f64, Vec<f64>) {
    let (n, q) = (layout.n, layout.q);
    let w1 = &theta[layout.w1()];
    let b1 = &theta[layout.b1()];
    let w2 = &theta[layout.w2()];
    let b2 = theta[layout.b2()];

    let mut grad = vec![0.0; theta.len()];
    let mut total = 0.0;
    let (gw1_off, gb1_off, gw2_off, gb2_off) =
        (0, layout.b1().start, layout.w2().start, layout.b2());

    let n_values = prob.values.len() as f64;
    let mut u = vec![0.0; q];
    let mut act = vec![0.0; q];
    let mut dact = vec![0.0; q];
    for entry in prob.values.iter() {
        let mut m = b2;
        for p in 0..q {
            let row = &w1[p * n..(p + 1) * n];
            u[p] = b1[p] + row.iter().zip(&entry.point).map(|(w, x)| w * x).sum::<f64>();
            let (phi, dphi, _) = activation.eval(u[p]);
            act[p] = phi;
            dact[p] = dphi;
            m += w2[p] * phi;
        }
        let r = m - entry.value;
        total += r * r / n_values;
        let c = 2.0 * r / n_values;
        grad[gb2_off] += c;
        for p in 0..q {
            grad[gw2_off + p] += c * act[p];
            let t = c * w2[p] * dact[p];
            grad[gb1_off + p] += t;
            let grow = &mut grad[gw1_off + p * n..gw1_off + (p + 1) * n];
            for (g, x) in grow.iter_mut().zip(&entry.point) {
                *g += t * x;
            }
        }
    }

    if prob.sobolev && !prob.grads.is_empty() {
        let n_grads = prob.grads.len() as f64;
        let mut ddact = vec![0.0; q];
        for entry in prob.grads.iter() {
            let mut mg = vec![0.0; n];
            for p in 0..q {
                let row = &w1[p * n..(p + 1) * n];
                u[p] = b1[p] + row.iter().zip(&entry.point).map(|(w, x)| w * x).sum::<f64>();
                let (_, dphi, ddphi) = activation.eval(u[p]);
                dact[p] = dphi;
                ddact[p] = ddphi;
                let w = w2[p] * dphi;
                for (g, wij) in mg.iter_mut().zip(row) {
                    *g += w * wij;
                }
            }
            let d: Vec<f64> = mg.iter().zip(&entry.grad).map(|(a, b)| a - b).collect();
            total += d.iter().map(|v| v * v).sum::<f64>() / n_grads;
            let c = 2.0 / n_grads;
            for p in 0..q {
                let row = &w1[p * n..(p + 1) * n];
                // s_p = row . d
                let s = row.iter().zip(&d).map(|(w, di)| w * di).sum::<f64>();
                grad[gw2_off + p] += c * dact[p] * s;
                grad[gb1_off + p] += c * w2[p] * ddact[p] * s;
                let cury = c * w2[p] * ddact[p] * s;
                let lin = c * w2[p] * dact[p];
                let grow = &mut grad[gw1_off + p * n..gw1_off + (p + 1) * n];
                for (j, g) in grow.iter_mut().enumerate() {
                    *g += cury * entry.point[j] + lin * d[j];
                }
            }
        }
    }

    if prob.lambda > 0.0 {
        total += prob.lambda * theta.iter().map(|t| t * t).sum::<f64>();
        for (g, t) in grad.iter_mut().zip(theta) {
            *g += 2.0 * prob.lambda * t;
        }
    }
    (total, grad)
}

/// Exact gradient of the training loss with respect to all parameters of
/// `model`, flattened in `W1, b1, W2, b2` order.
pub fn loss_gradient_theta(model: &NnSurrogate, prob: &TrainingProblem) -> Result<Vec<f64>> {
    if prob.values.is_empty() {
        return Err(Error::EmptyValueDataset);
    }
    let layout = Layout {
        n: model.n,
        q: model.q,
    };
    Ok(loss_grad_flat(&model.to_flat(), &layout, model.activation, prob).1)
}

/// Trains `init` on `prob` with L-BFGS. Consumes no oracle evaluations and
/// returns parameters whose loss does not exceed the initial loss; a line
/// search failure is non-fatal and yields the best iterate found.
pub fn train_nn(
    init: &NnSurrogate,
    prob: &TrainingProblem,
    cfg: &LbfgsConfig,
) -> Result<(NnSurrogate, LbfgsOutcome)> {
    if prob.values.is_empty() {
        return Err(Error::EmptyValueDataset);
    }
    let layout = Layout {
        n: init.n,
        q: init.q,
    };
    let activation = init.activation;
    let outcome = lbfgs::minimize(
        init.to_flat(),
        |theta| loss_flat(theta, &layout, activation, prob),
        |theta| loss_grad_flat(theta, &layout, activation, prob),
        cfg,
    );
    let trained = NnSurrogate::from_flat(init.n, activation, &outcome.theta)?;
    Ok((trained, outcome))
}

/// [`SurrogateFamily`] that trains a network, warm-starting each fit from the
/// previously trained parameters.
pub struct NnFamily {
    activation: Activation,
    sobolev: bool,
    lambda: f64,
    lbfgs: LbfgsConfig,
    seed: u64,
    name: String,
    state: Option<NnSurrogate>,
}

impl NnFamily {
    pub fn new(activation: Activation, sobolev: bool, lambda: f64, seed: u64) -> Self {
        let name = if sobolev { "nn-sobolev" } else { "nn-plain" };
        Self {
            activation,
            sobolev,
            lambda,
            lbfgs: LbfgsConfig::default(),
            seed,
            name: name.to_string(),
            state: None,
        }
    }

    /// Last trained network, if any.
    pub fn trained(&self) -> Option<&NnSurrogate> {
        self.state.as_ref()
    }
}

impl SurrogateFamily for NnFamily {
    fn fit(
        &mut self,
        values: &ValueDataset,
        grads: &GradDataset,
    ) -> Result<&dyn SurrogateModel> {
        let entry = values.iter().next().ok_or(Error::EmptyValueDataset)?;
        let n = entry.point.len();
        let init = match &self.state {
            Some(model) if model.dimension() == n => model.clone(),
            _ => init_nn(n, self.activation, self.seed),
        };
        let prob = TrainingProblem {
            values,
            grads,
            lambda: self.lambda,
            sobolev: self.sobolev,
        };
        let (trained, _) = train_nn(&init, &prob, &self.lbfgs)?;
        self.state = Some(trained);
        Ok(self.state.as_ref().unwrap())
    }

    fn name(&self) -> &str {
        &self.name
    }
}
