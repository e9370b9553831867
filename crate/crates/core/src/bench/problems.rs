//! Classical smooth unconstrained test problems.
//!
//! The suite spans dimensions 1 to 50 and mixes convex quadratics of varied
//! conditioning (with known gradient, Lipschitz constant and infimum, used by
//! the complexity-bound checks) with the usual nonconvex valley and plateau
//! shapes. Every problem is deterministic with a fixed standard start.

use std::sync::Arc;

type ObjectiveFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A smooth objective, bounded below, with its standard starting point.
#[derive(Clone)]
pub struct TestProblem {
    pub name: &'static str,
    pub dim: usize,
    pub x0: Vec<f64>,
    /// Known infimum, when available.
    pub f_low: Option<f64>,
    /// Known Lipschitz constant of the gradient, when available.
    pub lipschitz: Option<f64>,
    objective: ObjectiveFn,
    gradient: Option<GradientFn>,
}

impl TestProblem {
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    /// Clones the objective for handing to an oracle.
    pub fn objective(&self) -> ObjectiveFn {
        self.objective.clone()
    }

    /// Analytic gradient, available for the quadratics.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.gradient.as_ref().map(|g| g(x))
    }

    pub fn has_known_constants(&self) -> bool {
        self.f_low.is_some() && self.lipschitz.is_some() && self.gradient.is_some()
    }
}

impl std::fmt::Debug for TestProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestProblem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

/// Convex diagonal quadratic `f(x) = 1/2 sum_i w_i x_i^2`.
fn diag_quadratic(name: &'static str, weights: Vec<f64>, x0: Vec<f64>) -> TestProblem {
    assert_eq!(weights.len(), x0.len());
    let lipschitz = weights.iter().cloned().fold(0.0, f64::max);
    let w = weights.clone();
    let objective: ObjectiveFn =
        Arc::new(move |x: &[f64]| 0.5 * x.iter().zip(&w).map(|(xi, wi)| wi * xi * xi).sum::<f64>());
    let gradient: GradientFn =
        Arc::new(move |x: &[f64]| x.iter().zip(&weights).map(|(xi, wi)| wi * xi).collect());
    TestProblem {
        name,
        dim: x0.len(),
        x0,
        f_low: Some(0.0),
        lipschitz: Some(lipschitz),
        objective,
        gradient: Some(gradient),
    }
}

/// General quadratic `f(x) = 1/2 x'Ax + b'x + c` given row-major `a`.
fn dense_quadratic(
    name: &'static str,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: f64,
    x0: Vec<f64>,
    lipschitz: f64,
    f_low: f64,
) -> TestProblem {
    let n = b.len();
    let a2 = a.clone();
    let b2 = b.clone();
    let objective: ObjectiveFn = Arc::new(move |x: &[f64]| {
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += x[i] * a[i][j] * x[j];
            }
        }
        0.5 * q + b.iter().zip(x).map(|(bi, xi)| bi * xi).sum::<f64>() + c
    });
    let gradient: GradientFn = Arc::new(move |x: &[f64]| {
        (0..n)
            .map(|i| (0..n).map(|j| a2[i][j] * x[j]).sum::<f64>() + b2[i])
            .collect()
    });
    TestProblem {
        name,
        dim: n,
        x0,
        f_low: Some(f_low),
        lipschitz: Some(lipschitz),
        objective,
        gradient: Some(gradient),
    }
}

fn plain(
    name: &'static str,
    x0: Vec<f64>,
    f_low: Option<f64>,
    objective: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
) -> TestProblem {
    TestProblem {
        name,
        dim: x0.len(),
        x0,
        f_low,
        lipschitz: None,
        objective: Arc::new(objective),
        gradient: None,
    }
}

/// Geometrically spaced weights from 1 to `cond`.
fn spread_weights(n: usize, cond: f64) -> Vec<f64> {
    if n == 1 {
        return vec![cond];
    }
    (0..n)
        .map(|i| cond.powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

fn rosenbrock_start(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect()
}

fn powell_singular(x: &[f64]) -> f64 {
    x.chunks_exact(4)
        .map(|c| {
            (c[0] + 10.0 * c[1]).powi(2)
                + 5.0 * (c[2] - c[3]).powi(2)
                + (c[1] - 2.0 * c[2]).powi(4)
                + 10.0 * (c[0] - c[3]).powi(4)
        })
        .sum()
}

fn powell_start(n: usize) -> Vec<f64> {
    assert_eq!(n % 4, 0);
    (0..n)
        .map(|i| match i % 4 {
            0 => 3.0,
            1 => -1.0,
            2 => 0.0,
            _ => 1.0,
        })
        .collect()
}

fn trigonometric(x: &[f64]) -> f64 {
    let n = x.len();
    let cos_sum: f64 = x.iter().map(|v| v.cos()).sum();
    (0..n)
        .map(|i| {
            let r = n as f64 - cos_sum + (i as f64 + 1.0) * (1.0 - x[i].cos()) - x[i].sin();
            r * r
        })
        .sum()
}

fn zakharov(x: &[f64]) -> f64 {
    let s1: f64 = x.iter().map(|v| v * v).sum();
    let s2: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| 0.5 * (i as f64 + 1.0) * v)
        .sum();
    s1 + s2 * s2 + s2.powi(4)
}

fn dixon_price(x: &[f64]) -> f64 {
    let mut f = (x[0] - 1.0).powi(2);
    for i in 1..x.len() {
        f += (i as f64 + 1.0) * (2.0 * x[i] * x[i] - x[i - 1]).powi(2);
    }
    f
}

fn levy(x: &[f64]) -> f64 {
    let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
    let n = w.len();
    let pi = std::f64::consts::PI;
    let mut f = (pi * w[0]).sin().powi(2);
    for i in 0..n - 1 {
        f += (w[i] - 1.0).powi(2) * (1.0 + 10.0 * (pi * w[i] + 1.0).sin().powi(2));
    }
    f + (w[n - 1] - 1.0).powi(2) * (1.0 + (2.0 * pi * w[n - 1]).sin().powi(2))
}

fn styblinski_tang(x: &[f64]) -> f64 {
    0.5 * x
        .iter()
        .map(|v| v.powi(4) - 16.0 * v * v + 5.0 * v)
        .sum::<f64>()
}

/// The standard 25-problem suite.
pub fn standard_suite() -> Vec<TestProblem> {
    let mut suite = Vec::new();

    // Convex quadratics with varied dimension and conditioning.
    suite.push(diag_quadratic("quad_1d", vec![4.0], vec![3.0]));
    suite.push(diag_quadratic(
        "quad_diag_2",
        vec![1.0, 10.0],
        vec![5.0, 5.0],
    ));
    suite.push(diag_quadratic(
        "quad_diag_5",
        spread_weights(5, 10.0),
        vec![4.0, -3.0, 2.0, -1.0, 2.5],
    ));
    suite.push(diag_quadratic(
        "quad_diag_8",
        spread_weights(8, 100.0),
        vec![2.0; 8],
    ));
    suite.push(diag_quadratic(
        "quad_diag_12",
        spread_weights(12, 100.0),
        (0..12).map(|i| if i % 2 == 0 { 2.0 } else { -2.0 }).collect(),
    ));
    suite.push(diag_quadratic(
        "quad_diag_20",
        spread_weights(20, 1000.0),
        vec![1.0; 20],
    ));
    suite.push(diag_quadratic(
        "quad_diag_30",
        spread_weights(30, 8.0),
        (0..30).map(|i| if i % 2 == 0 { 1.5 } else { -1.5 }).collect(),
    ));
    suite.push(diag_quadratic("sphere_50", vec![2.0; 50], vec![2.0; 50]));
    suite.push(diag_quadratic(
        "sum_squares_15",
        (1..=15).map(|i| 2.0 * i as f64).collect(),
        vec![1.0; 15],
    ));

    // Booth and Matyas are convex quadratics in disguise; keep their
    // constants for the bound checks.
    suite.push(dense_quadratic(
        "booth_2",
        vec![vec![10.0, 8.0], vec![8.0, 10.0]],
        vec![-34.0, -38.0],
        74.0,
        vec![-4.0, 4.0],
        18.0,
        0.0,
    ));
    suite.push(dense_quadratic(
        "matyas_2",
        vec![vec![0.52, -0.48], vec![-0.48, 0.52]],
        vec![0.0, 0.0],
        0.0,
        vec![6.0, -6.0],
        1.0,
        0.0,
    ));

    // Valleys and other classical nonconvex shapes.
    suite.push(plain(
        "rosenbrock_2",
        rosenbrock_start(2),
        Some(0.0),
        rosenbrock,
    ));
    suite.push(plain(
        "rosenbrock_8",
        rosenbrock_start(8),
        Some(0.0),
        rosenbrock,
    ));
    suite.push(plain(
        "powell_singular_4",
        powell_start(4),
        Some(0.0),
        powell_singular,
    ));
    suite.push(plain(
        "powell_singular_16",
        powell_start(16),
        Some(0.0),
        powell_singular,
    ));
    suite.push(plain(
        "trigonometric_12",
        vec![1.0 / 12.0; 12],
        Some(0.0),
        trigonometric,
    ));
    suite.push(plain("beale_2", vec![1.0, 1.0], Some(0.0), |x| {
        (1.5 - x[0] + x[0] * x[1]).powi(2)
            + (2.25 - x[0] + x[0] * x[1] * x[1]).powi(2)
            + (2.625 - x[0] + x[0] * x[1].powi(3)).powi(2)
    }));
    suite.push(plain("himmelblau_2", vec![0.0, 0.0], Some(0.0), |x| {
        (x[0] * x[0] + x[1] - 11.0).powi(2) + (x[0] + x[1] * x[1] - 7.0).powi(2)
    }));
    suite.push(plain(
        "six_hump_camel_2",
        vec![-1.5, 1.0],
        Some(-1.0316284534898774),
        |x| {
            let (a, b) = (x[0], x[1]);
            (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a
                + a * b
                + (-4.0 + 4.0 * b * b) * b * b
        },
    ));
    suite.push(plain("zakharov_5", vec![1.0; 5], Some(0.0), zakharov));
    suite.push(plain("zakharov_16", vec![1.0; 16], Some(0.0), zakharov));
    suite.push(plain("dixon_price_10", vec![2.0; 10], Some(0.0), dixon_price));
    suite.push(plain("levy_8", vec![0.0; 8], Some(0.0), levy));
    suite.push(plain(
        "styblinski_tang_3",
        vec![0.0; 3],
        Some(-39.16616570377142 * 3.0),
        styblinski_tang,
    ));
    suite.push(plain(
        "trid_10",
        vec![0.0; 10],
        // f_low = -n (n+4) (n-1) / 6 for the Trid function.
        Some(-10.0 * 14.0 * 9.0 / 6.0),
        |x| {
            let a: f64 = x.iter().map(|v| (v - 1.0) * (v - 1.0)).sum();
            let b: f64 = x.windows(2).map(|w| w[0] * w[1]).sum();
            a - b
        },
    ));

    suite
}
