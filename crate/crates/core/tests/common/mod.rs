//! Helpers shared by the integration tests. The finite-difference gradient
//! here is the independent oracle the analytic gradients are checked
//! against; it must stay independent of the library's own code paths.

/// Central-difference gradient of `f` at `x` with per-call step
/// `h = scale * max(1, |x|)`.
pub fn central_difference_gradient(
    f: impl Fn(&[f64]) -> f64,
    x: &[f64],
    scale: f64,
) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let h = scale * norm.max(1.0);
    (0..x.len())
        .map(|j| {
            let mut hi = x.to_vec();
            let mut lo = x.to_vec();
            hi[j] += h;
            lo[j] -= h;
            (f(&hi) - f(&lo)) / (2.0 * h)
        })
        .collect()
}

/// Largest per-component deviation, relative to the gradient norm.
pub fn max_relative_deviation(analytic: &[f64], numeric: &[f64]) -> f64 {
    let norm = analytic.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / norm)
        .fold(0.0, f64::max)
}

/// Small deterministic generator for test data (splitmix64 bits mapped to
/// [-1, 1)).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (self.unit() + 1.0) / 2.0 * (hi - lo)
    }

    pub fn vector(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.range(lo, hi)).collect()
    }
}
