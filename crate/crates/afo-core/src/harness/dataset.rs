//! Deterministic synthetic dataset generation for the regression benchmark.
//!
//! The generator must be bit-reproducible across runs and platforms, so it
//! uses an explicitly specified 64-bit linear congruential generator rather
//! than an external RNG crate whose stream could change between versions.

use crate::error::{Error, Result};
use crate::objectives::RegressionObjective;

/// 64-bit linear congruential generator, multiplier/increment from Knuth's
/// MMIX: state ← state·6364136223846793005 + 1442695040888963407 (mod 2⁶⁴).
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.state
    }

    /// Uniform in (0, 1): the top 53 bits, centered on the bin midpoint so the
    /// value is never exactly 0 (safe to pass to ln).
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }

    /// Standard normal via the Box–Muller transform. Consumes exactly two
    /// uniforms per call and discards the paired sine draw, keeping the
    /// consumption pattern trivially predictable.
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Generate `count` noisy samples of the line y = θ0 + θ1·x with x equally
/// spaced on [0, 4] (the last abscissa forced to exactly 4.0) and independent
/// N(0, noise_scale²) noise. Identical arguments yield bit-identical datasets.
pub fn generate_regression_dataset(
    seed: u64,
    count: usize,
    theta_true: (f64, f64),
    noise_scale: f64,
) -> Result<RegressionObjective> {
    if count < 2 {
        return Err(Error::InvalidInput(format!(
            "dataset needs at least 2 points, got {}",
            count
        )));
    }
    if !(noise_scale.is_finite() && noise_scale >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "noise scale must be finite and >= 0, got {}",
            noise_scale
        )));
    }
    if !(theta_true.0.is_finite() && theta_true.1.is_finite()) {
        return Err(Error::InvalidInput("line coefficients must be finite".into()));
    }
    let mut rng = Lcg64::new(seed);
    let spacing = 4.0 / (count - 1) as f64;
    let samples: Vec<(f64, f64)> = (0..count)
        .map(|i| {
            let x = if i == count - 1 { 4.0 } else { i as f64 * spacing };
            let y = theta_true.0 + theta_true.1 * x + noise_scale * rng.next_gaussian();
            (x, y)
        })
        .collect();
    RegressionObjective::new(&samples)
}
