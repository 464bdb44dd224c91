//! Empirical convergence-rate estimation from recorded trajectories.
//!
//! A geometrically converging run satisfies ‖x_k − x*‖ ≤ c·ρᵏ; fitting a line
//! to log-error versus iteration recovers (ρ, c) so certified rates can be
//! cross-checked against observed behavior.

use crate::error::{Error, Result};
use crate::optimizers::Trajectory;
use crate::smallmat::Vector;

/// Iterates excluded from the head of the fit window (initial transient).
pub const FIT_SKIP: usize = 3;
/// Minimum usable points for a meaningful fit.
pub const FIT_MIN_POINTS: usize = 5;
/// Absolute error floor; errors below it are floating-point noise.
pub const FIT_ABS_FLOOR: f64 = 1e-12;

/// Result of the log-linear fit: per-step contraction factor, envelope
/// constant extrapolated to k = 0, the index window used, and the RMS residual
/// of the fit in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rho_emp: f64,
    pub c_emp: f64,
    /// Half-open index range [start, end) of the iterates used.
    pub fit_window: (usize, usize),
    pub residual: f64,
}

/// Least-squares fit of log‖x_k − x*‖ against k.
///
/// The window starts after the initial transient (first 3 iterates) and ends
/// at the first iterate whose error falls below
/// max(1e-12, 100·ε_machine·‖x₀ − x*‖), where numerical noise would corrupt
/// the slope. Fewer than 5 usable points — e.g. a run that converged at the
/// seeds — is a degenerate-fit error.
pub fn empirical_rate(traj: &Trajectory, x_star: &Vector) -> Result<RateEstimate> {
    let errors = traj.errors_to(x_star);
    if errors.is_empty() {
        return Err(Error::DegenerateFit("empty trajectory".into()));
    }
    let floor = FIT_ABS_FLOOR.max(100.0 * f64::EPSILON * errors[0]);
    let start = FIT_SKIP;
    let mut end = start;
    while end < errors.len() && errors[end].is_finite() && errors[end] > floor {
        end += 1;
    }
    let n = end.saturating_sub(start);
    if n < FIT_MIN_POINTS {
        return Err(Error::DegenerateFit(format!(
            "only {} usable iterates above the error floor {:.3e} (need {})",
            n, floor, FIT_MIN_POINTS
        )));
    }
    let ks: Vec<f64> = (start..end).map(|k| k as f64).collect();
    let ys: Vec<f64> = errors[start..end].iter().map(|e| e.ln()).collect();
    let nf = n as f64;
    let k_mean = ks.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (k, y) in ks.iter().zip(&ys) {
        sxy += (k - k_mean) * (y - y_mean);
        sxx += (k - k_mean) * (k - k_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * k_mean;
    let mut ss = 0.0;
    for (k, y) in ks.iter().zip(&ys) {
        let r = y - (intercept + slope * k);
        ss += r * r;
    }
    Ok(RateEstimate {
        rho_emp: slope.exp(),
        c_emp: intercept.exp(),
        fit_window: (start, end),
        residual: (ss / nf).sqrt(),
    })
}
