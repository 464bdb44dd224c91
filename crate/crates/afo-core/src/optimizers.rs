//! Step rules and the iteration driver for the six first-order methods: plain
//! gradient descent, Heavy-ball, Nesterov, the unclamped fractional-order step,
//! and the two adaptive fractional-order methods (plain and accelerated).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objectives::AnyObjective;
use crate::smallmat::Vector;

/// Which update rule drives the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Gd,
    HeavyBall,
    Nesterov,
    Fogd,
    Afogd,
    Afoagd,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Gd,
        Method::HeavyBall,
        Method::Nesterov,
        Method::Fogd,
        Method::Afogd,
        Method::Afoagd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gd => "gd",
            Method::HeavyBall => "heavy_ball",
            Method::Nesterov => "nesterov",
            Method::Fogd => "fogd",
            Method::Afogd => "afogd",
            Method::Afoagd => "afoagd",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "gd" => Ok(Method::Gd),
            "heavy_ball" => Ok(Method::HeavyBall),
            "nesterov" => Ok(Method::Nesterov),
            "fogd" => Ok(Method::Fogd),
            "afogd" => Ok(Method::Afogd),
            "afoagd" => Ok(Method::Afoagd),
            other => Err(Error::InvalidConfig(format!(
                "unknown method '{}' (expected one of gd, heavy_ball, nesterov, fogd, afogd, afoagd)",
                other
            ))),
        }
    }
}

/// Full parameterization of a run. Step functions read only the fields their
/// rule uses; `validate` is enforced by [`run`], not by the individual steps,
/// so degenerate settings (e.g. `alpha = 0`) remain usable in unit algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Step scale α.
    pub alpha: f64,
    /// Extrapolation weight η (Nesterov and the accelerated adaptive method).
    pub eta: f64,
    /// Momentum weight γ (Heavy-ball).
    pub gamma: f64,
    /// Fractional order μ ∈ (0, 2).
    pub mu: f64,
    /// Regularizer δ > 0 inside the fractional multiplier.
    pub delta: f64,
    /// Lower clamp bound 0 < c1.
    pub c1: f64,
    /// Upper clamp bound c2 ≥ c1.
    pub c2: f64,
    /// Gradient-norm stopping tolerance ε.
    pub epsilon: f64,
    /// Maximum number of steps taken after the two seed iterates.
    pub k_max: usize,
}

impl OptimizerConfig {
    pub fn new(method: Method) -> Self {
        OptimizerConfig {
            method,
            alpha: 0.1,
            eta: 0.0,
            gamma: 0.0,
            mu: 1.0,
            delta: 1e-4,
            c1: 1.0,
            c2: 1.0,
            epsilon: 1e-8,
            k_max: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn bad(msg: String) -> Result<()> {
            Err(Error::InvalidConfig(msg))
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return bad(format!("alpha must be finite and > 0, got {}", self.alpha));
        }
        if !(self.eta.is_finite() && self.eta >= 0.0) {
            return bad(format!("eta must be finite and >= 0, got {}", self.eta));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad(format!("gamma must be finite and >= 0, got {}", self.gamma));
        }
        if !(self.mu.is_finite() && self.mu > 0.0 && self.mu < 2.0) {
            return bad(format!("mu must lie in (0, 2), got {}", self.mu));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad(format!("delta must be finite and > 0, got {}", self.delta));
        }
        if !(self.c1.is_finite() && self.c2.is_finite() && self.c1 > 0.0 && self.c1 <= self.c2) {
            return bad(format!(
                "clamp bounds need 0 < c1 <= c2 < inf, got c1={}, c2={}",
                self.c1, self.c2
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad(format!("epsilon must be finite and > 0, got {}", self.epsilon));
        }
        if self.k_max < 1 {
            return bad("k_max must be at least 1".into());
        }
        Ok(())
    }
}

/// Rolling iteration state: the two most recent iterates, plus the previous
/// extrapolated point for the accelerated adaptive method.
#[derive(Debug, Clone)]
pub struct OptimizerState {
    pub x_prev: Vector,
    pub x_cur: Vector,
    /// y_{k−1}; only the accelerated adaptive method reads or maintains it.
    pub y_prev: Option<Vector>,
    pub k: usize,
}

impl OptimizerState {
    pub fn new(x_prev: Vector, x_cur: Vector, y_prev: Option<Vector>) -> Result<Self> {
        if x_cur.dim() != x_prev.dim() {
            return Err(Error::DimensionMismatch {
                expected: x_prev.dim(),
                got: x_cur.dim(),
            });
        }
        if let Some(y) = &y_prev {
            if y.dim() != x_prev.dim() {
                return Err(Error::DimensionMismatch {
                    expected: x_prev.dim(),
                    got: y.dim(),
                });
            }
        }
        Ok(OptimizerState {
            x_prev,
            x_cur,
            y_prev,
            k: 1,
        })
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    GradientTolerance,
    MaxIterations,
    NonFinite,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::GradientTolerance => "gradient_tolerance",
            StopReason::MaxIterations => "max_iterations",
            StopReason::NonFinite => "non_finite",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<StopReason> {
        match s {
            "gradient_tolerance" => Ok(StopReason::GradientTolerance),
            "max_iterations" => Ok(StopReason::MaxIterations),
            "non_finite" => Ok(StopReason::NonFinite),
            other => Err(Error::Parse(format!("unknown stop reason '{}'", other))),
        }
    }
}

/// Complete record of a run: every iterate including the two seeds, with the
/// objective value, gradient norm, and applied step multiplier at each one.
/// All lists share length; entries are finite unless `stop_reason` is
/// `NonFinite`, in which case the offending iterate is the last entry.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub iterates: Vec<Vector>,
    pub values: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub multipliers: Vec<f64>,
    pub stop_reason: StopReason,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }

    pub fn final_iterate(&self) -> &Vector {
        self.iterates.last().expect("trajectory holds the seeds")
    }

    /// ‖x_k − x*‖₂ for every recorded iterate.
    pub fn errors_to(&self, x_star: &Vector) -> Vec<f64> {
        self.iterates.iter().map(|x| x.sub(x_star).norm2()).collect()
    }

    /// Index of the first iterate with ‖x_k − x*‖₂ < tol, if any.
    pub fn first_error_below(&self, x_star: &Vector, tol: f64) -> Option<usize> {
        self.errors_to(x_star).iter().position(|&e| e < tol)
    }
}

/// The pure fractional step multiplier (‖Δ‖₂ + δ)^{1−μ}.
///
/// δ > 0 keeps the base strictly positive, so the power is finite for every
/// μ ∈ (0, 2); the result is strictly positive.
pub fn fractional_multiplier(step_norm: f64, delta: f64, mu: f64) -> f64 {
    (step_norm + delta).powf(1.0 - mu)
}

/// Clamp a raw fractional multiplier into [c1, c2] and report the scaling
/// factor β = effective / raw that realizes the clamp.
///
/// The raw value is kept untouched whenever it already lies in the band, so
/// fractional-memory behavior is preserved maximally; outside the band it is
/// projected onto the nearest bound.
pub fn adaptive_multiplier(raw: f64, c1: f64, c2: f64) -> (f64, f64) {
    let effective = raw.clamp(c1, c2);
    (effective, effective / raw)
}

fn extrapolate(x_cur: &Vector, x_prev: &Vector, eta: f64) -> Vector {
    x_cur.add(&x_cur.sub(x_prev).scale(eta))
}

/// x_{k+1} = x_k − α∇f(x_k).
pub fn step_gd(obj: &AnyObjective, state: &OptimizerState, config: &OptimizerConfig) -> Result<Vector> {
    let g = obj.gradient(&state.x_cur)?;
    Ok(state.x_cur.sub(&g.scale(config.alpha)))
}

/// x_{k+1} = x_k + γ(x_k − x_{k−1}) − α∇f(x_k).
pub fn step_heavy_ball(
    obj: &AnyObjective,
    state: &OptimizerState,
    config: &OptimizerConfig,
) -> Result<Vector> {
    let g = obj.gradient(&state.x_cur)?;
    let momentum = state.x_cur.sub(&state.x_prev).scale(config.gamma);
    Ok(state.x_cur.add(&momentum).sub(&g.scale(config.alpha)))
}

/// y_k = x_k + η(x_k − x_{k−1}); x_{k+1} = y_k − α∇f(y_k).
pub fn step_nesterov(
    obj: &AnyObjective,
    state: &OptimizerState,
    config: &OptimizerConfig,
) -> Result<Vector> {
    let y = extrapolate(&state.x_cur, &state.x_prev, config.eta);
    let g = obj.gradient(&y)?;
    Ok(y.sub(&g.scale(config.alpha)))
}

/// x_{k+1} = x_k − α∇f(x_k)·(‖x_k − x_{k−1}‖₂ + δ)^{1−μ}, with no clamping;
/// for 1 < μ < 2 the multiplier blows up near flat stretches and the method
/// may legitimately diverge.
pub fn step_fogd(
    obj: &AnyObjective,
    state: &OptimizerState,
    config: &OptimizerConfig,
) -> Result<(Vector, f64)> {
    let raw = fractional_multiplier(
        state.x_cur.sub(&state.x_prev).norm2(),
        config.delta,
        config.mu,
    );
    let g = obj.gradient(&state.x_cur)?;
    Ok((state.x_cur.sub(&g.scale(config.alpha * raw)), raw))
}

/// x_{k+1} = x_k − α·eff·∇f(x_k) with eff = clamp((‖x_k − x_{k−1}‖₂ + δ)^{1−μ}, c1, c2).
/// Returns the next iterate and the applied (clamped) multiplier.
pub fn step_afogd(
    obj: &AnyObjective,
    state: &OptimizerState,
    config: &OptimizerConfig,
) -> Result<(Vector, f64)> {
    let raw = fractional_multiplier(
        state.x_cur.sub(&state.x_prev).norm2(),
        config.delta,
        config.mu,
    );
    let (eff, _beta) = adaptive_multiplier(raw, config.c1, config.c2);
    let g = obj.gradient(&state.x_cur)?;
    Ok((state.x_cur.sub(&g.scale(config.alpha * eff)), eff))
}

/// y_k = x_k + η(x_k − x_{k−1});
/// x_{k+1} = y_k − α·eff·∇f(y_k) with eff = clamp((‖y_k − y_{k−1}‖₂ + δ)^{1−μ}, c1, c2).
/// Returns (x_{k+1}, y_k, eff).
pub fn step_afoagd(
    obj: &AnyObjective,
    state: &OptimizerState,
    config: &OptimizerConfig,
) -> Result<(Vector, Vector, f64)> {
    let y_prev = state.y_prev.as_ref().ok_or_else(|| {
        Error::InvalidConfig("accelerated adaptive step requires an initialized y_prev".into())
    })?;
    let y = extrapolate(&state.x_cur, &state.x_prev, config.eta);
    let raw = fractional_multiplier(y.sub(y_prev).norm2(), config.delta, config.mu);
    let (eff, _beta) = adaptive_multiplier(raw, config.c1, config.c2);
    let g = obj.gradient(&y)?;
    let x_next = y.sub(&g.scale(config.alpha * eff));
    Ok((x_next, y, eff))
}

/// One step of whichever method the config selects.
/// Returns (x_next, y_k if the method forms one, applied multiplier).
fn advance(
    obj: &AnyObjective,
    state: &OptimizerState,
    config: &OptimizerConfig,
) -> Result<(Vector, Option<Vector>, f64)> {
    match config.method {
        Method::Gd => Ok((step_gd(obj, state, config)?, None, 1.0)),
        Method::HeavyBall => Ok((step_heavy_ball(obj, state, config)?, None, 1.0)),
        Method::Nesterov => Ok((step_nesterov(obj, state, config)?, None, 1.0)),
        Method::Fogd => {
            let (x, raw) = step_fogd(obj, state, config)?;
            Ok((x, None, raw))
        }
        Method::Afogd => {
            let (x, eff) = step_afogd(obj, state, config)?;
            Ok((x, None, eff))
        }
        Method::Afoagd => {
            let (x, y, eff) = step_afoagd(obj, state, config)?;
            Ok((x, Some(y), eff))
        }
    }
}

/// Drive a full run: record the seeds, then step until the gradient-norm test
/// passes, the step budget is exhausted, or an iterate goes non-finite.
///
/// The stopping test reads ‖∇f(x_k)‖₂, except for the accelerated adaptive
/// method which tests ‖∇f(y_k)‖₂ at the freshly extrapolated point, matching
/// each algorithm's loop condition. `y0` is required exactly when the method
/// is the accelerated one and ignored otherwise. Seed rows record multiplier 1
/// (no step produced them).
pub fn run(
    obj: &AnyObjective,
    config: &OptimizerConfig,
    x0: &Vector,
    x1: &Vector,
    y0: Option<&Vector>,
) -> Result<Trajectory> {
    config.validate()?;
    if config.method == Method::Afoagd && y0.is_none() {
        return Err(Error::InvalidConfig(
            "method afoagd requires the y0 seed".into(),
        ));
    }
    for (name, v) in [("x0", x0), ("x1", x1)] {
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!("seed {} must be finite", name)));
        }
        if v.dim() != obj.dim() {
            return Err(Error::DimensionMismatch {
                expected: obj.dim(),
                got: v.dim(),
            });
        }
    }
    if let Some(y) = y0 {
        if !y.is_finite() {
            return Err(Error::InvalidInput("seed y0 must be finite".into()));
        }
        if y.dim() != obj.dim() {
            return Err(Error::DimensionMismatch {
                expected: obj.dim(),
                got: y.dim(),
            });
        }
    }

    let y_prev = if config.method == Method::Afoagd {
        y0.cloned()
    } else {
        None
    };
    let mut state = OptimizerState::new(x0.clone(), x1.clone(), y_prev)?;

    let mut traj = Trajectory {
        iterates: Vec::with_capacity(config.k_max + 2),
        values: Vec::with_capacity(config.k_max + 2),
        grad_norms: Vec::with_capacity(config.k_max + 2),
        multipliers: Vec::with_capacity(config.k_max + 2),
        stop_reason: StopReason::MaxIterations,
    };
    let record = |traj: &mut Trajectory, x: &Vector, mult: f64| -> Result<bool> {
        let value = obj.value(x)?;
        let grad_norm = obj.gradient(x)?.norm2();
        traj.iterates.push(x.clone());
        traj.values.push(value);
        traj.grad_norms.push(grad_norm);
        traj.multipliers.push(mult);
        Ok(x.is_finite() && value.is_finite() && grad_norm.is_finite())
    };

    for seed in [x0, x1] {
        if !record(&mut traj, seed, 1.0)? {
            traj.stop_reason = StopReason::NonFinite;
            return Ok(traj);
        }
    }

    let mut steps = 0;
    loop {
        let stop_norm = if config.method == Method::Afoagd {
            let y = extrapolate(&state.x_cur, &state.x_prev, config.eta);
            obj.gradient(&y)?.norm2()
        } else {
            *traj.grad_norms.last().expect("seeds recorded")
        };
        if stop_norm < config.epsilon {
            traj.stop_reason = StopReason::GradientTolerance;
            break;
        }
        if steps == config.k_max {
            traj.stop_reason = StopReason::MaxIterations;
            break;
        }
        let (x_next, y_next, mult) = advance(obj, &state, config)?;
        steps += 1;
        let finite = record(&mut traj, &x_next, mult)?;
        state.x_prev = std::mem::replace(&mut state.x_cur, x_next);
        if let Some(y) = y_next {
            state.y_prev = Some(y);
        }
        state.k += 1;
        if !finite {
            traj.stop_reason = StopReason::NonFinite;
            break;
        }
    }
    Ok(traj)
}
