//! Numerical toolkit for adaptive fractional-order gradient methods.
//!
//! The crate provides, in dependency order:
//!
//! - [`smallmat`]: dense vectors, small matrices, and a symmetric eigensolver
//!   sized for the ≤ 6×6 problems the certificate machinery produces;
//! - [`objectives`]: smooth strongly convex test objectives (quadratics and
//!   scalar least-squares regression) with analytic gradients, curvature
//!   bounds, and co-coercivity utilities;
//! - [`optimizers`]: fixed-step baselines (gradient descent, heavy-ball,
//!   Nesterov), the unclamped fractional-order method, and the clamped
//!   adaptive variants in plain and accelerated form, all recording full
//!   trajectories;
//! - [`certificates`]: linear-matrix-inequality certificates of R-linear
//!   convergence for the adaptive methods — closed form for the plain method,
//!   grid-plus-bisection search and per-trajectory Lyapunov descent checks for
//!   the accelerated one, with TOML (de)serialization;
//! - [`harness`]: scenario files, benchmark execution, empirical rate fits,
//!   parameter sweeps, dataset synthesis, and CSV/TOML export.
//!
//! Everything is deterministic: fixed seeds, ordered maps, and sequential
//! reductions, so repeated runs produce bit-identical artifacts.

pub mod certificates;
pub mod error;
pub mod harness;
pub mod objectives;
pub mod optimizers;
pub mod smallmat;

pub use error::{Error, Result};
