//! Property-based checks of the iteration kernels: the clamp invariant of the
//! adaptive multiplier, the degeneracy lattice collapsing every method onto
//! plain gradient descent, fixed points, and the certified contraction
//! envelope at the maximal step size.

use afo_core::certificates::{afogd_rate, verify_plain_descent, ProblemParams};
use afo_core::objectives::{AnyObjective, QuadraticObjective};
use afo_core::optimizers::{run, Method, OptimizerConfig, StopReason};
use afo_core::smallmat::{SymMatrix, Vector};
use proptest::prelude::*;

/// Random PD quadratic (Hessian eigenvalues λ1, λ2) as an [`AnyObjective`].
fn quadratic(l1: f64, l2: f64, th: f64, b: Vec<f64>) -> AnyObjective {
    let (s, c) = th.sin_cos();
    let q11 = (c * c * l1 + s * s * l2) / 2.0;
    let q22 = (s * s * l1 + c * c * l2) / 2.0;
    let q12 = s * c * (l1 - l2) / 2.0;
    let q = SymMatrix::from_row_major(2, &[q11, q12, q12, q22]).unwrap();
    AnyObjective::Quadratic(QuadraticObjective::new(q, Vector::new(b), 0.0).unwrap())
}

type Instance = (AnyObjective, f64, f64, Vector, Vector);

/// Objective plus its exact curvature interval and two random seed iterates.
fn instance_strategy() -> impl Strategy<Value = Instance> {
    (
        1.0..20.0f64,
        1.0..20.0f64,
        0.0..std::f64::consts::TAU,
        prop::collection::vec(-5.0..5.0f64, 2),
        prop::collection::vec(-5.0..5.0f64, 2),
        prop::collection::vec(-5.0..5.0f64, 2),
    )
        .prop_map(|(l1, l2, th, b, x0, x1)| {
            (
                quadratic(l1, l2, th, b),
                l1.min(l2),
                l1.max(l2),
                Vector::new(x0),
                Vector::new(x1),
            )
        })
}

fn gd_like_config(method: Method, alpha: f64) -> OptimizerConfig {
    let mut cfg = OptimizerConfig::new(method);
    cfg.alpha = alpha;
    cfg.epsilon = 1e-10;
    cfg.k_max = 120;
    cfg
}

/// Max absolute coordinate difference across two trajectories of equal length.
fn trajectory_gap(
    a: &afo_core::optimizers::Trajectory,
    b: &afo_core::optimizers::Trajectory,
) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut worst = 0.0f64;
    for (xa, xb) in a.iterates.iter().zip(&b.iterates) {
        for i in 0..xa.dim() {
            worst = worst.max((xa.get(i) - xb.get(i)).abs());
        }
    }
    worst
}

proptest! {
    // ----- clamp invariant -------------------------------------------------------

    #[test]
    fn adaptive_multiplier_never_leaves_the_clamp_interval(
        (obj, _m, l, x0, x1) in instance_strategy(),
        alpha_frac in 0.05..0.95f64,
        mu in 0.2..1.8f64,
        c1 in 0.2..1.5f64,
        width in 0.0..2.0f64,
        accelerated in any::<bool>(),
        eta in 0.0..0.9f64,
    ) {
        let c2 = c1 + width;
        let method = if accelerated { Method::Afoagd } else { Method::Afogd };
        let mut cfg = gd_like_config(method, alpha_frac * 2.0 / l);
        cfg.mu = mu;
        cfg.delta = 1e-4;
        cfg.c1 = c1;
        cfg.c2 = c2;
        cfg.eta = eta;
        let y0 = x1.clone();
        let traj = run(&obj, &cfg, &x0, &x1, if accelerated { Some(&y0) } else { None }).unwrap();
        // The first two entries are seed placeholders; real step multipliers
        // start at index 2.
        for &eff in &traj.multipliers[2..] {
            prop_assert!(eff.is_finite());
            prop_assert!((c1..=c2).contains(&eff), "multiplier {eff} outside [{c1}, {c2}]");
        }
    }

    // ----- degeneracy lattice -------------------------------------------------------

    #[test]
    fn fractional_order_one_reproduces_gradient_descent(
        (obj, _m, l, x0, x1) in instance_strategy(),
        alpha_frac in 0.05..0.95f64,
        delta in 1e-6..1e-2f64,
    ) {
        let alpha = alpha_frac * 2.0 / l;
        let gd = run(&obj, &gd_like_config(Method::Gd, alpha), &x0, &x1, None).unwrap();
        let mut cfg = gd_like_config(Method::Fogd, alpha);
        cfg.mu = 1.0;
        cfg.delta = delta;
        let fogd = run(&obj, &cfg, &x0, &x1, None).unwrap();
        // (gap + δ)^(1−1) is exactly 1.0, so the trajectories agree bit for bit.
        prop_assert_eq!(trajectory_gap(&gd, &fogd), 0.0);
    }

    #[test]
    fn unit_clamp_window_reproduces_gradient_descent(
        (obj, _m, l, x0, x1) in instance_strategy(),
        alpha_frac in 0.05..0.95f64,
        mu in 0.2..1.8f64,
    ) {
        let alpha = alpha_frac * 2.0 / l;
        let gd = run(&obj, &gd_like_config(Method::Gd, alpha), &x0, &x1, None).unwrap();
        let mut cfg = gd_like_config(Method::Afogd, alpha);
        cfg.mu = mu;
        cfg.c1 = 1.0;
        cfg.c2 = 1.0;
        let afogd = run(&obj, &cfg, &x0, &x1, None).unwrap();
        prop_assert_eq!(trajectory_gap(&gd, &afogd), 0.0);
    }

    #[test]
    fn accelerated_method_without_momentum_reproduces_gradient_descent(
        (obj, _m, l, x0, x1) in instance_strategy(),
        alpha_frac in 0.05..0.95f64,
        mu in 0.2..1.8f64,
    ) {
        let alpha = alpha_frac * 2.0 / l;
        let gd = run(&obj, &gd_like_config(Method::Gd, alpha), &x0, &x1, None).unwrap();
        let mut cfg = gd_like_config(Method::Afoagd, alpha);
        cfg.mu = mu;
        cfg.eta = 0.0;
        cfg.c1 = 1.0;
        cfg.c2 = 1.0;
        let afoagd = run(&obj, &cfg, &x0, &x1, Some(&x1)).unwrap();
        // η = 0 makes the extrapolated point coincide with the iterate (up to
        // the sign of zero), so values agree exactly.
        prop_assert_eq!(trajectory_gap(&gd, &afoagd), 0.0);
    }

    #[test]
    fn momentum_methods_without_momentum_reproduce_gradient_descent(
        (obj, _m, l, x0, x1) in instance_strategy(),
        alpha_frac in 0.05..0.95f64,
    ) {
        let alpha = alpha_frac * 2.0 / l;
        let gd = run(&obj, &gd_like_config(Method::Gd, alpha), &x0, &x1, None).unwrap();
        let hb = run(&obj, &gd_like_config(Method::HeavyBall, alpha), &x0, &x1, None).unwrap();
        let nes = run(&obj, &gd_like_config(Method::Nesterov, alpha), &x0, &x1, None).unwrap();
        // γ and η default to 0 in the base config.
        prop_assert_eq!(trajectory_gap(&gd, &hb), 0.0);
        prop_assert_eq!(trajectory_gap(&gd, &nes), 0.0);
    }

    // ----- fixed point -----------------------------------------------------------

    #[test]
    fn starting_at_the_minimizer_stops_immediately(
        (obj, _m, _l, _x0, _x1) in instance_strategy(),
        method_idx in 0usize..6,
    ) {
        let x_star = obj.minimizer().unwrap();
        let method = Method::ALL[method_idx];
        let mut cfg = gd_like_config(method, 0.05);
        cfg.epsilon = 1e-6;
        cfg.c1 = 0.8;
        cfg.c2 = 1.3;
        cfg.eta = 0.2;
        cfg.gamma = 0.2;
        let traj = run(&obj, &cfg, &x_star, &x_star, Some(&x_star)).unwrap();
        prop_assert_eq!(traj.stop_reason, StopReason::GradientTolerance);
        prop_assert_eq!(traj.len(), 2, "no update step should be taken from the minimizer");
        let err = traj.final_iterate().sub(&x_star).norm2();
        prop_assert!(err == 0.0, "final iterate moved {err} away from the fixed point");
    }

    // ----- certified envelope -----------------------------------------------------

    #[test]
    fn envelope_and_per_step_contraction_hold_at_alpha_max(
        (obj, m, l, x0, _x1) in instance_strategy(),
        mu in 1.1..1.9f64,
    ) {
        let (c1, c2) = (0.8, 1.3);
        let alpha = 2.0 * c1 / ((m + l) * c2);
        let params = ProblemParams::new(m, l, alpha, 0.0, c1, c2).unwrap();
        let bound = afogd_rate(&params).unwrap();
        let rho = bound.rho_sq_min.sqrt();

        // Seed the second iterate with one in-sector step so the envelope
        // calibrated at k = 0 covers every transition.
        let x1 = x0.sub(&obj.gradient(&x0).unwrap().scale(alpha * c1));
        let mut cfg = gd_like_config(Method::Afogd, alpha);
        cfg.mu = mu;
        cfg.delta = 1e-4;
        cfg.c1 = c1;
        cfg.c2 = c2;
        cfg.epsilon = 1e-12;
        cfg.k_max = 300;
        let traj = run(&obj, &cfg, &x0, &x1, None).unwrap();

        let x_star = obj.minimizer().unwrap();
        let errs = traj.errors_to(&x_star);
        let c = errs[0];
        for (k, err) in errs.iter().enumerate() {
            prop_assert!(
                *err <= c * rho.powi(k as i32) + 1e-12,
                "iterate {k}: error {err} above envelope {}", c * rho.powi(k as i32)
            );
        }

        // The same certificate seen per step: squared distance contracts by
        // rho² each update.
        let report = verify_plain_descent(&traj, &x_star, bound.rho_sq_min, 1e-9);
        prop_assert_eq!(report.violations, 0, "worst per-step slack {}", report.worst_slack);
    }
}
