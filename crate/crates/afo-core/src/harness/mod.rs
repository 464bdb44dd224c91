//! Benchmark harness: scenario execution, rate estimation, parameter sweeps,
//! dataset synthesis, and artifact export.
//!
//! A [`Scenario`] describes one objective and several optimizer
//! configurations; [`run_scenario`] executes every method from shared seeds
//! and produces a [`RunReport`] with per-method errors, empirical rates, and —
//! when the scenario carries candidate certificates — per-candidate
//! feasibility slack and trajectory-level Lyapunov descent checks.

pub mod dataset;
pub mod export;
pub mod rate;
pub mod scenario;

use std::path::Path;

pub use dataset::{generate_regression_dataset, Lcg64};
pub use rate::{empirical_rate, RateEstimate};
pub use scenario::{
    CandidateSpec, CertificateSpec, GenerateSpec, MethodSpec, ObjectiveSpec, OutputSpec, Scenario,
    SeedSpec, StopSpec,
};

use crate::certificates::{
    certificate_slack, check_certificate_pair, verify_accelerated_descent, CertCase, Certificate,
    CertificatePair, ProblemParams, DEFAULT_PRINTED_TOL, DEFAULT_SYNTHETIC_TOL,
};
use crate::error::{Error, Result};
use crate::objectives::AnyObjective;
use crate::optimizers::{run, Method, OptimizerConfig, StopReason, Trajectory};
use crate::smallmat::{SymMatrix, Vector};

/// Error threshold used for the "iterations to reach tolerance" report column.
pub const REPORT_ERROR_TOL: f64 = 1e-6;

/// Built-in scenario: plain adaptive method versus fixed-step baselines on a
/// well-conditioned diagonal quadratic.
pub const SIM1_SCENARIO: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/sim1.toml"));
/// Built-in scenario: accelerated adaptive method versus momentum baselines on
/// an ill-conditioned quadratic, with candidate certificates to audit.
pub const SIM2_SCENARIO: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/sim2.toml"));
/// Built-in scenario: accelerated adaptive method versus Nesterov on a
/// synthesized noisy-line least-squares problem.
pub const SIM3_SCENARIO: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/sim3.toml"));

/// Command-line-level overrides applied on top of a scenario file. `method`
/// filters to entries whose label or algorithm name matches; numeric fields
/// replace the corresponding configuration value for every executed method.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub method: Option<String>,
    pub alpha: Option<f64>,
    pub eta: Option<f64>,
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub epsilon: Option<f64>,
    pub k_max: Option<usize>,
    pub x0: Option<Vec<f64>>,
    pub x1: Option<Vec<f64>>,
    pub y0: Option<Vec<f64>>,
}

/// One executed method: its resolved configuration, full trajectory, distance
/// of the last iterate to the minimizer, the first index whose error dropped
/// below [`REPORT_ERROR_TOL`], and the empirical rate fit (when well-posed).
#[derive(Debug, Clone)]
pub struct MethodResult {
    pub label: String,
    pub config: OptimizerConfig,
    pub trajectory: Trajectory,
    pub final_error: f64,
    pub iterations_to_tol: Option<usize>,
    pub rate: Option<RateEstimate>,
}

/// Feasibility audit of one named candidate certificate: the maximum
/// eigenvalue of its inequality matrix under each ψ-case (≤ 0 means the case
/// holds exactly; positive values measure the failure).
#[derive(Debug, Clone)]
pub struct CandidateVerdict {
    pub label: String,
    pub rho_sq: f64,
    pub h: f64,
    pub nonneg_slack: f64,
    pub neg_slack: f64,
}

/// One assignment of candidates to ψ-cases, checked two ways: the matrix
/// inequalities at the loose printed tolerance, and Lyapunov descent along the
/// actually executed trajectory.
#[derive(Debug, Clone)]
pub struct PairingVerdict {
    pub nonneg_label: String,
    pub neg_label: String,
    pub lmi_valid_printed_tol: bool,
    pub descent_steps: usize,
    pub descent_violations: usize,
    pub descent_worst_slack: f64,
}

/// Certificate section of a run report.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub params: ProblemParams,
    pub candidates: Vec<CandidateVerdict>,
    pub pairings: Vec<PairingVerdict>,
    /// Worst (largest) rate among the candidates — what the set certifies if
    /// every case is covered.
    pub certified_rate: Option<f64>,
}

/// Everything a scenario run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: String,
    pub x_star: Vector,
    pub f_star: f64,
    pub methods: Vec<MethodResult>,
    pub certificates: Option<CertificateReport>,
    /// CSV of the synthesized dataset when the objective was generated.
    pub dataset_csv: Option<String>,
}

fn apply_overrides(cfg: &mut OptimizerConfig, ov: &Overrides) {
    if let Some(v) = ov.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = ov.eta {
        cfg.eta = v;
    }
    if let Some(v) = ov.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = ov.mu {
        cfg.mu = v;
    }
    if let Some(v) = ov.delta {
        cfg.delta = v;
    }
    if let Some(v) = ov.c1 {
        cfg.c1 = v;
    }
    if let Some(v) = ov.c2 {
        cfg.c2 = v;
    }
    if let Some(v) = ov.epsilon {
        cfg.epsilon = v;
    }
    if let Some(v) = ov.k_max {
        cfg.k_max = v;
    }
}

/// Execute every (selected) method of a scenario from its shared seeds.
/// `base_dir` anchors relative dataset paths, normally the scenario file's
/// directory.
pub fn run_scenario(sc: &Scenario, base_dir: &Path, ov: &Overrides) -> Result<RunReport> {
    let obj = sc.build_objective(base_dir)?;
    let x_star = obj.minimizer()?;
    let f_star = obj.value(&x_star)?;

    let selected: Vec<(&String, &MethodSpec)> = sc
        .methods
        .iter()
        .filter(|(label, spec)| {
            ov.method
                .as_deref()
                .map_or(true, |want| want == label.as_str() || want == spec.method)
        })
        .collect();
    if selected.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "no scenario method matches {:?}",
            ov.method.as_deref().unwrap_or("<none>")
        )));
    }

    let x0 = Vector::new(ov.x0.clone().unwrap_or_else(|| sc.seeds.x0.clone()));
    let x1 = Vector::new(ov.x1.clone().unwrap_or_else(|| sc.seeds.x1.clone()));

    let mut methods = Vec::with_capacity(selected.len());
    for (label, spec) in selected {
        let mut cfg = spec.to_config()?;
        cfg.epsilon = sc.stop.epsilon;
        cfg.k_max = sc.stop.k_max;
        apply_overrides(&mut cfg, ov);
        let y0 = if cfg.method == Method::Afoagd {
            Some(Vector::new(
                ov.y0
                    .clone()
                    .or_else(|| sc.seeds.y0.clone())
                    .unwrap_or_else(|| x1.as_slice().to_vec()),
            ))
        } else {
            None
        };
        let trajectory = run(&obj, &cfg, &x0, &x1, y0.as_ref())?;
        let final_error = trajectory.final_iterate().sub(&x_star).norm2();
        let iterations_to_tol = trajectory.first_error_below(&x_star, REPORT_ERROR_TOL);
        let rate = empirical_rate(&trajectory, &x_star).ok();
        methods.push(MethodResult {
            label: label.clone(),
            config: cfg,
            trajectory,
            final_error,
            iterations_to_tol,
            rate,
        });
    }

    let certificates = match (
        &sc.certificates,
        methods.iter().find(|mr| mr.config.method == Method::Afoagd),
    ) {
        (Some(spec), Some(afoagd)) => Some(certificate_report(
            &obj, spec, afoagd, &x_star, f_star,
        )?),
        _ => None,
    };

    let dataset_csv = match (&sc.objective, &obj) {
        (
            ObjectiveSpec::Regression {
                generate: Some(_), ..
            },
            AnyObjective::Regression(r),
        ) => Some(r.to_csv()),
        _ => None,
    };

    Ok(RunReport {
        scenario: sc.name.clone(),
        x_star,
        f_star,
        methods,
        certificates,
        dataset_csv,
    })
}

fn candidate_certificate(case: CertCase, cand: &CandidateSpec) -> Result<Certificate> {
    if cand.p.len() != 4 {
        return Err(Error::InvalidConfig(format!(
            "candidate certificate weight must be a row-major 2x2 matrix (4 entries), got {}",
            cand.p.len()
        )));
    }
    Ok(Certificate {
        case,
        p: SymMatrix::from_row_major(2, &cand.p)?,
        rho_sq: cand.rho_sq,
        h: cand.h,
    })
}

fn certificate_report(
    obj: &AnyObjective,
    spec: &CertificateSpec,
    afoagd: &MethodResult,
    x_star: &Vector,
    f_star: f64,
) -> Result<CertificateReport> {
    let cfg = &afoagd.config;
    let params = ProblemParams::new(spec.m, spec.l, cfg.alpha, cfg.eta, cfg.c1, cfg.c2)?;

    let mut candidates = Vec::new();
    for (label, cand) in &spec.candidates {
        let nonneg = candidate_certificate(CertCase::AfoagdNonneg, cand)?;
        let neg = candidate_certificate(CertCase::AfoagdNeg, cand)?;
        candidates.push(CandidateVerdict {
            label: label.clone(),
            rho_sq: cand.rho_sq,
            h: cand.h,
            nonneg_slack: certificate_slack(&params, &nonneg)?,
            neg_slack: certificate_slack(&params, &neg)?,
        });
    }

    let mut pairings = Vec::new();
    for (a, cand_a) in &spec.candidates {
        for (b, cand_b) in &spec.candidates {
            if a == b {
                continue;
            }
            let pair = CertificatePair {
                nonneg: candidate_certificate(CertCase::AfoagdNonneg, cand_a)?,
                neg: candidate_certificate(CertCase::AfoagdNeg, cand_b)?,
            };
            let lmi = check_certificate_pair(&params, &pair, DEFAULT_PRINTED_TOL)?;
            let descent = verify_accelerated_descent(
                obj,
                &afoagd.trajectory,
                cfg.eta,
                &pair,
                x_star,
                f_star,
                DEFAULT_SYNTHETIC_TOL,
            )?;
            pairings.push(PairingVerdict {
                nonneg_label: a.clone(),
                neg_label: b.clone(),
                lmi_valid_printed_tol: lmi.valid(),
                descent_steps: descent.steps,
                descent_violations: descent.violations,
                descent_worst_slack: descent.worst_slack,
            });
        }
    }

    let certified_rate = spec
        .candidates
        .values()
        .map(|c| c.rho_sq.sqrt())
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a: f64| a.max(r)))
        });

    Ok(CertificateReport {
        params,
        candidates,
        pairings,
        certified_rate,
    })
}

/// Run the built-in diagonal-quadratic benchmark.
pub fn run_simulation1(ov: &Overrides) -> Result<RunReport> {
    let sc = Scenario::from_toml_str(SIM1_SCENARIO)?;
    run_scenario(&sc, Path::new("."), ov)
}

/// Run the built-in ill-conditioned quadratic benchmark with certificate audit.
pub fn run_simulation2(ov: &Overrides) -> Result<RunReport> {
    let sc = Scenario::from_toml_str(SIM2_SCENARIO)?;
    run_scenario(&sc, Path::new("."), ov)
}

/// Run the built-in noisy-line regression benchmark.
pub fn run_simulation3(ov: &Overrides) -> Result<RunReport> {
    let sc = Scenario::from_toml_str(SIM3_SCENARIO)?;
    run_scenario(&sc, Path::new("."), ov)
}

/// A one-parameter sweep: rerun the scenario once per value with the named
/// configuration field overridden for every method.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: String,
    pub values: Vec<f64>,
}

/// One (value, method) cell of a sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub param: String,
    pub value: f64,
    pub method: String,
    pub final_error: f64,
    pub iterations_to_tol: Option<usize>,
    pub stop_reason: StopReason,
    /// Closed-form certified squared rate for the plain adaptive method on
    /// quadratics; empty when no certificate exists at this configuration.
    pub certified_rho_sq: Option<f64>,
}

const SWEEPABLE: [&str; 8] = ["alpha", "eta", "gamma", "mu", "delta", "c1", "c2", "epsilon"];

fn apply_sweep_value(base: &Overrides, param: &str, value: f64) -> Result<Overrides> {
    let mut ov = base.clone();
    match param {
        "alpha" => ov.alpha = Some(value),
        "eta" => ov.eta = Some(value),
        "gamma" => ov.gamma = Some(value),
        "mu" => ov.mu = Some(value),
        "delta" => ov.delta = Some(value),
        "c1" => ov.c1 = Some(value),
        "c2" => ov.c2 = Some(value),
        "epsilon" => ov.epsilon = Some(value),
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown sweep parameter '{other}' (expected one of {})",
                SWEEPABLE.join(", ")
            )))
        }
    }
    Ok(ov)
}

/// Execute the sweep. Values run concurrently; rows come back grouped by value
/// in the order given, methods in scenario order within each group.
pub fn run_sweep(
    sc: &Scenario,
    base_dir: &Path,
    ov: &Overrides,
    sweep: &SweepSpec,
) -> Result<Vec<SweepRow>> {
    if sweep.values.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one value".into()));
    }
    if let Some(bad) = sweep.values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "sweep values must be finite, got {bad}"
        )));
    }
    let overrides: Vec<Overrides> = sweep
        .values
        .iter()
        .map(|&v| apply_sweep_value(ov, &sweep.parameter, v))
        .collect::<Result<_>>()?;

    let obj = sc.build_objective(base_dir)?;
    let quadratic_bounds = match &obj {
        AnyObjective::Quadratic(q) => Some(q.bounds()),
        AnyObjective::Regression(_) => None,
    };

    let reports: Vec<Result<RunReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = overrides
            .iter()
            .map(|ov_v| scope.spawn(move || run_scenario(sc, base_dir, ov_v)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let mut rows = Vec::new();
    for (value, report) in sweep.values.iter().zip(reports) {
        let report = report?;
        for mr in &report.methods {
            let certified_rho_sq = match (mr.config.method, &quadratic_bounds) {
                (Method::Afogd, Some(bounds)) => ProblemParams::new(
                    bounds.m,
                    bounds.l,
                    mr.config.alpha,
                    0.0,
                    mr.config.c1,
                    mr.config.c2,
                )
                .ok()
                .and_then(|p| crate::certificates::afogd_rate(&p).ok())
                .map(|rb| rb.rho_sq_min),
                _ => None,
            };
            rows.push(SweepRow {
                param: sweep.parameter.clone(),
                value: *value,
                method: mr.label.clone(),
                final_error: mr.final_error,
                iterations_to_tol: mr.iterations_to_tol,
                stop_reason: mr.trajectory.stop_reason,
                certified_rho_sq,
            });
        }
    }
    Ok(rows)
}
