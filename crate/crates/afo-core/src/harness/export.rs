//! Export of runs to CSV and TOML, plus the inverse parse for trajectories.
//!
//! All floating-point values are written with 17 significant digits so a
//! written file parses back to bit-identical numbers.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::{MethodResult, RunReport, SweepRow, REPORT_ERROR_TOL};
use crate::optimizers::{OptimizerConfig, StopReason, Trajectory};
use crate::smallmat::Vector;

/// Round-trip-safe float formatting (17 significant digits).
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// TOML-safe float: TOML spells the IEEE specials `inf` / `-inf` / `nan`.
fn fmt_toml(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        fmt(v)
    }
}

fn sanitize(token: &str) -> String {
    token
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect()
}

/// Render a trajectory as CSV: one `# key=value ...` settings line, a header,
/// then one row per recorded iterate.
pub fn trajectory_to_csv(
    scenario: &str,
    label: &str,
    cfg: &OptimizerConfig,
    traj: &Trajectory,
) -> String {
    let dim = traj.iterates.first().map_or(0, Vector::dim);
    let mut out = String::new();
    out.push_str(&format!(
        "# scenario={} method={} alpha={} eta={} gamma={} mu={} delta={} c1={} c2={} epsilon={} k_max={} stop_reason={}\n",
        sanitize(scenario),
        sanitize(label),
        fmt(cfg.alpha),
        fmt(cfg.eta),
        fmt(cfg.gamma),
        fmt(cfg.mu),
        fmt(cfg.delta),
        fmt(cfg.c1),
        fmt(cfg.c2),
        fmt(cfg.epsilon),
        cfg.k_max,
        traj.stop_reason.name(),
    ));
    out.push('k');
    for i in 1..=dim {
        out.push_str(&format!(",x{i}"));
    }
    out.push_str(",f,grad_norm,multiplier\n");
    for (k, x) in traj.iterates.iter().enumerate() {
        out.push_str(&k.to_string());
        for v in x.iter() {
            out.push(',');
            out.push_str(&fmt(*v));
        }
        out.push_str(&format!(
            ",{},{},{}\n",
            fmt(traj.values[k]),
            fmt(traj.grad_norms[k]),
            fmt(traj.multipliers[k]),
        ));
    }
    out
}

/// Parse a trajectory CSV produced by [`trajectory_to_csv`]. Returns the
/// trajectory and the settings map from the leading comment line.
pub fn trajectory_from_csv(text: &str) -> Result<(Trajectory, BTreeMap<String, String>)> {
    let mut lines = text.lines();
    let settings_line = lines
        .next()
        .ok_or_else(|| Error::Parse("trajectory csv: empty input".into()))?;
    let body = settings_line
        .strip_prefix("# ")
        .ok_or_else(|| Error::Parse("trajectory csv: missing `# key=value` settings line".into()))?;
    let mut settings = BTreeMap::new();
    for token in body.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or_else(|| {
            Error::Parse(format!("trajectory csv: malformed settings token {token:?}"))
        })?;
        settings.insert(key.to_string(), value.to_string());
    }
    let stop_reason: StopReason = settings
        .get("stop_reason")
        .ok_or_else(|| Error::Parse("trajectory csv: settings lack stop_reason".into()))?
        .parse()?;

    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("trajectory csv: missing header".into()))?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 5 || cols[0] != "k" || cols[cols.len() - 3..] != ["f", "grad_norm", "multiplier"]
    {
        return Err(Error::Parse(format!(
            "trajectory csv: unexpected header {header:?}"
        )));
    }
    let dim = cols.len() - 4;
    for (i, name) in cols[1..=dim].iter().enumerate() {
        if *name != format!("x{}", i + 1) {
            return Err(Error::Parse(format!(
                "trajectory csv: expected column x{}, found {name:?}",
                i + 1
            )));
        }
    }

    let mut traj = Trajectory {
        iterates: Vec::new(),
        values: Vec::new(),
        grad_norms: Vec::new(),
        multipliers: Vec::new(),
        stop_reason,
    };
    for (row_idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Parse(format!(
                "trajectory csv row {row_idx}: expected {} fields, found {}",
                cols.len(),
                fields.len()
            )));
        }
        let k: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("trajectory csv row {row_idx}: bad index")))?;
        if k != row_idx {
            return Err(Error::Parse(format!(
                "trajectory csv row {row_idx}: non-contiguous index {k}"
            )));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Parse(format!("trajectory csv row {row_idx}: bad float {s:?}")))
        };
        let mut coords = Vec::with_capacity(dim);
        for f in &fields[1..=dim] {
            coords.push(parse_f(f)?);
        }
        traj.iterates.push(Vector::new(coords));
        traj.values.push(parse_f(fields[dim + 1])?);
        traj.grad_norms.push(parse_f(fields[dim + 2])?);
        traj.multipliers.push(parse_f(fields[dim + 3])?);
    }
    if traj.iterates.is_empty() {
        return Err(Error::Parse("trajectory csv: no data rows".into()));
    }
    Ok((traj, settings))
}

fn method_section(out: &mut String, mr: &MethodResult) {
    out.push_str(&format!("[methods.{:?}]\n", mr.label));
    out.push_str(&format!("method = {:?}\n", mr.config.method.name()));
    out.push_str(&format!("alpha = {}\n", fmt_toml(mr.config.alpha)));
    out.push_str(&format!("final_error = {}\n", fmt_toml(mr.final_error)));
    if let Some(k) = mr.iterations_to_tol {
        out.push_str(&format!("first_below_error_tol = {k}\n"));
    }
    out.push_str(&format!(
        "stop_reason = {:?}\n",
        mr.trajectory.stop_reason.name()
    ));
    out.push_str(&format!(
        "steps = {}\n",
        mr.trajectory.len().saturating_sub(2)
    ));
    if let Some(rate) = &mr.rate {
        out.push_str(&format!("rho_emp = {}\n", fmt_toml(rate.rho_emp)));
        out.push_str(&format!("c_emp = {}\n", fmt_toml(rate.c_emp)));
        out.push_str(&format!(
            "fit_window = [{}, {}]\n",
            rate.fit_window.0, rate.fit_window.1
        ));
        out.push_str(&format!("fit_residual = {}\n", fmt_toml(rate.residual)));
    }
    out.push('\n');
}

/// Render the whole run as a TOML summary document.
pub fn summary_to_toml(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("scenario = {:?}\n", report.scenario));
    out.push_str(&format!("error_tol = {}\n", fmt_toml(REPORT_ERROR_TOL)));
    let coords: Vec<String> = report.x_star.iter().map(|v| fmt_toml(*v)).collect();
    out.push_str(&format!("x_star = [{}]\n", coords.join(", ")));
    out.push_str(&format!("f_star = {}\n\n", fmt_toml(report.f_star)));
    for mr in &report.methods {
        method_section(&mut out, mr);
    }
    if let Some(cert) = &report.certificates {
        out.push_str("[certificates]\n");
        out.push_str(&format!("m = {}\n", fmt_toml(cert.params.m)));
        out.push_str(&format!("l = {}\n", fmt_toml(cert.params.l)));
        out.push_str(&format!("alpha = {}\n", fmt_toml(cert.params.alpha)));
        out.push_str(&format!("eta = {}\n", fmt_toml(cert.params.eta)));
        out.push_str(&format!("c1 = {}\n", fmt_toml(cert.params.c1)));
        out.push_str(&format!("c2 = {}\n", fmt_toml(cert.params.c2)));
        if let Some(rate) = cert.certified_rate {
            out.push_str(&format!("certified_rate = {}\n", fmt_toml(rate)));
        }
        out.push('\n');
        for cand in &cert.candidates {
            out.push_str(&format!("[certificates.candidates.{:?}]\n", cand.label));
            out.push_str(&format!("rho_sq = {}\n", fmt_toml(cand.rho_sq)));
            out.push_str(&format!("h = {}\n", fmt_toml(cand.h)));
            out.push_str(&format!(
                "nonneg_slack = {}\n",
                fmt_toml(cand.nonneg_slack)
            ));
            out.push_str(&format!("neg_slack = {}\n\n", fmt_toml(cand.neg_slack)));
        }
        for pairing in &cert.pairings {
            out.push_str("[[certificates.pairings]]\n");
            out.push_str(&format!("nonneg = {:?}\n", pairing.nonneg_label));
            out.push_str(&format!("neg = {:?}\n", pairing.neg_label));
            out.push_str(&format!(
                "lmi_valid_printed_tol = {}\n",
                pairing.lmi_valid_printed_tol
            ));
            out.push_str(&format!("descent_steps = {}\n", pairing.descent_steps));
            out.push_str(&format!(
                "descent_violations = {}\n",
                pairing.descent_violations
            ));
            out.push_str(&format!(
                "descent_worst_slack = {}\n\n",
                fmt_toml(pairing.descent_worst_slack)
            ));
        }
    }
    out
}

/// Render sweep rows as CSV. Empty cells mean "not applicable".
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("param,value,method,final_error,iterations_to_tol,stop_reason,certified_rho_sq\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            sanitize(&row.param),
            fmt(row.value),
            sanitize(&row.method),
            fmt(row.final_error),
            row.iterations_to_tol
                .map_or(String::new(), |k| k.to_string()),
            row.stop_reason.name(),
            row.certified_rho_sq.map_or(String::new(), fmt),
        ));
    }
    out
}

/// Write every artifact of a run into `dir`: one trajectory CSV per method,
/// the TOML summary, and the synthesized dataset if the objective was
/// generated. Returns the paths written.
pub fn write_report(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for mr in &report.methods {
        let path = dir.join(format!("trajectory_{}.csv", sanitize(&mr.label)));
        let csv = trajectory_to_csv(&report.scenario, &mr.label, &mr.config, &mr.trajectory);
        std::fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    let summary_path = dir.join("summary.toml");
    std::fs::write(&summary_path, summary_to_toml(report))
        .map_err(|e| Error::io(&summary_path, e))?;
    written.push(summary_path);
    if let Some(dataset_csv) = &report.dataset_csv {
        let data_path = dir.join("dataset.csv");
        std::fs::write(&data_path, dataset_csv).map_err(|e| Error::io(&data_path, e))?;
        written.push(data_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{AnyObjective, QuadraticObjective};
    use crate::optimizers::{run, Method};

    fn small_run() -> (OptimizerConfig, Trajectory) {
        let obj = AnyObjective::Quadratic(
            QuadraticObjective::diagonal(&[2.0, 3.0], &[0.0, 0.0], 3.0).unwrap(),
        );
        let mut cfg = OptimizerConfig::new(Method::Afogd);
        cfg.alpha = 0.2;
        cfg.mu = 1.7;
        cfg.c1 = 0.8;
        cfg.c2 = 1.3;
        let traj = run(
            &obj,
            &cfg,
            &Vector::new(vec![0.1, 0.1]),
            &Vector::new(vec![1.0, 1.0]),
            None,
        )
        .unwrap();
        (cfg, traj)
    }

    #[test]
    fn trajectory_csv_round_trips_bit_exactly() {
        let (cfg, traj) = small_run();
        let csv = trajectory_to_csv("toy", "afogd", &cfg, &traj);
        let (parsed, settings) = trajectory_from_csv(&csv).unwrap();
        assert_eq!(parsed.len(), traj.len());
        assert_eq!(parsed.stop_reason, traj.stop_reason);
        for k in 0..traj.len() {
            for (a, b) in parsed.iterates[k].iter().zip(traj.iterates[k].iter()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
            assert_eq!(parsed.values[k].to_bits(), traj.values[k].to_bits());
            assert_eq!(
                parsed.grad_norms[k].to_bits(),
                traj.grad_norms[k].to_bits()
            );
            assert_eq!(
                parsed.multipliers[k].to_bits(),
                traj.multipliers[k].to_bits()
            );
        }
        assert_eq!(settings["scenario"], "toy");
        assert_eq!(settings["method"], "afogd");
        assert_eq!(settings["alpha"].parse::<f64>().unwrap(), 0.2);
        assert_eq!(settings["stop_reason"], "gradient_tolerance");
    }

    #[test]
    fn malformed_trajectory_csv_is_rejected() {
        assert!(trajectory_from_csv("").is_err());
        assert!(trajectory_from_csv("k,x1,f,grad_norm,multiplier\n0,1,2,3,4\n").is_err());
        let (cfg, traj) = small_run();
        let csv = trajectory_to_csv("toy", "afogd", &cfg, &traj);
        // Drop a field from the first data row.
        let broken: Vec<&str> = csv.lines().collect();
        let mut bad = broken.clone();
        let trimmed = bad[2].rsplit_once(',').unwrap().0.to_string();
        let owned;
        bad[2] = {
            owned = trimmed;
            &owned
        };
        assert!(trajectory_from_csv(&bad.join("\n")).is_err());
    }

    #[test]
    fn sweep_csv_has_stable_shape() {
        let rows = vec![SweepRow {
            param: "alpha".into(),
            value: 0.1,
            method: "gd".into(),
            final_error: 1e-9,
            iterations_to_tol: Some(42),
            stop_reason: StopReason::GradientTolerance,
            certified_rho_sq: None,
        }];
        let csv = sweep_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "param,value,method,final_error,iterations_to_tol,stop_reason,certified_rho_sq"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("alpha,"));
        assert!(row.ends_with("42,gradient_tolerance,"));
    }
}
