//! End-to-end tests of the `afo` binary: exit codes, artifact layout, inline
//! overrides, and agreement with library-level results.

use std::path::{Path, PathBuf};
use std::process::Command;

use afo_core::certificates::{CertCase, Certificate, CertificateDoc, ProblemParams};
use afo_core::smallmat::SymMatrix;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

/// Fresh per-test working directory under the target tmpdir.
fn workdir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    if dir.exists() {
        std::fs::remove_dir_all(&dir).unwrap();
    }
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Run the binary in `dir` with the ambient output-dir variable cleared.
fn afo(dir: &Path, args: &[&str]) -> Out {
    afo_env(dir, args, &[])
}

fn afo_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Out {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_afo"));
    cmd.args(args).current_dir(dir).env_remove("AFO_OUT_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn afo");
    Out {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

// ---------------------------------------------------------------------------
// Global behavior
// ---------------------------------------------------------------------------

#[test]
fn help_exits_zero_without_side_effects() {
    let dir = workdir("help");
    let out = afo(&dir, &["--help"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.contains("Usage: afo"));
    assert!(out.stdout.contains("certify"));
    // No files created by --help.
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 0);
}

#[test]
fn subcommand_help_mentions_env_override() {
    let dir = workdir("help_run");
    let out = afo(&dir, &["run", "--help"]);
    assert_eq!(out.code, 0);
    assert!(
        out.stdout.contains("AFO_OUT_DIR"),
        "output-dir env var must be documented in --help:\n{}",
        out.stdout
    );
    assert!(out.stdout.contains("--seed-x0"));
    assert!(!out.stdout.contains("--gamma"), "gamma is not an exposed flag");
}

#[test]
fn unknown_flag_exits_two() {
    let dir = workdir("unknown_flag");
    let out = afo(&dir, &["run", "sim1", "--definitely-not-a-flag"]);
    assert_eq!(out.code, 2);
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

#[test]
fn run_sim1_exports_artifacts() {
    let dir = workdir("run_sim1");
    let out = afo(&dir, &["run", "sim1", "--out", "arts"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    // The adaptive method reaches the report tolerance at the frozen index.
    assert!(out.stdout.contains("err<1e-6 at k=15"), "stdout: {}", out.stdout);
    // The unclamped method stalls instead of converging.
    assert!(out.stdout.contains("method fogd [fogd]: stop=max_iterations"));
    for f in [
        "trajectory_afogd.csv",
        "trajectory_fogd.csv",
        "trajectory_gd.csv",
        "summary.toml",
    ] {
        assert!(dir.join("arts").join(f).is_file(), "missing artifact {f}");
    }
    let summary = read(&dir.join("arts/summary.toml"));
    assert!(summary.contains("scenario = \"sim1\""));
    assert!(summary.contains("first_below_error_tol = 15"));
}

#[test]
fn run_sim2_reports_certificate_audit() {
    let dir = workdir("run_sim2");
    let out = afo(&dir, &["run", "sim2", "--out", "arts"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    // Published candidates fail their inequalities; the audit says so.
    assert!(out.stdout.contains("NOT certified"), "stdout: {}", out.stdout);
    // One case assignment descends along the executed run, the other breaks.
    assert!(out.stdout.contains("descent 0/187"), "stdout: {}", out.stdout);
    assert!(out.stdout.contains("descent 56/187"), "stdout: {}", out.stdout);
    assert!(dir.join("arts/trajectory_heavy_ball.csv").is_file());
}

#[test]
fn run_missing_scenario_exits_two_and_names_path() {
    let dir = workdir("run_missing");
    let out = afo(&dir, &["run", "no_such_scenario.toml"]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("no_such_scenario.toml"),
        "stderr must name the missing path: {}",
        out.stderr
    );
}

#[test]
fn run_malformed_scenario_exits_two() {
    let dir = workdir("run_malformed");
    std::fs::write(dir.join("bad.toml"), "name = \"x\"\n[objective\n").unwrap();
    let out = afo(&dir, &["run", "bad.toml"]);
    assert_eq!(out.code, 2);
}

#[test]
fn run_unknown_method_filter_exits_two() {
    let dir = workdir("run_badmethod");
    let out = afo(&dir, &["run", "sim1", "--method", "bogus"]);
    assert_eq!(out.code, 2);
}

#[test]
fn run_builtin_alias_equals_scenario_file() {
    let dir = workdir("run_alias_vs_file");
    std::fs::write(dir.join("sim1.toml"), afo_core::harness::SIM1_SCENARIO).unwrap();
    let a = afo(&dir, &["run", "sim1", "--out", "from_alias"]);
    let b = afo(&dir, &["run", "sim1.toml", "--out", "from_file"]);
    assert_eq!(a.code, 0);
    assert_eq!(b.code, 0);
    for f in [
        "trajectory_afogd.csv",
        "trajectory_fogd.csv",
        "trajectory_gd.csv",
        "summary.toml",
    ] {
        assert_eq!(
            read(&dir.join("from_alias").join(f)),
            read(&dir.join("from_file").join(f)),
            "artifact {f} differs between alias and file runs"
        );
    }
}

const TINY_BASE: &str = r#"
name = "tiny"

[objective]
kind = "quadratic"
q = [2.0, 0.0, 0.0, 3.0]
b = [0.0, 0.0]
c = 0.0

[methods.afogd]
method = "afogd"
alpha = 0.1
mu = 1.7
delta = 1e-4
c1 = 0.8
c2 = 1.3

[seeds]
x0 = [0.1, 0.1]
x1 = [1.0, 1.0]

[stop]
epsilon = 1e-8
k_max = 500
"#;

#[test]
fn inline_override_equals_config_file_value() {
    let dir = workdir("inline_vs_file");
    std::fs::write(dir.join("base.toml"), TINY_BASE).unwrap();
    std::fs::write(dir.join("edited.toml"), TINY_BASE.replace("alpha = 0.1", "alpha = 0.15"))
        .unwrap();
    let a = afo(&dir, &["run", "base.toml", "--alpha", "0.15", "--out", "inline"]);
    let b = afo(&dir, &["run", "edited.toml", "--out", "file"]);
    assert_eq!(a.code, 0, "stderr: {}", a.stderr);
    assert_eq!(b.code, 0, "stderr: {}", b.stderr);
    let inline = read(&dir.join("inline/trajectory_afogd.csv"));
    let file = read(&dir.join("file/trajectory_afogd.csv"));
    assert_eq!(inline, file, "flag-set and file-set alpha must run identically");
    // The resolved value is recorded in the export header.
    assert!(inline.starts_with('#'));
    assert!(inline.contains("alpha=1.4999999999999999e-1"), "header: {inline}");
}

#[test]
fn seed_flags_change_the_starting_iterates() {
    let dir = workdir("seed_flags");
    let out = afo(
        &dir,
        &[
            "run", "sim1", "--method", "gd", "--seed-x0", "2,2", "--seed-x1", "1.5,1.5",
            "--out", "arts",
        ],
    );
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let csv = read(&dir.join("arts/trajectory_gd.csv"));
    let mut lines = csv.lines();
    let _settings = lines.next().unwrap();
    let header = lines.next().unwrap();
    assert!(header.starts_with("k,"));
    let k0 = lines.next().unwrap();
    assert!(k0.starts_with("0,2.0000000000000000e0,2.0000000000000000e0,"), "k=0 row: {k0}");
    let k1 = lines.next().unwrap();
    assert!(k1.starts_with("1,1.5000000000000000e0,1.5000000000000000e0,"), "k=1 row: {k1}");
}

#[test]
fn malformed_seed_flag_exits_two() {
    let dir = workdir("seed_bad");
    let out = afo(&dir, &["run", "sim1", "--seed-x0", "2,oops"]);
    assert_eq!(out.code, 2);
}

#[test]
fn out_dir_env_variable_is_honored_and_flag_wins() {
    let dir = workdir("env_out");
    let via_env = afo_env(&dir, &["run", "sim1", "--method", "gd"], &[("AFO_OUT_DIR", "envdir")]);
    assert_eq!(via_env.code, 0, "stderr: {}", via_env.stderr);
    assert!(dir.join("envdir/trajectory_gd.csv").is_file());

    let via_flag = afo_env(
        &dir,
        &["run", "sim1", "--method", "gd", "--out", "flagdir"],
        &[("AFO_OUT_DIR", "ignored_env")],
    );
    assert_eq!(via_flag.code, 0);
    assert!(dir.join("flagdir/trajectory_gd.csv").is_file());
    assert!(!dir.join("ignored_env").exists(), "--out must take precedence over the env var");
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

/// Problem parameters shared by the certificate tests (ill-conditioned
/// quadratic benchmark: m=2, L=8, alpha=0.1, eta=0.2, clamp [0.5, 1]).
fn bench_params() -> ProblemParams {
    ProblemParams::new(2.0, 8.0, 0.1, 0.2, 0.5, 1.0).unwrap()
}

#[test]
fn certify_published_candidate_reports_invalid() {
    // The low-rate candidate printed alongside the benchmark fails its own
    // matrix inequality (max eigenvalue ~ +0.39); the checker must say so and
    // exit nonzero rather than accept the published claim.
    let dir = workdir("certify_published");
    let doc = CertificateDoc {
        certificate: Certificate {
            case: CertCase::AfoagdNonneg,
            p: SymMatrix::from_row_major(2, &[4.1074, -4.1697, -4.1697, 4.6191]).unwrap(),
            rho_sq: 0.4,
            h: 0.2,
        },
        tol: 1e-6,
        params: bench_params(),
    };
    doc.write_to(&dir.join("published.toml")).unwrap();

    let out = afo(&dir, &["certify", "published.toml"]);
    assert_eq!(out.code, 1, "stdout: {}\nstderr: {}", out.stdout, out.stderr);
    assert!(out.stdout.contains("verdict: INVALID"));
    assert!(out.stdout.contains("max eigenvalue: +3.9"), "stdout: {}", out.stdout);

    // Still invalid at a tolerance four orders looser than the print precision.
    let loose = afo(&dir, &["certify", "published.toml", "--tol", "1e-2"]);
    assert_eq!(loose.code, 1);
}

#[test]
fn certify_searched_certificate_round_trips_valid() {
    let dir = workdir("certify_roundtrip");
    let search = afo(
        &dir,
        &[
            "search", "--m", "2", "--l", "8", "--alpha", "0.1", "--eta", "0.2", "--c1", "0.5",
            "--c2", "1.0", "--out", "certs",
        ],
    );
    assert_eq!(search.code, 0, "stderr: {}", search.stderr);
    for f in ["certs/certificate_nonneg.toml", "certs/certificate_neg.toml"] {
        let out = afo(&dir, &["certify", f]);
        assert_eq!(out.code, 0, "{f} stdout: {}\nstderr: {}", out.stdout, out.stderr);
        assert!(out.stdout.contains("verdict: VALID"));
        assert!(out.stdout.contains("certified rate: rho = 0.9"), "stdout: {}", out.stdout);
    }
}

#[test]
fn certify_negated_p_exits_one() {
    let dir = workdir("certify_negated");
    let search = afo(
        &dir,
        &[
            "search", "--m", "2", "--l", "8", "--alpha", "0.1", "--c1", "0.5", "--c2", "1.0",
            "--method", "afogd", "--out", "certs",
        ],
    );
    assert_eq!(search.code, 0, "stderr: {}", search.stderr);
    let path = dir.join("certs/certificate_afogd.toml");
    let doc = CertificateDoc::read_from(&path).unwrap();
    let dim = doc.certificate.p.dim();
    let negated: Vec<f64> = (0..dim * dim)
        .map(|i| -doc.certificate.p.get(i / dim, i % dim))
        .collect();
    let bad = CertificateDoc {
        certificate: Certificate {
            p: SymMatrix::from_row_major(dim, &negated).unwrap(),
            ..doc.certificate.clone()
        },
        ..doc
    };
    bad.write_to(&dir.join("negated.toml")).unwrap();

    let out = afo(&dir, &["certify", "negated.toml"]);
    assert_eq!(out.code, 1, "stdout: {}", out.stdout);
    assert!(out.stdout.contains("verdict: INVALID"));
}

#[test]
fn certify_overstated_rate_exits_one() {
    // A certificate that is valid at its own rate but re-checked with a much
    // smaller claimed rho^2 must fail: the flags override the stored claim.
    let dir = workdir("certify_overstated");
    let doc = CertificateDoc {
        certificate: Certificate {
            case: CertCase::Afogd,
            p: SymMatrix::from_row_major(1, &[1.0]).unwrap(),
            rho_sq: 0.05,
            h: 0.1,
        },
        tol: 1e-9,
        params: ProblemParams::new(2.0, 8.0, 0.1, 0.0, 0.5, 1.0).unwrap(),
    };
    doc.write_to(&dir.join("overstated.toml")).unwrap();
    let out = afo(&dir, &["certify", "overstated.toml"]);
    assert_eq!(out.code, 1, "stdout: {}", out.stdout);
    assert!(out.stdout.contains("verdict: INVALID"));
}

#[test]
fn certify_mangled_document_exits_two() {
    let dir = workdir("certify_mangled");
    std::fs::write(dir.join("mangled.toml"), "not [ valid = toml").unwrap();
    let out = afo(&dir, &["certify", "mangled.toml"]);
    assert_eq!(out.code, 2);

    let missing = afo(&dir, &["certify", "nowhere.toml"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("nowhere.toml"));
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

#[test]
fn search_afogd_closed_form_prints_bound_and_writes_doc() {
    let dir = workdir("search_afogd");
    let out = afo(
        &dir,
        &[
            "search", "--m", "2", "--l", "8", "--alpha", "0.1", "--c1", "0.5", "--c2", "1.0",
            "--method", "afogd", "--out", "certs",
        ],
    );
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    // Closed form, not a grid point: alpha_max = 2*c1/((m+L)*c2) and
    // rho^2 = 1 - 2*alpha*c1*m*L/(m+L) exactly.
    assert!(out.stdout.contains("alpha_max = 0.100000000"), "stdout: {}", out.stdout);
    assert!(out.stdout.contains("rho^2 = 0.840000000"), "stdout: {}", out.stdout);
    let doc = CertificateDoc::read_from(&dir.join("certs/certificate_afogd.toml")).unwrap();
    assert_eq!(doc.certificate.rho_sq, 0.84);
    assert_eq!(doc.certificate.case, CertCase::Afogd);
}

#[test]
fn search_pair_finds_shared_rate_and_docs_certify() {
    let dir = workdir("search_pair");
    let out = afo(
        &dir,
        &[
            "search", "--m", "2", "--l", "8", "--alpha", "0.1", "--eta", "0.2", "--c1", "0.5",
            "--c2", "1.0", "--out", "certs",
        ],
    );
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let line = out
        .stdout
        .lines()
        .find(|l| l.starts_with("certificate pair: rho^2 = "))
        .expect("rate line");
    let rho_sq: f64 = line
        .trim_start_matches("certificate pair: rho^2 = ")
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    // Default grids certify this benchmark below rho^2 = 0.87; nothing on the
    // grid is feasible below 0.82.
    assert!((0.80..0.87).contains(&rho_sq), "rho_sq = {rho_sq}");
    let nonneg = CertificateDoc::read_from(&dir.join("certs/certificate_nonneg.toml")).unwrap();
    let neg = CertificateDoc::read_from(&dir.join("certs/certificate_neg.toml")).unwrap();
    assert_eq!(nonneg.certificate.case, CertCase::AfoagdNonneg);
    assert_eq!(neg.certificate.case, CertCase::AfoagdNeg);
    assert_eq!(nonneg.certificate.rho_sq, neg.certificate.rho_sq, "pair shares one rate");
}

#[test]
fn search_common_writes_one_witness_for_both_cases() {
    let dir = workdir("search_common");
    let out = afo(
        &dir,
        &[
            "search", "--m", "2", "--l", "8", "--alpha", "0.1", "--eta", "0.2", "--c1", "0.5",
            "--c2", "1.0", "--common", "--out", "certs",
        ],
    );
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let nonneg = CertificateDoc::read_from(&dir.join("certs/certificate_nonneg.toml")).unwrap();
    let neg = CertificateDoc::read_from(&dir.join("certs/certificate_neg.toml")).unwrap();
    assert_eq!(nonneg.certificate.p, neg.certificate.p, "one shared P");
    assert_eq!(nonneg.certificate.h, neg.certificate.h, "one shared h");
    for f in ["certs/certificate_nonneg.toml", "certs/certificate_neg.toml"] {
        assert_eq!(afo(&dir, &["certify", f]).code, 0);
    }
}

#[test]
fn search_step_size_beyond_bound_exits_one() {
    let dir = workdir("search_too_big");
    let out = afo(
        &dir,
        &[
            "search", "--m", "2", "--l", "8", "--alpha", "100", "--c1", "0.5", "--c2", "1.0",
            "--method", "afogd", "--out", "certs",
        ],
    );
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("no certificate"), "stderr: {}", out.stderr);
    assert!(!dir.join("certs/certificate_afogd.toml").exists());
}

#[test]
fn search_rejects_bad_problem_class_with_usage_error() {
    let dir = workdir("search_bad_params");
    // L < m is not a valid problem class.
    let out = afo(
        &dir,
        &["search", "--m", "8", "--l", "2", "--alpha", "0.01", "--out", "certs"],
    );
    assert_eq!(out.code, 2, "stderr: {}", out.stderr);
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn sweep_cell<'a>(csv: &'a str, value: &str, method: &str) -> Vec<&'a str> {
    let prefix = format!("mu,{value},{method},");
    csv.lines()
        .find(|l| l.starts_with(&prefix))
        .unwrap_or_else(|| panic!("no row for {value}/{method} in:\n{csv}"))
        .split(',')
        .collect()
}

#[test]
fn sweep_mu_grid_degenerates_to_gd_at_one() {
    let dir = workdir("sweep_mu");
    let out = afo(
        &dir,
        &[
            "sweep", "sim1", "--param", "mu", "--values", "0.7,1.0,1.3,1.7", "--out", "sw",
        ],
    );
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let csv = read(&dir.join("sw/sweep_mu.csv"));
    assert!(csv.starts_with(
        "param,value,method,final_error,iterations_to_tol,stop_reason,certified_rho_sq"
    ));
    // At fractional order one the multiplier is exactly 1, so both fractional
    // methods reproduce plain gradient descent bit for bit: identical printed
    // final errors and iteration counts.
    let one = "1.0000000000000000e0";
    let gd = sweep_cell(&csv, one, "gd");
    let fogd = sweep_cell(&csv, one, "fogd");
    let afogd = sweep_cell(&csv, one, "afogd");
    assert_eq!(fogd[3], gd[3], "fogd final_error must equal gd bit for bit");
    assert_eq!(afogd[3], gd[3], "afogd final_error must equal gd bit for bit");
    assert_eq!(fogd[4], gd[4]);
    assert_eq!(afogd[4], gd[4]);
    // Away from order one the unclamped method differs from gd.
    let fogd17 = sweep_cell(&csv, "1.7000000000000000e0", "fogd");
    assert_ne!(fogd17[3], gd[3]);
    assert_eq!(fogd17[5], "max_iterations");
    // 4 values x 3 methods = 12 rows after the header.
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn sweep_alpha_reports_certified_rate_for_plain_adaptive_method() {
    let dir = workdir("sweep_alpha");
    let out = afo(
        &dir,
        &[
            "sweep", "sim1", "--param", "alpha", "--values", "0.1,0.2", "--method", "afogd",
            "--out", "sw",
        ],
    );
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let csv = read(&dir.join("sw/sweep_alpha.csv"));
    let row01: Vec<&str> = csv
        .lines()
        .find(|l| l.starts_with("alpha,1.0000000000000001e-1,afogd,"))
        .expect("alpha=0.1 row")
        .split(',')
        .collect();
    // Closed-form certificate on the m=4, L=6 benchmark at alpha=0.1:
    // rho^2 = 1 - 2*0.1*0.8*24/10 = 0.616.
    assert_eq!(row01[6], "6.1599999999999988e-1", "csv:\n{csv}");
    let row02: Vec<&str> = csv
        .lines()
        .find(|l| l.starts_with("alpha,2.0000000000000001e-1,afogd,"))
        .expect("alpha=0.2 row")
        .split(',')
        .collect();
    assert_eq!(row02[6], "", "alpha=0.2 exceeds the certifiable bound; cell stays empty");
}

#[test]
fn sweep_unknown_parameter_exits_two() {
    let dir = workdir("sweep_unknown");
    let out = afo(&dir, &["sweep", "sim1", "--param", "bogus", "--values", "1,2"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("bogus"), "stderr: {}", out.stderr);
}

#[test]
fn sweep_empty_grid_exits_two() {
    let dir = workdir("sweep_empty");
    let out = afo(&dir, &["sweep", "sim1", "--param", "mu", "--values", ""]);
    assert_eq!(out.code, 2);
}

// ---------------------------------------------------------------------------
// regress
// ---------------------------------------------------------------------------

#[test]
fn regress_default_matches_generated_benchmark() {
    let dir = workdir("regress_default");
    let out = afo(&dir, &["regress", "--out", "arts"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(
        out.stdout.contains("least-squares solution: theta = (4.651036125e-1, 2.012197607e0)"),
        "stdout: {}",
        out.stdout
    );
    assert!(out.stdout.contains("|theta-theta_ls|<1e-3 at k=86"), "stdout: {}", out.stdout);
    assert!(out.stdout.contains("|theta-theta_ls|<1e-3 at k=113"), "stdout: {}", out.stdout);
    // Generated data is exported for reproducibility.
    assert!(dir.join("arts/dataset.csv").is_file());
}

#[test]
fn regress_reads_external_dataset() {
    let dir = workdir("regress_data");
    // Noise-free line y = 1 + 2x: the least-squares solution is exact.
    std::fs::write(dir.join("line.csv"), "x,y\n0.0,1.0\n1.0,3.0\n2.0,5.0\n4.0,9.0\n").unwrap();
    let out = afo(&dir, &["regress", "--data", "line.csv", "--out", "arts"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(
        out.stdout.contains("least-squares solution: theta = (1.000000000e0, 2.000000000e0)"),
        "stdout: {}",
        out.stdout
    );
    // Loaded (not generated) data is not re-exported.
    assert!(!dir.join("arts/dataset.csv").exists());
    assert!(dir.join("arts/summary.toml").is_file());
}

#[test]
fn regress_data_conflicts_with_generator_flags() {
    let dir = workdir("regress_conflict");
    std::fs::write(dir.join("line.csv"), "x,y\n0.0,1.0\n1.0,3.0\n").unwrap();
    let out = afo(&dir, &["regress", "--data", "line.csv", "--seed", "7"]);
    assert_eq!(out.code, 2);
}

#[test]
fn regress_missing_dataset_exits_runtime_error() {
    let dir = workdir("regress_missing");
    let out = afo(&dir, &["regress", "--data", "nope.csv"]);
    assert_ne!(out.code, 0);
    assert!(out.stderr.contains("nope.csv"), "stderr: {}", out.stderr);
}
