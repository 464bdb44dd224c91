//! Benchmark scenario files: a TOML description of one objective, a set of
//! named optimizer configurations, shared seeds, and a stopping rule.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::dataset::generate_regression_dataset;
use crate::objectives::{AnyObjective, QuadraticObjective, RegressionObjective};
use crate::optimizers::OptimizerConfig;
use crate::smallmat::{SymMatrix, Vector};

/// A fully described benchmark: what to minimize, with which methods, from
/// which seeds, and when to stop.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub objective: ObjectiveSpec,
    /// Keyed by display label; BTreeMap keeps report order deterministic.
    pub methods: BTreeMap<String, MethodSpec>,
    pub seeds: SeedSpec,
    pub stop: StopSpec,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub certificates: Option<CertificateSpec>,
}

/// Objective description. `kind = "quadratic"` takes an explicit symmetric
/// coefficient matrix (row-major), linear term, and offset; `kind =
/// "regression"` either points at a CSV of (x, y) samples or synthesizes one.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveSpec {
    Quadratic {
        q: Vec<f64>,
        b: Vec<f64>,
        c: f64,
    },
    Regression {
        #[serde(default)]
        data: Option<String>,
        #[serde(default)]
        generate: Option<GenerateSpec>,
    },
}

/// Parameters for a synthetic noisy-line regression dataset.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSpec {
    pub seed: u64,
    pub count: usize,
    pub theta0: f64,
    pub theta1: f64,
    pub noise_scale: f64,
}

/// One optimizer entry. Only the fields a method actually uses need to be
/// present; everything else keeps its default.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSpec {
    pub method: String,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub c2: Option<f64>,
}

/// Initial iterates shared by every method in the scenario. `y0` seeds the
/// extrapolation history of momentum-with-adaptive-step runs and defaults to
/// `x1` when omitted.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSpec {
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
    #[serde(default)]
    pub y0: Option<Vec<f64>>,
}

/// Stopping rule shared by every method: gradient tolerance and iteration cap.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopSpec {
    pub epsilon: f64,
    pub k_max: usize,
}

/// Where exported CSV/TOML reports go, relative to the scenario file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
}

/// Optional certificate block: strong-convexity/smoothness constants to
/// certify against plus named candidate (rate, multiplier bound, quadratic
/// weight) triples to check.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    pub m: f64,
    pub l: f64,
    #[serde(default)]
    pub candidates: BTreeMap<String, CandidateSpec>,
}

/// One candidate certificate: row-major 2x2 weight matrix, squared rate, and
/// co-coercivity multiplier.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub p: Vec<f64>,
    pub rho_sq: f64,
    pub h: f64,
}

impl Scenario {
    /// Parse a scenario from TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let sc: Scenario =
            toml::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))?;
        sc.validate()?;
        Ok(sc)
    }

    /// Read and parse a scenario file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::InvalidConfig("scenario name must not be empty".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "scenario {:?} defines no methods",
                self.name
            )));
        }
        if self.seeds.x0.len() != self.seeds.x1.len() {
            return Err(Error::DimensionMismatch {
                expected: self.seeds.x0.len(),
                got: self.seeds.x1.len(),
            });
        }
        if let Some(y0) = &self.seeds.y0 {
            if y0.len() != self.seeds.x0.len() {
                return Err(Error::DimensionMismatch {
                    expected: self.seeds.x0.len(),
                    got: y0.len(),
                });
            }
        }
        if let ObjectiveSpec::Regression { data, generate } = &self.objective {
            match (data, generate) {
                (None, None) => {
                    return Err(Error::InvalidConfig(
                        "regression objective needs either `data` or `[objective.generate]`"
                            .into(),
                    ));
                }
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidConfig(
                        "regression objective takes `data` or `[objective.generate]`, not both"
                            .into(),
                    ));
                }
                _ => {}
            }
        }
        if let Some(cert) = &self.certificates {
            if !(cert.m > 0.0 && cert.l >= cert.m) {
                return Err(Error::InvalidConfig(format!(
                    "certificate constants need 0 < m <= l, got m = {}, l = {}",
                    cert.m, cert.l
                )));
            }
        }
        Ok(())
    }

    /// Materialize the objective, resolving any dataset path against
    /// `base_dir` (normally the scenario file's directory).
    pub fn build_objective(&self, base_dir: &Path) -> Result<AnyObjective> {
        match &self.objective {
            ObjectiveSpec::Quadratic { q, b, c } => {
                let dim = b.len();
                let q = SymMatrix::from_row_major(dim, q)?;
                let b = Vector::new(b.clone());
                Ok(AnyObjective::Quadratic(QuadraticObjective::new(q, b, *c)?))
            }
            ObjectiveSpec::Regression { data, generate } => {
                let obj = match (data, generate) {
                    (Some(rel), None) => RegressionObjective::from_csv_path(&base_dir.join(rel))?,
                    (None, Some(g)) => generate_regression_dataset(
                        g.seed,
                        g.count,
                        (g.theta0, g.theta1),
                        g.noise_scale,
                    )?,
                    _ => unreachable!("validated at parse time"),
                };
                Ok(AnyObjective::Regression(obj))
            }
        }
    }
}

impl MethodSpec {
    /// Turn the entry into a runnable configuration: defaults for the parsed
    /// method, overlaid with whatever fields the file sets.
    pub fn to_config(&self) -> Result<OptimizerConfig> {
        let method = self.method.parse()?;
        let mut cfg = OptimizerConfig::new(method);
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.eta {
            cfg.eta = v;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.mu {
            cfg.mu = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.c1 {
            cfg.c1 = v;
        }
        if let Some(v) = self.c2 {
            cfg.c2 = v;
        }
        Ok(cfg)
    }
}
