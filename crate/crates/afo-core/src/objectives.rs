//! Evaluable objective functions with analytic gradients, curvature metadata,
//! and oracles (finite differences, closed-form minimizers) used by the
//! optimizers, the certificate engine, and the tests.

use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::smallmat::{solve, Mat, SymMatrix, Vector};

/// Default central-difference step: balances truncation against rounding at
/// double precision.
pub const DEFAULT_FD_EPS: f64 = 1e-5;

/// Curvature bounds of a twice-differentiable objective: the gradient is
/// Lipschitz with constant `l` and the function is `m`-strongly convex
/// (`m = 0` means merely convex).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessBounds {
    pub m: f64,
    pub l: f64,
}

impl SmoothnessBounds {
    pub fn new(m: f64, l: f64) -> Result<Self> {
        if !(m.is_finite() && l.is_finite()) || m < 0.0 || l <= 0.0 || m > l {
            return Err(Error::InvalidInput(format!(
                "curvature bounds need 0 <= m <= l with l > 0, got m={}, l={}",
                m, l
            )));
        }
        Ok(SmoothnessBounds { m, l })
    }
}

// ---------------------------------------------------------------------------
// Quadratic objective
// ---------------------------------------------------------------------------

/// f(x) = xᵀQx + bᵀx + c with symmetric coefficient matrix Q (Hessian 2Q).
///
/// `bounds()` reports Hessian eigenvalues by default; `with_bounds` installs an
/// explicit override for callers that need to reproduce externally stated
/// (m, L) values.
#[derive(Debug, Clone)]
pub struct QuadraticObjective {
    q: SymMatrix,
    b: Vector,
    c: f64,
    bounds_override: Option<SmoothnessBounds>,
}

impl QuadraticObjective {
    pub fn new(q: SymMatrix, b: Vector, c: f64) -> Result<Self> {
        if b.dim() != q.dim() {
            return Err(Error::DimensionMismatch {
                expected: q.dim(),
                got: b.dim(),
            });
        }
        if !b.is_finite() || !c.is_finite() {
            return Err(Error::InvalidInput(
                "quadratic coefficients must be finite".into(),
            ));
        }
        Ok(QuadraticObjective {
            q,
            b,
            c,
            bounds_override: None,
        })
    }

    /// Convenience constructor for diagonal Q.
    pub fn diagonal(q_diag: &[f64], b: &[f64], c: f64) -> Result<Self> {
        QuadraticObjective::new(SymMatrix::diag(q_diag)?, Vector::new(b.to_vec()), c)
    }

    /// Install explicit curvature bounds, overriding the Hessian-derived ones.
    pub fn with_bounds(mut self, m: f64, l: f64) -> Result<Self> {
        self.bounds_override = Some(SmoothnessBounds::new(m, l)?);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn coefficient_matrix(&self) -> &SymMatrix {
        &self.q
    }

    pub fn value(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        let mut quad = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                quad += x.get(i) * self.q.get(i, j) * x.get(j);
            }
        }
        Ok(quad + self.b.dot(x) + self.c)
    }

    /// ∇f(x) = 2Qx + b.
    pub fn gradient(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        let mut g = vec![0.0; self.dim()];
        for (i, gi) in g.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..self.dim() {
                acc += self.q.get(i, j) * x.get(j);
            }
            *gi = 2.0 * acc + self.b.get(i);
        }
        Ok(Vector::new(g))
    }

    /// The constant Hessian 2Q.
    pub fn hessian(&self) -> SymMatrix {
        self.q.scale(2.0)
    }

    /// Unique stationary point, solving 2Q x = −b.
    pub fn minimizer(&self) -> Result<Vector> {
        solve(&self.hessian().to_mat(), &self.b.scale(-1.0))
    }

    /// Curvature bounds: Hessian spectrum, unless explicitly overridden.
    pub fn bounds(&self) -> SmoothnessBounds {
        if let Some(b) = self.bounds_override {
            return b;
        }
        let eigs = self
            .hessian()
            .eigenvalues()
            .expect("finite by construction");
        SmoothnessBounds {
            m: eigs[0].max(0.0),
            l: *eigs.last().expect("dim >= 1"),
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Regression objective
// ---------------------------------------------------------------------------

/// Mean-squared-error line fit: J(θ) = 1/(2N) Σ (θ0 + θ1·xᵢ − yᵢ)².
///
/// The 1/(2·count) normalization keeps the gradient at (1/N)·Xᵀr.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionObjective {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl RegressionObjective {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidInput(
                "regression needs at least 2 samples".into(),
            ));
        }
        if samples
            .iter()
            .any(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::InvalidInput("non-finite sample".into()));
        }
        Ok(RegressionObjective {
            xs: samples.iter().map(|s| s.0).collect(),
            ys: samples.iter().map(|s| s.1).collect(),
        })
    }

    pub fn count(&self) -> usize {
        self.xs.len()
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().zip(&self.ys).map(|(&x, &y)| (x, y))
    }

    pub fn dim(&self) -> usize {
        2
    }

    pub fn value(&self, theta: &Vector) -> Result<f64> {
        self.check_dim(theta)?;
        let (t0, t1) = (theta.get(0), theta.get(1));
        let n = self.count() as f64;
        let ss: f64 = self
            .samples()
            .map(|(x, y)| {
                let r = t0 + t1 * x - y;
                r * r
            })
            .sum();
        Ok(ss / (2.0 * n))
    }

    /// ∇J(θ) = (1/N) Σ rᵢ · (1, xᵢ) with rᵢ = θ0 + θ1·xᵢ − yᵢ.
    pub fn gradient(&self, theta: &Vector) -> Result<Vector> {
        self.check_dim(theta)?;
        let (t0, t1) = (theta.get(0), theta.get(1));
        let n = self.count() as f64;
        let mut g0 = 0.0;
        let mut g1 = 0.0;
        for (x, y) in self.samples() {
            let r = t0 + t1 * x - y;
            g0 += r;
            g1 += r * x;
        }
        Ok(Vector::new(vec![g0 / n, g1 / n]))
    }

    /// The constant Hessian (1/N)·XᵀX = [[1, x̄],[x̄, mean(x²)]].
    pub fn hessian(&self) -> SymMatrix {
        let n = self.count() as f64;
        let sx: f64 = self.xs.iter().sum();
        let sxx: f64 = self.xs.iter().map(|x| x * x).sum();
        SymMatrix::from_rows(&[vec![1.0, sx / n], vec![sx / n, sxx / n]])
            .expect("finite by construction")
    }

    pub fn bounds(&self) -> SmoothnessBounds {
        let eigs = self
            .hessian()
            .eigenvalues()
            .expect("finite by construction");
        SmoothnessBounds {
            m: eigs[0].max(0.0),
            l: *eigs.last().expect("dim >= 1"),
        }
    }

    /// Closed-form least-squares solution of the normal equations.
    pub fn least_squares(&self) -> Result<Vector> {
        let n = self.count() as f64;
        let h = self.hessian(); // (1/N) XᵀX
        let sy: f64 = self.ys.iter().sum();
        let sxy: f64 = self.samples().map(|(x, y)| x * y).sum();
        let rhs = Vector::new(vec![sy / n, sxy / n]);
        solve(&h.to_mat(), &rhs).map_err(|_| {
            Error::DegenerateObjective("all sample x values coincide".into())
        })
    }

    /// Load from a two-column CSV with header `x,y`.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty dataset file".into()))?;
        if header.trim() != "x,y" {
            return Err(Error::Parse(format!(
                "expected dataset header 'x,y', got '{}'",
                header.trim()
            )));
        }
        let mut samples = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let mut parts = line.split(',');
            let x = parse_float(parts.next(), lineno + 2)?;
            let y = parse_float(parts.next(), lineno + 2)?;
            if parts.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: expected exactly two columns",
                    lineno + 2
                )));
            }
            samples.push((x, y));
        }
        RegressionObjective::new(&samples)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        RegressionObjective::from_csv_str(&text)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for (x, y) in self.samples() {
            out.push_str(&format!("{:.16e},{:.16e}\n", x, y));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        f.write_all(self.to_csv().as_bytes())
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    fn check_dim(&self, theta: &Vector) -> Result<()> {
        if theta.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: theta.dim(),
            });
        }
        Ok(())
    }
}

fn parse_float(field: Option<&str>, lineno: usize) -> Result<f64> {
    let raw = field
        .ok_or_else(|| Error::Parse(format!("line {}: missing column", lineno)))?
        .trim();
    raw.parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {}: bad number '{}'", lineno, raw)))
}

// ---------------------------------------------------------------------------
// Dynamic dispatch over the two families
// ---------------------------------------------------------------------------

/// Either objective family, for scenario-driven code.
#[derive(Debug, Clone)]
pub enum AnyObjective {
    Quadratic(QuadraticObjective),
    Regression(RegressionObjective),
}

impl AnyObjective {
    pub fn dim(&self) -> usize {
        match self {
            AnyObjective::Quadratic(o) => o.dim(),
            AnyObjective::Regression(o) => o.dim(),
        }
    }

    pub fn value(&self, x: &Vector) -> Result<f64> {
        match self {
            AnyObjective::Quadratic(o) => o.value(x),
            AnyObjective::Regression(o) => o.value(x),
        }
    }

    pub fn gradient(&self, x: &Vector) -> Result<Vector> {
        match self {
            AnyObjective::Quadratic(o) => o.gradient(x),
            AnyObjective::Regression(o) => o.gradient(x),
        }
    }

    pub fn bounds(&self) -> SmoothnessBounds {
        match self {
            AnyObjective::Quadratic(o) => o.bounds(),
            AnyObjective::Regression(o) => o.bounds(),
        }
    }

    pub fn hessian(&self) -> SymMatrix {
        match self {
            AnyObjective::Quadratic(o) => o.hessian(),
            AnyObjective::Regression(o) => o.hessian(),
        }
    }

    /// Closed-form minimizer: stationary point for quadratics, normal-equation
    /// solution for regression.
    pub fn minimizer(&self) -> Result<Vector> {
        match self {
            AnyObjective::Quadratic(o) => o.minimizer(),
            AnyObjective::Regression(o) => o.least_squares(),
        }
    }
}

/// Central-difference gradient oracle: (f(x+εeᵢ) − f(x−εeᵢ)) / (2ε) per
/// coordinate.
pub fn finite_diff_gradient(obj: &AnyObjective, x: &Vector, eps: f64) -> Result<Vector> {
    if eps <= 0.0 {
        return Err(Error::InvalidInput("finite-difference step must be > 0".into()));
    }
    let mut g = vec![0.0; x.dim()];
    for (i, gi) in g.iter_mut().enumerate() {
        let mut hi = x.as_slice().to_vec();
        let mut lo = hi.clone();
        hi[i] += eps;
        lo[i] -= eps;
        let fhi = obj.value(&Vector::new(hi))?;
        let flo = obj.value(&Vector::new(lo))?;
        *gi = (fhi - flo) / (2.0 * eps);
    }
    Ok(Vector::new(g))
}

/// Combined smoothness/strong-convexity inequality between two points:
///
///   mL/(m+L)·‖y−x‖² + 1/(m+L)·‖∇f(y)−∇f(x)‖²  ≤  (∇f(y)−∇f(x))ᵀ(y−x) + tol.
///
/// Holds for every m-strongly-convex L-smooth function; a violation means the
/// reported bounds or the gradient are wrong.
pub fn cocoercivity_holds(obj: &AnyObjective, x: &Vector, y: &Vector, tol: f64) -> Result<bool> {
    let SmoothnessBounds { m, l } = obj.bounds();
    if m <= 0.0 {
        return Err(Error::InvalidInput(
            "co-coercivity check needs strictly positive strong convexity".into(),
        ));
    }
    let d = y.sub(x);
    let dg = obj.gradient(y)?.sub(&obj.gradient(x)?);
    let lhs = m * l / (m + l) * d.dot(&d) + 1.0 / (m + l) * dg.dot(&dg);
    let rhs = dg.dot(&d);
    Ok(lhs <= rhs + tol)
}

/// The same constraint as a quadratic form: [y−x; ∇f(y)−∇f(x)]ᵀ (Q_f ⊗ I) [...] ≥ −tol
/// with Q_f = [[−mL/(m+L), 1/2], [1/2, −1/(m+L)]].
pub fn cocoercivity_quadratic_form(obj: &AnyObjective, x: &Vector, y: &Vector) -> Result<f64> {
    let SmoothnessBounds { m, l } = obj.bounds();
    let d = y.sub(x);
    let dg = obj.gradient(y)?.sub(&obj.gradient(x)?);
    let q11 = -m * l / (m + l);
    let q22 = -1.0 / (m + l);
    Ok(q11 * d.dot(&d) + dg.dot(&d) + q22 * dg.dot(&dg))
}

/// Shared helper for building the full-dimension state matrix used by
/// Kronecker-soundness checks: quadratic form value xᵀ(S⊗Iₙ)x without forming
/// the product explicitly.
pub fn block_quadratic_form(s: &SymMatrix, blocks: &[&Vector]) -> f64 {
    assert_eq!(s.dim(), blocks.len(), "block count mismatch");
    let mut acc = 0.0;
    for i in 0..s.dim() {
        for j in 0..s.dim() {
            acc += s.get(i, j) * blocks[i].dot(blocks[j]);
        }
    }
    acc
}

/// Keep `Mat` reachable for downstream assembly code without re-importing.
pub type AssemblyMat = Mat;
