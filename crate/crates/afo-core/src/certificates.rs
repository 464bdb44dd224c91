//! Convergence-certificate engine.
//!
//! For the plain adaptive fractional method the contraction condition reduces
//! to a 2×2 matrix inequality with a closed-form step-size/rate bound. For the
//! accelerated variant the iteration is viewed as a linear system driven by the
//! gradient, and a certificate is a triple (P, ρ², h) making a 3×3 reduced
//! linear matrix inequality negative semidefinite; feasibility of that LMI
//! proves geometric decay of a quadratic-plus-value Lyapunov function at rate
//! ρ per step. This module builds the blocks, checks candidate certificates,
//! searches for feasible ones on grids, verifies Lyapunov descent along
//! recorded trajectories, and (de)serializes certificate documents.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objectives::AnyObjective;
use crate::optimizers::Trajectory;
use crate::smallmat::{Mat, SymMatrix, Vector};

/// NSD tolerance for certificates constructed in full double precision.
pub const DEFAULT_SYNTHETIC_TOL: f64 = 1e-9;
/// NSD tolerance for externally published candidate matrices, which are
/// typically rounded to 4–5 significant figures.
pub const DEFAULT_PRINTED_TOL: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Problem parameters
// ---------------------------------------------------------------------------

/// The scalars the certificate machinery needs: curvature bounds of the
/// objective and the step/extrapolation/clamp settings of the method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub m: f64,
    pub l: f64,
    pub alpha: f64,
    pub eta: f64,
    pub c1: f64,
    pub c2: f64,
}

impl ProblemParams {
    pub fn new(m: f64, l: f64, alpha: f64, eta: f64, c1: f64, c2: f64) -> Result<Self> {
        let p = ProblemParams {
            m,
            l,
            alpha,
            eta,
            c1,
            c2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.m, self.l, self.alpha, self.eta, self.c1, self.c2]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidInput("parameters must be finite".into()));
        }
        if !(self.m > 0.0 && self.m <= self.l) {
            return Err(Error::InvalidInput(format!(
                "curvature bounds need 0 < m <= l, got m={}, l={}",
                self.m, self.l
            )));
        }
        if self.alpha <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if self.eta < 0.0 {
            return Err(Error::InvalidInput(format!(
                "eta must be >= 0, got {}",
                self.eta
            )));
        }
        if !(self.c1 > 0.0 && self.c1 <= self.c2) {
            return Err(Error::InvalidInput(format!(
                "clamp bounds need 0 < c1 <= c2, got c1={}, c2={}",
                self.c1, self.c2
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Cases and certificates
// ---------------------------------------------------------------------------

/// Branch selector for the accelerated method's step-progress bound: which of
/// the two bracketing matrices applies depends on the sign of
/// ∇f(y_k)ᵀ(y_k − x_k) at the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiCase {
    Nonneg,
    Neg,
}

impl PsiCase {
    pub fn of_sign(value: f64) -> PsiCase {
        if value >= 0.0 {
            PsiCase::Nonneg
        } else {
            PsiCase::Neg
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PsiCase::Nonneg => "nonneg",
            PsiCase::Neg => "neg",
        }
    }
}

/// Which inequality a certificate refers to: the 2×2 reduced form for the
/// plain adaptive method, or one ψ-case of the 3×3 form for the accelerated
/// method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertCase {
    Afogd,
    AfoagdNonneg,
    AfoagdNeg,
}

impl CertCase {
    pub fn name(self) -> &'static str {
        match self {
            CertCase::Afogd => "afogd",
            CertCase::AfoagdNonneg => "afoagd_nonneg",
            CertCase::AfoagdNeg => "afoagd_neg",
        }
    }

    pub fn psi_case(self) -> Option<PsiCase> {
        match self {
            CertCase::Afogd => None,
            CertCase::AfoagdNonneg => Some(PsiCase::Nonneg),
            CertCase::AfoagdNeg => Some(PsiCase::Neg),
        }
    }

    /// Expected dimension of the certificate's P matrix.
    pub fn p_dim(self) -> usize {
        match self {
            CertCase::Afogd => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CertCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CertCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<CertCase> {
        match s {
            "afogd" => Ok(CertCase::Afogd),
            "afoagd_nonneg" => Ok(CertCase::AfoagdNonneg),
            "afoagd_neg" => Ok(CertCase::AfoagdNeg),
            other => Err(Error::Parse(format!("unknown certificate case '{}'", other))),
        }
    }
}

/// A candidate convergence certificate: the Lyapunov weight matrix P, the
/// claimed squared contraction rate ρ², and the sector-constraint multiplier h.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub case: CertCase,
    pub p: SymMatrix,
    pub rho_sq: f64,
    pub h: f64,
}

impl Certificate {
    /// The certified per-step contraction rate ρ.
    pub fn rate(&self) -> f64 {
        self.rho_sq.sqrt()
    }
}

/// Certificates for both ψ-cases of the accelerated method. A full
/// method-level certificate requires each case to hold with its own (P, ρ², h);
/// the certified overall rate is the worse (larger) of the two.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificatePair {
    pub nonneg: Certificate,
    pub neg: Certificate,
}

impl CertificatePair {
    pub fn certified_rate(&self) -> f64 {
        self.nonneg.rate().max(self.neg.rate())
    }

    pub fn by_case(&self, case: PsiCase) -> &Certificate {
        match case {
            PsiCase::Nonneg => &self.nonneg,
            PsiCase::Neg => &self.neg,
        }
    }
}

/// A single (P, ρ², h) that satisfies both ψ-case inequalities simultaneously,
/// giving a case-independent Lyapunov function.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonCertificate {
    pub p: SymMatrix,
    pub rho_sq: f64,
    pub h: f64,
}

impl CommonCertificate {
    pub fn rate(&self) -> f64 {
        self.rho_sq.sqrt()
    }
}

// ---------------------------------------------------------------------------
// Matrix builders — plain adaptive method (2×2 reduced form)
// ---------------------------------------------------------------------------

/// The 2×2 sector block combining strong convexity and smoothness with the
/// clamp bounds:
///
///   [ −mL/(m+L)      1/(2c1)      ]
///   [ 1/(2c1)        −1/((m+L)c2) ]
///
/// A clamped gradient step satisfies the quadratic constraint this matrix
/// encodes on the pair (x_k − x*, ∇f(x_k)).
pub fn sector_matrix(params: &ProblemParams) -> SymMatrix {
    let ProblemParams { m, l, c1, c2, .. } = *params;
    let s = m + l;
    SymMatrix::from_row_major(2, &[-m * l / s, 1.0 / (2.0 * c1), 1.0 / (2.0 * c1), -1.0 / (s * c2)])
        .expect("finite by construction")
}

/// The 2×2 contraction inequality for the plain adaptive method in the basis
/// (x_k − x*, ∇f(x_k)): p0-weighted transition part plus h times the sector
/// block. Negative semidefiniteness certifies ‖x_{k+1} − x*‖ ≤ ρ‖x_k − x*‖.
pub fn afogd_lmi(params: &ProblemParams, rho_sq: f64, h: f64, p0: f64) -> SymMatrix {
    let transition = SymMatrix::from_row_major(
        2,
        &[
            1.0 - rho_sq,
            -params.alpha,
            -params.alpha,
            params.alpha * params.alpha,
        ],
    )
    .expect("finite by construction");
    transition.scale(p0).add(&sector_matrix(params).scale(h))
}

/// Closed-form admissible range for the plain adaptive method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBound {
    /// Largest step size for which a certificate exists: 2c1/((m+L)c2).
    pub alpha_max: f64,
    /// Smallest certified squared rate at the configured α:
    /// max(0, 1 − 2αc1·mL/(m+L)).
    pub rho_sq_min: f64,
}

impl RateBound {
    /// The multiplier h = 2αc1 that attains the bound (it zeroes the
    /// off-diagonal of the 2×2 inequality exactly).
    pub fn attaining_h(params: &ProblemParams) -> f64 {
        2.0 * params.alpha * params.c1
    }
}

/// Closed-form certificate bound for the plain adaptive method, evaluated at
/// the configured α. Errors with `NoCertificate` when α exceeds alpha_max.
pub fn afogd_rate(params: &ProblemParams) -> Result<RateBound> {
    params.validate()?;
    let ProblemParams { m, l, alpha, c1, c2, .. } = *params;
    let s = m + l;
    let alpha_max = 2.0 * c1 / (s * c2);
    if alpha > alpha_max {
        return Err(Error::NoCertificate(format!(
            "step size alpha={} exceeds the certifiable maximum 2*c1/((m+L)*c2)={}",
            alpha, alpha_max
        )));
    }
    let rho_sq_min = (1.0 - 2.0 * alpha * c1 * m * l / s).max(0.0);
    Ok(RateBound {
        alpha_max,
        rho_sq_min,
    })
}

// ---------------------------------------------------------------------------
// Matrix builders — accelerated method (3×3 reduced form)
// ---------------------------------------------------------------------------

/// Per-coordinate blocks of the accelerated iteration written as a linear
/// system ξ_{k+1} = (A⊗I)ξ_k + (B⊗I)u_k, y_k = (C⊗I)ξ_k, x_k = (E⊗I)ξ_k with
/// state ξ_k = [x_{k−1}; x_k] and input u_k = eff·∇f(y_k)/… absorbed into B.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub a: Mat,
    pub b: Mat,
    pub c: Mat,
    pub e: Mat,
}

/// Build the reduced system blocks for extrapolation weight η and step scale α:
/// A = [[0, 1], [−η, 1+η]], B = [[0], [−α]], C = [−η, 1+η], E = [0, 1].
pub fn afoagd_system(alpha: f64, eta: f64) -> ReducedSystem {
    ReducedSystem {
        a: Mat::from_rows(&[vec![0.0, 1.0], vec![-eta, 1.0 + eta]]).expect("rectangular"),
        b: Mat::from_rows(&[vec![0.0], vec![-alpha]]).expect("rectangular"),
        c: Mat::from_rows(&[vec![-eta, 1.0 + eta]]).expect("rectangular"),
        e: Mat::from_rows(&[vec![0.0, 1.0]]).expect("rectangular"),
    }
}

/// 3×3 block anchoring the stacked state to the optimum: strong convexity
/// between the extrapolated point y_k and x*, with the clamp's lower bound c1
/// weighting the gradient column. Basis: (x_{k−1}−x*, x_k−x*, ∇f(y_k)).
pub fn anchor_matrix(params: &ProblemParams) -> SymMatrix {
    let ProblemParams { m, l, alpha, eta, c1, c2 } = *params;
    let op = 1.0 + eta;
    SymMatrix::from_rows(&[
        vec![-eta * eta * m / 2.0, eta * op * m / 2.0, -eta / (2.0 * c1)],
        vec![eta * op * m / 2.0, -op * op * m / 2.0, op / (2.0 * c1)],
        vec![
            -eta / (2.0 * c1),
            op / (2.0 * c1),
            alpha * alpha * l / 2.0 - alpha / c2,
        ],
    ])
    .expect("finite by construction")
}

/// 3×3 block bounding per-step objective progress f(x_{k+1}) − f(x_k). The
/// gradient couplings use the clamp bound that is binding for the given sign
/// of ∇f(y_k)ᵀ(y_k − x_k): c1 when non-negative, c2 when negative. Both cases
/// share the (3,3) entry α²L/2 − α/c2.
pub fn progress_matrix(params: &ProblemParams, case: PsiCase) -> SymMatrix {
    let ProblemParams { m, l, alpha, eta, c1, c2 } = *params;
    let cc = match case {
        PsiCase::Nonneg => c1,
        PsiCase::Neg => c2,
    };
    let q = eta * eta * m / 2.0;
    let w = eta / (2.0 * cc);
    SymMatrix::from_rows(&[
        vec![-q, q, -w],
        vec![q, -q, w],
        vec![-w, w, alpha * alpha * l / 2.0 - alpha / c2],
    ])
    .expect("finite by construction")
}

/// 3×3 embedding of the 2×2 sector block into the stacked-state basis via the
/// output map: N³ = Tᵀ·S·T with T = [[C, 0], [0, 1]] = [[−η, 1+η, 0], [0, 0, 1]].
pub fn sector_embedding(params: &ProblemParams) -> SymMatrix {
    let t = Mat::from_rows(&[vec![-params.eta, 1.0 + params.eta, 0.0], vec![0.0, 0.0, 1.0]])
        .expect("rectangular");
    sector_matrix(params)
        .congruent(&t)
        .expect("2x2 sector against 2x3 map")
}

/// The ρ²-discounted transition form M = [[AᵀPA − ρ²P, AᵀPB], [BᵀPA, BᵀPB]]
/// of the reduced system under Lyapunov weight P (2×2), assembled as a 3×3
/// symmetric matrix.
pub fn state_transition_form(
    system: &ReducedSystem,
    p: &SymMatrix,
    rho_sq: f64,
) -> Result<SymMatrix> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: p.dim(),
        });
    }
    let pm = p.to_mat();
    let at = system.a.transpose();
    let ata = at.mul(&pm).mul(&system.a);
    let atb = at.mul(&pm).mul(&system.b);
    let btb = system.b.transpose().mul(&pm).mul(&system.b);
    let tl = ata.add(&pm.scale(-rho_sq));
    Mat::from_rows(&[
        vec![tl.get(0, 0), tl.get(0, 1), atb.get(0, 0)],
        vec![tl.get(1, 0), tl.get(1, 1), atb.get(1, 0)],
        vec![atb.get(0, 0), atb.get(1, 0), btb.get(0, 0)],
    ])
    .expect("rectangular")
    .into_sym()
}

/// Assemble the full 3×3 reduced inequality for the accelerated method:
///
///   M + (1 − ρ²)·anchor + ρ²·progress(case) + h·sector_embedding  ⪯  0.
pub fn afoagd_lmi(
    params: &ProblemParams,
    p: &SymMatrix,
    rho_sq: f64,
    h: f64,
    case: PsiCase,
) -> Result<SymMatrix> {
    let system = afoagd_system(params.alpha, params.eta);
    let m_form = state_transition_form(&system, p, rho_sq)?;
    Ok(m_form
        .add(&anchor_matrix(params).scale(1.0 - rho_sq))
        .add(&progress_matrix(params, case).scale(rho_sq))
        .add(&sector_embedding(params).scale(h)))
}

// ---------------------------------------------------------------------------
// Certificate checking
// ---------------------------------------------------------------------------

/// Maximum eigenvalue of the inequality matrix a certificate asserts to be
/// negative semidefinite. Negative values measure the feasibility margin;
/// positive values quantify by how much the certificate fails.
pub fn certificate_slack(params: &ProblemParams, cert: &Certificate) -> Result<f64> {
    if cert.p.dim() != cert.case.p_dim() {
        return Err(Error::DimensionMismatch {
            expected: cert.case.p_dim(),
            got: cert.p.dim(),
        });
    }
    let lmi = match cert.case {
        CertCase::Afogd => afogd_lmi(params, cert.rho_sq, cert.h, cert.p.get(0, 0)),
        CertCase::AfoagdNonneg => {
            afoagd_lmi(params, &cert.p, cert.rho_sq, cert.h, PsiCase::Nonneg)?
        }
        CertCase::AfoagdNeg => afoagd_lmi(params, &cert.p, cert.rho_sq, cert.h, PsiCase::Neg)?,
    };
    let eigs = lmi.eigenvalues()?;
    Ok(*eigs.last().expect("nonempty spectrum"))
}

/// True iff the certificate is structurally admissible (ρ² ∈ (0,1), h ≥ 0,
/// P positive definite) and its inequality matrix is NSD within `tol`.
/// Range violations return `false` without evaluating the inequality.
pub fn check_certificate(params: &ProblemParams, cert: &Certificate, tol: f64) -> Result<bool> {
    if !(cert.rho_sq > 0.0 && cert.rho_sq < 1.0) || !(cert.h >= 0.0) || !cert.h.is_finite() {
        return Ok(false);
    }
    if cert.p.dim() != cert.case.p_dim() {
        return Err(Error::DimensionMismatch {
            expected: cert.case.p_dim(),
            got: cert.p.dim(),
        });
    }
    if !cert.p.is_pd(0.0)? {
        return Ok(false);
    }
    Ok(certificate_slack(params, cert)? <= tol)
}

/// Verdict for a two-case certificate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairVerdict {
    pub nonneg_valid: bool,
    pub neg_valid: bool,
    /// max(ρ_nonneg, ρ_neg); the rate the pair certifies when both cases hold.
    pub rate: f64,
}

impl PairVerdict {
    pub fn valid(&self) -> bool {
        self.nonneg_valid && self.neg_valid
    }
}

/// Check both ψ-cases of a pair with their respective (P, ρ², h).
pub fn check_certificate_pair(
    params: &ProblemParams,
    pair: &CertificatePair,
    tol: f64,
) -> Result<PairVerdict> {
    Ok(PairVerdict {
        nonneg_valid: check_certificate(params, &pair.nonneg, tol)?,
        neg_valid: check_certificate(params, &pair.neg, tol)?,
        rate: pair.certified_rate(),
    })
}

// ---------------------------------------------------------------------------
// Lyapunov functions and trajectory-level descent verification
// ---------------------------------------------------------------------------

/// Lyapunov value for the plain adaptive method: V(x) = p0·‖x − x*‖².
pub fn plain_lyapunov(p0: f64, x: &Vector, x_star: &Vector) -> f64 {
    let d = x.sub(x_star);
    p0 * d.dot(&d)
}

/// Lyapunov value for the accelerated method with 2×2 weight P on the stacked
/// state [x_{k−1}; x_k] plus the objective gap:
///
///   V = p11‖x_{k−1}−x*‖² + 2p12(x_{k−1}−x*)·(x_k−x*) + p22‖x_k−x*‖² + (f(x_k) − f*).
pub fn accelerated_lyapunov(
    p: &SymMatrix,
    x_prev: &Vector,
    x_cur: &Vector,
    x_star: &Vector,
    value_gap: f64,
) -> f64 {
    let u = x_prev.sub(x_star);
    let v = x_cur.sub(x_star);
    p.get(0, 0) * u.dot(&u) + 2.0 * p.get(0, 1) * u.dot(&v) + p.get(1, 1) * v.dot(&v) + value_gap
}

/// Outcome of walking a trajectory against per-step certified contraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentReport {
    /// Steps examined (trajectory transitions after the seed pair).
    pub steps: usize,
    /// Steps where V_{k+1} − ρ²·V_k exceeded the tolerance.
    pub violations: usize,
    /// Largest V_{k+1} − ρ²·V_k observed (≤ tol everywhere when valid).
    pub worst_slack: f64,
    /// How many steps fell in the non-negative ψ-case.
    pub nonneg_steps: usize,
}

/// Verify ‖x_{k+1} − x*‖² ≤ ρ²‖x_k − x*‖² + tol along a whole trajectory
/// (the plain method's certified contraction with V = ‖x − x*‖²).
pub fn verify_plain_descent(
    traj: &Trajectory,
    x_star: &Vector,
    rho_sq: f64,
    tol: f64,
) -> DescentReport {
    let mut report = DescentReport {
        steps: 0,
        violations: 0,
        worst_slack: f64::NEG_INFINITY,
        nonneg_steps: 0,
    };
    // Transitions driven by the update rule start at the second seed.
    for k in 1..traj.len().saturating_sub(1) {
        let v_cur = plain_lyapunov(1.0, &traj.iterates[k], x_star);
        let v_next = plain_lyapunov(1.0, &traj.iterates[k + 1], x_star);
        let slack = v_next - rho_sq * v_cur;
        report.steps += 1;
        report.worst_slack = report.worst_slack.max(slack);
        if slack > tol {
            report.violations += 1;
        }
    }
    report
}

/// Verify V_{k+1} ≤ ρ²V_k + tol along an accelerated-method trajectory, where
/// at each step the ψ-case is decided by sign(∇f(y_k)ᵀ(y_k − x_k)) and the
/// matching certificate from the pair supplies both P (for V on each side) and
/// ρ². Needs the extrapolation weight η the trajectory was produced with.
pub fn verify_accelerated_descent(
    obj: &AnyObjective,
    traj: &Trajectory,
    eta: f64,
    pair: &CertificatePair,
    x_star: &Vector,
    f_star: f64,
    tol: f64,
) -> Result<DescentReport> {
    let mut report = DescentReport {
        steps: 0,
        violations: 0,
        worst_slack: f64::NEG_INFINITY,
        nonneg_steps: 0,
    };
    for k in 1..traj.len().saturating_sub(1) {
        let x_prev = &traj.iterates[k - 1];
        let x_cur = &traj.iterates[k];
        let x_next = &traj.iterates[k + 1];
        let y = x_cur.add(&x_cur.sub(x_prev).scale(eta));
        let psi = obj.gradient(&y)?.dot(&y.sub(x_cur));
        let case = PsiCase::of_sign(psi);
        if case == PsiCase::Nonneg {
            report.nonneg_steps += 1;
        }
        let cert = pair.by_case(case);
        let v_cur = accelerated_lyapunov(
            &cert.p,
            x_prev,
            x_cur,
            x_star,
            traj.values[k] - f_star,
        );
        let v_next = accelerated_lyapunov(
            &cert.p,
            x_cur,
            x_next,
            x_star,
            traj.values[k + 1] - f_star,
        );
        let slack = v_next - cert.rho_sq * v_cur;
        report.steps += 1;
        report.worst_slack = report.worst_slack.max(slack);
        if slack > tol {
            report.violations += 1;
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Certificate search
// ---------------------------------------------------------------------------

/// Grid and bisection settings for the certificate search.
#[derive(Debug, Clone)]
pub struct SearchGrids {
    /// Lower end of the ρ² bisection interval (exclusive; must be ≥ 0).
    pub rho_sq_lo: f64,
    /// Upper end of the ρ² bisection interval (exclusive; must be ≤ 1).
    pub rho_sq_hi: f64,
    /// Bisection stops once the bracket is narrower than this.
    pub rho_sq_width: f64,
    /// Candidate sector multipliers h.
    pub h: Vec<f64>,
    /// Candidate values for each P entry (p11, p12, p22 all draw from it).
    pub p: Vec<f64>,
    /// Local refinement window half-width and step for h.
    pub h_refine_radius: f64,
    pub h_refine_step: f64,
    /// Local refinement window half-width and step for each P entry.
    pub p_refine_radius: f64,
    pub p_refine_step: f64,
    /// Whether to run the single local refinement pass.
    pub refine: bool,
}

fn grid_range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 0usize;
    loop {
        let v = lo + step * i as f64;
        if v > hi + step * 1e-9 {
            break;
        }
        out.push(v);
        i += 1;
    }
    out
}

impl Default for SearchGrids {
    fn default() -> Self {
        SearchGrids {
            rho_sq_lo: 0.0,
            rho_sq_hi: 1.0,
            rho_sq_width: 1e-3,
            h: grid_range(0.0, 2.0, 0.05),
            p: grid_range(-8.0, 8.0, 0.5),
            h_refine_radius: 0.05,
            h_refine_step: 0.005,
            p_refine_radius: 0.5,
            p_refine_step: 0.05,
            refine: true,
        }
    }
}

impl SearchGrids {
    pub fn validate(&self) -> Result<()> {
        if self.h.is_empty() || self.p.is_empty() {
            return Err(Error::InvalidInput("search grids must be non-empty".into()));
        }
        if !(self.rho_sq_lo >= 0.0
            && self.rho_sq_lo < self.rho_sq_hi
            && self.rho_sq_hi <= 1.0
            && self.rho_sq_width > 0.0)
        {
            return Err(Error::InvalidInput(format!(
                "bad bisection interval [{}, {}] width {}",
                self.rho_sq_lo, self.rho_sq_hi, self.rho_sq_width
            )));
        }
        Ok(())
    }
}

/// Precomputed per-case constant blocks, reused across every grid point.
struct CasePre {
    n1: SymMatrix,
    n2: SymMatrix,
    n3: SymMatrix,
    params: ProblemParams,
    case: PsiCase,
}

impl CasePre {
    fn new(params: &ProblemParams, case: PsiCase) -> CasePre {
        CasePre {
            n1: anchor_matrix(params),
            n2: progress_matrix(params, case),
            n3: sector_embedding(params),
            params: *params,
            case,
        }
    }

    /// Diagonal of the assembled inequality, cheap enough to act as a reject
    /// filter: every diagonal entry of an NSD matrix must be ≤ tol.
    fn diag(&self, p11: f64, p12: f64, p22: f64, rho_sq: f64, h: f64) -> [f64; 3] {
        let eta = self.params.eta;
        let alpha = self.params.alpha;
        let op = 1.0 + eta;
        let w = |i: usize| {
            (1.0 - rho_sq) * self.n1.get(i, i) + rho_sq * self.n2.get(i, i) + h * self.n3.get(i, i)
        };
        [
            eta * eta * p22 - rho_sq * p11 + w(0),
            p11 + 2.0 * op * p12 + op * op * p22 - rho_sq * p22 + w(1),
            alpha * alpha * p22 + w(2),
        ]
    }

    fn feasible(&self, p11: f64, p12: f64, p22: f64, rho_sq: f64, h: f64) -> bool {
        let d = self.diag(p11, p12, p22, rho_sq, h);
        if d.iter().any(|&v| v > 0.0) {
            return false;
        }
        let p = SymMatrix::from_row_major(2, &[p11, p12, p12, p22]).expect("finite grid values");
        match afoagd_lmi(&self.params, &p, rho_sq, h, self.case) {
            Ok(lmi) => lmi.is_nsd(0.0).unwrap_or(false),
            Err(_) => false,
        }
    }
}

/// Lexicographically first feasible (h, P) on the given slot grids, with P
/// restricted to positive definite matrices.
fn scan_case(
    pre: &CasePre,
    rho_sq: f64,
    h_grid: &[f64],
    p11s: &[f64],
    p12s: &[f64],
    p22s: &[f64],
) -> Option<(f64, SymMatrix)> {
    for &h in h_grid {
        for &p11 in p11s {
            if p11 <= 0.0 {
                continue;
            }
            for &p12 in p12s {
                for &p22 in p22s {
                    if p11 * p22 - p12 * p12 <= 0.0 {
                        continue;
                    }
                    if pre.feasible(p11, p12, p22, rho_sq, h) {
                        let p = SymMatrix::from_row_major(2, &[p11, p12, p12, p22])
                            .expect("finite grid values");
                        return Some((h, p));
                    }
                }
            }
        }
    }
    None
}

/// Grids for one case's scan: h plus one grid per P slot.
#[derive(Clone)]
struct SlotGrids {
    h: Vec<f64>,
    p11: Vec<f64>,
    p12: Vec<f64>,
    p22: Vec<f64>,
}

impl SlotGrids {
    fn coarse(grids: &SearchGrids) -> SlotGrids {
        SlotGrids {
            h: grids.h.clone(),
            p11: grids.p.clone(),
            p12: grids.p.clone(),
            p22: grids.p.clone(),
        }
    }

    fn refined_around(grids: &SearchGrids, h: f64, p: &SymMatrix) -> SlotGrids {
        let around = |v: f64| {
            grid_range(
                v - grids.p_refine_radius,
                v + grids.p_refine_radius,
                grids.p_refine_step,
            )
        };
        SlotGrids {
            h: grid_range(
                (h - grids.h_refine_radius).max(0.0),
                h + grids.h_refine_radius,
                grids.h_refine_step,
            ),
            p11: around(p.get(0, 0)),
            p12: around(p.get(0, 1)),
            p22: around(p.get(1, 1)),
        }
    }
}

type Witness = (f64, SymMatrix);

/// Both cases scanned (concurrently) at one ρ² level; feasible iff each case
/// has a witness. Join order is fixed by case, so the result is deterministic
/// regardless of scheduling.
fn pair_witnesses_at(
    pre_nonneg: &CasePre,
    pre_neg: &CasePre,
    rho_sq: f64,
    slots_nonneg: &SlotGrids,
    slots_neg: &SlotGrids,
) -> Option<(Witness, Witness)> {
    let (wn, wg) = std::thread::scope(|s| {
        let tn = s.spawn(|| {
            scan_case(
                pre_nonneg,
                rho_sq,
                &slots_nonneg.h,
                &slots_nonneg.p11,
                &slots_nonneg.p12,
                &slots_nonneg.p22,
            )
        });
        let tg = s.spawn(|| {
            scan_case(
                pre_neg,
                rho_sq,
                &slots_neg.h,
                &slots_neg.p11,
                &slots_neg.p12,
                &slots_neg.p22,
            )
        });
        (tn.join().expect("scan panicked"), tg.join().expect("scan panicked"))
    });
    Some((wn?, wg?))
}

/// Bisect ρ² downward over (lo, hi): returns the smallest feasible level found
/// (to within `width`) along with its witnesses, or None when even the top
/// probe level is infeasible.
fn bisect_pair(
    pre_nonneg: &CasePre,
    pre_neg: &CasePre,
    lo0: f64,
    hi0: f64,
    width: f64,
    slots_nonneg: &SlotGrids,
    slots_neg: &SlotGrids,
) -> Option<(f64, (Witness, Witness), f64)> {
    let top = hi0 - width;
    let mut best = pair_witnesses_at(pre_nonneg, pre_neg, top, slots_nonneg, slots_neg)
        .map(|w| (top, w))?;
    let mut lo = lo0;
    let mut hi = top;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        match pair_witnesses_at(pre_nonneg, pre_neg, mid, slots_nonneg, slots_neg) {
            Some(w) => {
                hi = mid;
                best = (mid, w);
            }
            None => lo = mid,
        }
    }
    Some((best.0, best.1, lo))
}

/// Search for a two-case certificate pair sharing one ρ²: outer bisection on
/// ρ², inner lexicographic scan over (h, p11, p12, p22) per case, followed by
/// one local refinement pass around the best point of each case. Returns the
/// pair at the smallest feasible ρ² found, or None if the grids admit nothing.
pub fn search_certificate(
    params: &ProblemParams,
    grids: &SearchGrids,
) -> Result<Option<CertificatePair>> {
    params.validate()?;
    grids.validate()?;
    let pre_nonneg = CasePre::new(params, PsiCase::Nonneg);
    let pre_neg = CasePre::new(params, PsiCase::Neg);
    let coarse = SlotGrids::coarse(grids);

    let Some((mut rho_sq, (mut wit_nonneg, mut wit_neg), lo_bound)) = bisect_pair(
        &pre_nonneg,
        &pre_neg,
        grids.rho_sq_lo,
        grids.rho_sq_hi,
        grids.rho_sq_width,
        &coarse,
        &coarse,
    ) else {
        return Ok(None);
    };

    if grids.refine && rho_sq - lo_bound.max(grids.rho_sq_lo) > grids.rho_sq_width {
        let slots_nonneg = SlotGrids::refined_around(grids, wit_nonneg.0, &wit_nonneg.1);
        let slots_neg = SlotGrids::refined_around(grids, wit_neg.0, &wit_neg.1);
        if let Some((r, (wn, wg), _)) = bisect_pair(
            &pre_nonneg,
            &pre_neg,
            grids.rho_sq_lo,
            rho_sq,
            grids.rho_sq_width,
            &slots_nonneg,
            &slots_neg,
        ) {
            if r < rho_sq {
                rho_sq = r;
                wit_nonneg = wn;
                wit_neg = wg;
            }
        }
    }

    Ok(Some(CertificatePair {
        nonneg: Certificate {
            case: CertCase::AfoagdNonneg,
            p: wit_nonneg.1,
            rho_sq,
            h: wit_nonneg.0,
        },
        neg: Certificate {
            case: CertCase::AfoagdNeg,
            p: wit_neg.1,
            rho_sq,
            h: wit_neg.0,
        },
    }))
}

/// Search for a single (P, ρ², h) satisfying BOTH ψ-case inequalities at once
/// (a case-independent Lyapunov function). Same bisection/scan/refinement
/// scheme as `search_certificate`.
pub fn search_common_certificate(
    params: &ProblemParams,
    grids: &SearchGrids,
) -> Result<Option<CommonCertificate>> {
    params.validate()?;
    grids.validate()?;
    let pre_nonneg = CasePre::new(params, PsiCase::Nonneg);
    let pre_neg = CasePre::new(params, PsiCase::Neg);

    let scan_both = |rho_sq: f64, slots: &SlotGrids| -> Option<Witness> {
        for &h in &slots.h {
            for &p11 in &slots.p11 {
                if p11 <= 0.0 {
                    continue;
                }
                for &p12 in &slots.p12 {
                    for &p22 in &slots.p22 {
                        if p11 * p22 - p12 * p12 <= 0.0 {
                            continue;
                        }
                        if pre_nonneg.feasible(p11, p12, p22, rho_sq, h)
                            && pre_neg.feasible(p11, p12, p22, rho_sq, h)
                        {
                            let p = SymMatrix::from_row_major(2, &[p11, p12, p12, p22])
                                .expect("finite grid values");
                            return Some((h, p));
                        }
                    }
                }
            }
        }
        None
    };

    let bisect = |lo0: f64, hi0: f64, slots: &SlotGrids| -> Option<(f64, Witness, f64)> {
        let top = hi0 - grids.rho_sq_width;
        let mut best = scan_both(top, slots).map(|w| (top, w))?;
        let (mut lo, mut hi) = (lo0, top);
        while hi - lo > grids.rho_sq_width {
            let mid = 0.5 * (lo + hi);
            match scan_both(mid, slots) {
                Some(w) => {
                    hi = mid;
                    best = (mid, w);
                }
                None => lo = mid,
            }
        }
        Some((best.0, best.1, lo))
    };

    let coarse = SlotGrids::coarse(grids);
    let Some((mut rho_sq, mut wit, lo_bound)) =
        bisect(grids.rho_sq_lo, grids.rho_sq_hi, &coarse)
    else {
        return Ok(None);
    };
    if grids.refine && rho_sq - lo_bound.max(grids.rho_sq_lo) > grids.rho_sq_width {
        let slots = SlotGrids::refined_around(grids, wit.0, &wit.1);
        if let Some((r, w, _)) = bisect(grids.rho_sq_lo, rho_sq, &slots) {
            if r < rho_sq {
                rho_sq = r;
                wit = w;
            }
        }
    }
    Ok(Some(CommonCertificate {
        p: wit.1,
        rho_sq,
        h: wit.0,
    }))
}

// ---------------------------------------------------------------------------
// Certificate documents
// ---------------------------------------------------------------------------

/// On-disk form of a certificate: the certificate itself, the NSD tolerance it
/// was checked at, and the problem parameters it refers to. Serializes to a
/// structured text document whose numbers round-trip bit-stably (printed with
/// 17 significant digits).
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateDoc {
    pub certificate: Certificate,
    pub tol: f64,
    pub params: ProblemParams,
}

impl CertificateDoc {
    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("case = \"{}\"\n", self.certificate.case));
        out.push_str(&format!("rho_sq = {:.16e}\n", self.certificate.rho_sq));
        out.push_str(&format!("h = {:.16e}\n", self.certificate.h));
        let entries: Vec<String> = self
            .certificate
            .p
            .row_major()
            .iter()
            .map(|v| format!("{:.16e}", v))
            .collect();
        out.push_str(&format!("p = [{}]\n", entries.join(", ")));
        out.push_str(&format!("tol = {:.16e}\n", self.tol));
        out.push_str("\n[params]\n");
        out.push_str(&format!("m = {:.16e}\n", self.params.m));
        out.push_str(&format!("l = {:.16e}\n", self.params.l));
        out.push_str(&format!("alpha = {:.16e}\n", self.params.alpha));
        out.push_str(&format!("eta = {:.16e}\n", self.params.eta));
        out.push_str(&format!("c1 = {:.16e}\n", self.params.c1));
        out.push_str(&format!("c2 = {:.16e}\n", self.params.c2));
        out
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct RawParams {
            m: f64,
            l: f64,
            alpha: f64,
            eta: f64,
            c1: f64,
            c2: f64,
        }
        #[derive(serde::Deserialize)]
        struct RawDoc {
            case: String,
            rho_sq: f64,
            h: f64,
            p: Vec<f64>,
            tol: f64,
            params: RawParams,
        }
        let raw: RawDoc = toml::from_str(text)
            .map_err(|e| Error::Parse(format!("certificate document: {}", e)))?;
        let case: CertCase = raw.case.parse()?;
        let dim = case.p_dim();
        if raw.p.len() != dim * dim {
            return Err(Error::Parse(format!(
                "certificate case {} needs {} p entries (row-major {}x{}), got {}",
                case,
                dim * dim,
                dim,
                dim,
                raw.p.len()
            )));
        }
        let p = SymMatrix::from_row_major(dim, &raw.p)?;
        let params = ProblemParams::new(
            raw.params.m,
            raw.params.l,
            raw.params.alpha,
            raw.params.eta,
            raw.params.c1,
            raw.params.c2,
        )?;
        Ok(CertificateDoc {
            certificate: Certificate {
                case,
                p,
                rho_sq: raw.rho_sq,
                h: raw.h,
            },
            tol: raw.tol,
            params,
        })
    }

    pub fn write_to(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string())
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn read_from(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        CertificateDoc::from_toml_str(&text)
    }
}
