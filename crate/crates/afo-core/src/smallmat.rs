//! Dense linear algebra for small problems: vectors of any fixed dimension,
//! general rectangular matrices used to assemble quadratic forms, and
//! symmetric matrices up to dimension 6 with a cyclic-Jacobi eigensolver
//! sufficient for positive/negative-semidefiniteness certification.

use crate::error::{Error, Result};

/// Largest symmetric dimension the eigensolver accepts.
pub const MAX_SYM_DIM: usize = 6;

/// Convergence threshold factor for the Jacobi sweep: iteration stops once the
/// off-diagonal Frobenius norm falls below this multiple of the on-diagonal norm.
const JACOBI_REL_TOL: f64 = 1e-12;

/// Upper bound on Jacobi sweeps; dimensions this small converge in a handful.
const JACOBI_MAX_SWEEPS: usize = 100;

// ---------------------------------------------------------------------------
// Vector
// ---------------------------------------------------------------------------

/// Fixed-length column vector.
///
/// Entries are expected to be finite in normal operation, but construction does
/// not enforce it: divergence experiments legitimately record the non-finite
/// iterate that terminated them. Operations that require finiteness
/// (eigensolves, objective evaluation) check at their own boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<f64>,
}

impl Vector {
    pub fn new(entries: Vec<f64>) -> Self {
        Vector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector {
            entries: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.entries.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    /// self + other; panics on dimension mismatch (programmer error).
    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// self - other; panics on dimension mismatch.
    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector::new(self.entries.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Euclidean norm.
    pub fn norm2(&self) -> f64 {
        self.dot(self).sqrt()
    }
}

impl From<&[f64]> for Vector {
    fn from(s: &[f64]) -> Self {
        Vector::new(s.to_vec())
    }
}

// ---------------------------------------------------------------------------
// Mat: general rectangular matrix (assembly plumbing)
// ---------------------------------------------------------------------------

/// Small general matrix, row-major. Used to assemble the state-space blocks and
/// congruence transforms that feed the symmetric certificate matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Mat {
            rows,
            cols,
            a: data,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidInput("matrix needs at least one row".into()));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            a: rows.concat(),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// self * other; panics on inner-dimension mismatch (programmer error).
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix inner dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0.0;
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "matrix dimension mismatch");
        assert_eq!(self.cols, other.cols, "matrix dimension mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    /// Kronecker product self ⊗ I_n, used to expand per-coordinate blocks to
    /// full problem dimension.
    pub fn kron_identity(&self, n: usize) -> Mat {
        let mut out = Mat::zeros(self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                for k in 0..n {
                    out.set(i * n + k, j * n + k, v);
                }
            }
        }
        out
    }

    /// Reinterpret a square matrix as symmetric, averaging out floating-point
    /// asymmetry from products such as AᵀPA.
    pub fn into_sym(self) -> Result<SymMatrix> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(format!(
                "cannot symmetrize a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let rows: Vec<Vec<f64>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j)).collect())
            .collect();
        SymMatrix::from_rows(&rows)
    }
}

/// Solve the square linear system `a · x = b` by Gaussian elimination with
/// partial pivoting. Returns a degenerate-objective error on (numerical)
/// singularity, since every call site is solving for a minimizer.
pub fn solve(a: &Mat, b: &Vector) -> Result<Vector> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::InvalidInput("solve requires a square matrix".into()));
    }
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.dim(),
        });
    }
    let mut m: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| a.get(i, j)))
        .collect();
    let mut rhs: Vec<f64> = b.as_slice().to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i * n + col]
                    .abs()
                    .total_cmp(&m[j * n + col].abs())
            })
            .unwrap();
        if m[pivot * n + col].abs() < 1e-300 {
            return Err(Error::DegenerateObjective(
                "singular system in minimizer solve".into(),
            ));
        }
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
            }
            rhs.swap(col, pivot);
        }
        let d = m[col * n + col];
        for row in col + 1..n {
            let f = m[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[row * n + j] -= f * m[col * n + j];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for j in row + 1..n {
            acc -= m[row * n + j] * x[j];
        }
        x[row] = acc / m[row * n + row];
    }
    Ok(Vector::new(x))
}

// ---------------------------------------------------------------------------
// SymMatrix
// ---------------------------------------------------------------------------

/// Dense symmetric matrix of dimension ≤ 6.
///
/// Construction symmetrizes (averages mirrored entries) and validates
/// finiteness, so every stored instance satisfies `get(i,j) == get(j,i)`
/// bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    a: Vec<f64>, // row-major dim*dim, exactly symmetric
}

impl SymMatrix {
    /// Build from full rows; mirrored entries are averaged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > MAX_SYM_DIM {
            return Err(Error::InvalidInput(format!(
                "symmetric dimension must be 1..={}, got {}",
                MAX_SYM_DIM, dim
            )));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        let mut a = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                // Bit-equal entries (the whole diagonal, and exactly symmetric
                // input) pass through untouched; halving before summing keeps
                // the average of two large finite entries from overflowing.
                let v = if rows[i][j].to_bits() == rows[j][i].to_bits() {
                    rows[i][j]
                } else {
                    0.5 * rows[i][j] + 0.5 * rows[j][i]
                };
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "non-finite entry at ({}, {})",
                        i, j
                    )));
                }
                a[i * dim + j] = v;
            }
        }
        Ok(SymMatrix { dim, a })
    }

    /// Build from a row-major slice of length dim².
    pub fn from_row_major(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {0}x{0} matrix, got {}",
                dim,
                data.len()
            )));
        }
        let rows: Vec<Vec<f64>> = (0..dim)
            .map(|i| data[i * dim..(i + 1) * dim].to_vec())
            .collect();
        SymMatrix::from_rows(&rows)
    }

    pub fn diag(entries: &[f64]) -> Result<Self> {
        let dim = entries.len();
        let mut rows = vec![vec![0.0; dim]; dim];
        for (i, &v) in entries.iter().enumerate() {
            rows[i][i] = v;
        }
        SymMatrix::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix::diag(&vec![1.0; dim]).expect("identity dimensions are valid")
    }

    pub fn zero(dim: usize) -> Self {
        SymMatrix::diag(&vec![0.0; dim]).expect("zero dimensions are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.dim + j]
    }

    pub fn row_major(&self) -> &[f64] {
        &self.a
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim, "symmetric dimension mismatch");
        SymMatrix {
            dim: self.dim,
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            a: self.a.iter().map(|v| v * s).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Determinant by cofactor expansion; fine for dimension ≤ 6.
    pub fn det(&self) -> f64 {
        fn det_cols(a: &[f64], rows: &[usize], cols: &[usize], n: usize) -> f64 {
            if rows.is_empty() {
                return 1.0;
            }
            let r = rows[0];
            let rest = &rows[1..];
            let mut acc = 0.0;
            let mut sign = 1.0;
            for (pos, &c) in cols.iter().enumerate() {
                let v = a[r * n + c];
                if v != 0.0 {
                    let sub: Vec<usize> = cols
                        .iter()
                        .enumerate()
                        .filter(|(p, _)| *p != pos)
                        .map(|(_, &cc)| cc)
                        .collect();
                    acc += sign * v * det_cols(a, rest, &sub, n);
                }
                sign = -sign;
            }
            acc
        }
        let idx: Vec<usize> = (0..self.dim).collect();
        det_cols(&self.a, &idx, &idx, self.dim)
    }

    /// Expand to the Kronecker product self ⊗ I_n; the result dimension must
    /// stay within the eigensolver's limit.
    pub fn kron_identity(&self, n: usize) -> Result<SymMatrix> {
        let dim = self.dim * n;
        if dim > MAX_SYM_DIM {
            return Err(Error::InvalidInput(format!(
                "kronecker expansion to dimension {} exceeds limit {}",
                dim, MAX_SYM_DIM
            )));
        }
        let mut rows = vec![vec![0.0; dim]; dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..n {
                    rows[i * n + k][j * n + k] = self.get(i, j);
                }
            }
        }
        SymMatrix::from_rows(&rows)
    }

    /// Congruence transform tᵀ · self · t, symmetrized; `t` must have
    /// `self.dim()` rows.
    pub fn congruent(&self, t: &Mat) -> Result<SymMatrix> {
        if t.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: t.rows(),
            });
        }
        let s = self.to_mat();
        t.transpose().mul(&s).mul(t).into_sym()
    }

    pub fn to_mat(&self) -> Mat {
        Mat {
            rows: self.dim,
            cols: self.dim,
            a: self.a.clone(),
        }
    }

    /// All eigenvalues in ascending order, by cyclic Jacobi rotations.
    ///
    /// Sweeps run until the off-diagonal Frobenius norm drops below 1e-12 of
    /// the on-diagonal norm, with a hard cap of 100 sweeps (far more than
    /// dimension ≤ 6 ever needs).
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.a.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(
                "non-finite entry in eigensolver input".into(),
            ));
        }
        let n = self.dim;
        let mut a = self.a.clone();
        let off = |a: &[f64]| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        s += a[i * n + j] * a[i * n + j];
                    }
                }
            }
            s.sqrt()
        };
        let ondiag = |a: &[f64]| -> f64 {
            (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum::<f64>().sqrt()
        };
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            if off(&a) <= JACOBI_REL_TOL * ondiag(&a) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    // Rotation that annihilates the (p, q) entry.
                    let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        1.0 / (tau - (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Columns p and q.
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    // Rows p and q.
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        eigs.sort_by(|x, y| x.total_cmp(y));
        Ok(eigs)
    }

    /// Negative semidefinite test: max eigenvalue ≤ tol.
    pub fn is_nsd(&self, tol: f64) -> Result<bool> {
        assert!(tol >= 0.0, "tolerance must be non-negative");
        let eigs = self.eigenvalues()?;
        Ok(*eigs.last().expect("dim >= 1") <= tol)
    }

    /// Positive definite test: min eigenvalue > tol.
    pub fn is_pd(&self, tol: f64) -> Result<bool> {
        assert!(tol >= 0.0, "tolerance must be non-negative");
        let eigs = self.eigenvalues()?;
        Ok(eigs[0] > tol)
    }
}
