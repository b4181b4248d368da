//! Dense symmetric positive-definite matrices.
//!
//! Every matrix function goes through one primitive: the symmetric
//! eigendecomposition `A = Q diag(λ) Qᵀ`, with eigenvalues kept in ascending
//! order. Loewner comparisons are decided on the smallest eigenvalue of the
//! (re-symmetrized) difference, measured relative to the norm of the larger
//! side so verdicts survive rescaling of the whole instance.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Default relative tolerance for Loewner-order verdicts.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `(X + Xᵀ) / 2`.
pub fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

fn ensure_square(m: &Matrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(m.nrows())
}

fn ensure_same_dim(a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(())
}

/// Eigendecomposition of the symmetric part of `m`, eigenvalues ascending.
pub fn sym_eigen(m: &Matrix) -> (Vector, Matrix) {
    let eig = SymmetricEigen::new(symmetrize(m));
    sort_ascending(eig.eigenvalues, eig.eigenvectors)
}

fn sort_ascending(values: Vector, vectors: Matrix) -> (Vector, Matrix) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted = Vector::from_iterator(n, order.iter().map(|&i| values[i]));
    let mut q = Matrix::zeros(vectors.nrows(), n);
    for (dst, &src) in order.iter().enumerate() {
        q.set_column(dst, &vectors.column(src));
    }
    (sorted, q)
}

fn min_eigenvalue(m: &Matrix) -> f64 {
    sym_eigen(m).0.min()
}

/// Largest absolute eigenvalue of a symmetric matrix.
pub fn operator_norm(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let (vals, _) = sym_eigen(a);
    vals.min().abs().max(vals.max().abs())
}

/// Largest singular value of an arbitrary matrix, via the eigenvalues of `XᵀX`.
pub fn spectral_norm(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = a.transpose() * a;
    sym_eigen(&gram).0.max().max(0.0).sqrt()
}

/// Closed spectral window `[lo, hi]` with `0 < lo ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SpectralInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi < lo {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, v: f64, rel_tol: f64) -> bool {
        v >= self.lo * (1.0 - rel_tol) && v <= self.hi * (1.0 + rel_tol)
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }

    pub fn ratio(&self) -> f64 {
        self.hi / self.lo
    }
}

/// Functions available through [`matrix_function`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFn {
    Sqrt,
    Inv,
    InvSqrt,
    Square,
    Log,
}

impl MatrixFn {
    fn eval(self, x: f64) -> f64 {
        match self {
            MatrixFn::Sqrt => x.sqrt(),
            MatrixFn::Inv => x.recip(),
            MatrixFn::InvSqrt => x.sqrt().recip(),
            MatrixFn::Square => x * x,
            MatrixFn::Log => x.ln(),
        }
    }
}

/// A symmetric positive-definite matrix together with its eigendecomposition.
///
/// The entries are exactly symmetric and the cached pair reproduces them:
/// `Q diag(λ) Qᵀ ≈ entries` to roundoff relative to `λ_max`.
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    entries: Matrix,
    eigenvalues: Vector,
    eigenvectors: Matrix,
}

impl SpdMatrix {
    /// Symmetrizes `raw` and checks that every eigenvalue is positive.
    pub fn new(raw: &Matrix) -> Result<Self> {
        ensure_square(raw)?;
        if raw.is_empty() {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let entries = symmetrize(raw);
        let eig = SymmetricEigen::new(entries.clone());
        let (eigenvalues, eigenvectors) = sort_ascending(eig.eigenvalues, eig.eigenvectors);
        if eigenvalues[0] <= 0.0 || !eigenvalues[0].is_finite() {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: eigenvalues[0],
            });
        }
        Ok(Self {
            entries,
            eigenvalues,
            eigenvectors,
        })
    }

    /// Builds `Q diag(values) Qᵀ` for an orthogonal `frame` without a second
    /// eigensolve.
    pub fn from_spectrum(values: &[f64], frame: &Matrix) -> Result<Self> {
        let n = values.len();
        if frame.nrows() != n || frame.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: frame.nrows(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: bad,
            });
        }
        let (eigenvalues, eigenvectors) =
            sort_ascending(Vector::from_column_slice(values), frame.clone());
        let entries = symmetrize(
            &(&eigenvectors * Matrix::from_diagonal(&eigenvalues) * eigenvectors.transpose()),
        );
        Ok(Self {
            entries,
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        assert!(c > 0.0, "scaled identity needs a positive scale");
        Self {
            entries: Matrix::identity(n, n) * c,
            eigenvalues: Vector::from_element(n, c),
            eigenvectors: Matrix::identity(n, n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_spectrum(diag, &Matrix::identity(diag.len(), diag.len()))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }

    pub fn eigenvalues(&self) -> &Vector {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn spectral_bounds(&self) -> SpectralInterval {
        SpectralInterval {
            lo: self.min_eigenvalue(),
            hi: self.max_eigenvalue(),
        }
    }

    /// `Q f(Λ) Qᵀ` for an arbitrary scalar function.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let fvals = self.eigenvalues.map(f);
        symmetrize(
            &(&self.eigenvectors * Matrix::from_diagonal(&fvals) * self.eigenvectors.transpose()),
        )
    }

    /// Same as [`map_spectrum`](Self::map_spectrum) for functions known to
    /// stay positive, keeping the eigenbasis.
    fn map_positive(&self, f: impl Fn(f64) -> f64) -> SpdMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&v| f(v)).collect();
        SpdMatrix::from_spectrum(&values, &self.eigenvectors)
            .expect("positive spectral map of an SPD matrix")
    }

    pub fn sqrt(&self) -> SpdMatrix {
        self.map_positive(f64::sqrt)
    }

    pub fn inv(&self) -> SpdMatrix {
        self.map_positive(f64::recip)
    }

    pub fn inv_sqrt(&self) -> SpdMatrix {
        self.map_positive(|v| v.sqrt().recip())
    }

    pub fn square(&self) -> SpdMatrix {
        self.map_positive(|v| v * v)
    }

    pub fn log(&self) -> Matrix {
        self.map_spectrum(f64::ln)
    }

    /// `c·A` for `c > 0`.
    pub fn scale(&self, c: f64) -> SpdMatrix {
        self.map_positive(|v| c * v)
    }

    /// `⟨Ax, x⟩`.
    pub fn quad(&self, x: &Vector) -> f64 {
        x.dot(&(&self.entries * x))
    }
}

/// Validating constructor: symmetrizes `raw` and caches its eigendecomposition.
pub fn make_spd(raw: &Matrix) -> Result<SpdMatrix> {
    SpdMatrix::new(raw)
}

/// `Q f(Λ) Qᵀ`. Every function except `Log` yields a positive-definite result.
pub fn matrix_function(a: &SpdMatrix, f: MatrixFn) -> Matrix {
    a.map_spectrum(|v| f.eval(v))
}

/// `mI ≤ A ≤ MI` with the tightest `(m, M)`.
pub fn spectral_bounds(a: &SpdMatrix) -> SpectralInterval {
    a.spectral_bounds()
}

/// Outcome of an order comparison `LHS ≤ RHS`.
///
/// `min_gap_eig` is `λ_min(RHS − LHS)` (or `rhs − lhs` for scalars) and the
/// comparison holds iff `min_gap_eig ≥ −tol_used · scale`, where `scale` is
/// the operator norm of the right-hand side unless a checker supplies a more
/// natural magnitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub holds: bool,
    pub min_gap_eig: f64,
    pub rel_slack: f64,
    pub tol_used: f64,
}

impl CheckVerdict {
    pub fn from_gap(gap: f64, scale: f64, tol: f64) -> Self {
        let scale = scale.abs();
        let rel_slack = if scale > 0.0 { gap / scale } else { gap };
        Self {
            holds: gap >= -tol * scale,
            min_gap_eig: gap,
            rel_slack,
            tol_used: tol,
        }
    }

    /// Slack below which a holding comparison is reported as near-tight.
    pub fn is_near_tight(&self) -> bool {
        self.holds && self.rel_slack < 1e-3
    }
}

/// Loewner comparison `A ≤ B` with tolerance relative to `‖B‖`.
pub fn loewner_leq(a: &Matrix, b: &Matrix, tol: f64) -> Result<CheckVerdict> {
    let scale = operator_norm(b);
    loewner_leq_scaled(a, b, tol, scale)
}

/// Loewner comparison with an explicit tolerance scale.
pub fn loewner_leq_scaled(a: &Matrix, b: &Matrix, tol: f64, scale: f64) -> Result<CheckVerdict> {
    ensure_same_dim(a, b)?;
    ensure_square(a)?;
    ensure_square(b)?;
    let gap = min_eigenvalue(&(b - a));
    Ok(CheckVerdict::from_gap(gap, scale, tol))
}

/// Scalar comparison `lhs ≤ rhs` with tolerance relative to `|rhs|`.
pub fn scalar_leq(lhs: f64, rhs: f64, tol: f64) -> CheckVerdict {
    CheckVerdict::from_gap(rhs - lhs, rhs, tol)
}

/// Scalar comparison with an explicit tolerance scale.
pub fn scalar_leq_scaled(lhs: f64, rhs: f64, tol: f64, scale: f64) -> CheckVerdict {
    CheckVerdict::from_gap(rhs - lhs, scale, tol)
}

/// Attained ratio of a scalar bound. Zero right-hand sides give 0 when the
/// left side vanishes too (within `tol·scale`), otherwise `f64::MAX`.
pub fn scalar_ratio(lhs: f64, rhs: f64, tol: f64, scale: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs <= tol * scale.abs() {
        0.0
    } else {
        f64::MAX
    }
}

/// Order-respecting ratio `λ_max(R^{-1/2} L R^{-1/2})` of `L ≤ R`; it is at
/// most 1 exactly when `L ≤ R`. Singular `R` falls back like [`scalar_ratio`].
pub fn loewner_ratio(lhs: &Matrix, rhs: &Matrix, tol: f64) -> Result<f64> {
    loewner_ratio_scaled(lhs, rhs, tol, operator_norm(rhs))
}

/// [`loewner_ratio`] with the singular-`R` fallback measured against `scale`.
pub fn loewner_ratio_scaled(lhs: &Matrix, rhs: &Matrix, tol: f64, scale: f64) -> Result<f64> {
    ensure_same_dim(lhs, rhs)?;
    let r = match SpdMatrix::new(rhs) {
        Ok(r) if r.min_eigenvalue() > 1e-14 * scale => r,
        _ => {
            let top = sym_eigen(lhs).0.max();
            return Ok(if top <= tol * scale { 0.0 } else { f64::MAX });
        }
    };
    let w = r.inv_sqrt();
    let core = w.matrix() * lhs * w.matrix();
    Ok(sym_eigen(&core).0.max())
}

/// `true` when `m` is PSD up to `tol` relative to its norm.
pub fn is_psd(m: &Matrix, tol: f64) -> bool {
    min_eigenvalue(m) >= -tol * operator_norm(m).max(f64::MIN_POSITIVE)
}
