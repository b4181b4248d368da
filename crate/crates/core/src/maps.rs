//! Catalog of positive unital linear maps.
//!
//! Every kind here is completely positive (a sum of congruences or a
//! conditional expectation), so it is in particular 2-positive. Arbitrary
//! user maps are not accepted.

use crate::error::{Error, Result};
use crate::spd::{is_psd, loewner_leq, make_spd, operator_norm, CheckVerdict, Matrix, SpdMatrix};

/// Tolerance for the unitality conditions `VᵀV = I`, `Σ UⱼᵀUⱼ = I`.
pub const UNITAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum MapKind {
    Identity,
    /// `T ↦ VᵀTV` for a column-orthonormal `n×r` matrix `V`.
    Compression {
        v: Matrix,
    },
    /// `T ↦ Σ UⱼᵀTUⱼ` with `Σ UⱼᵀUⱼ = I`.
    CongruenceSum {
        us: Vec<Matrix>,
    },
    /// `T ↦ (tr T / n)·I`.
    TraceNormalize,
    /// Keeps the diagonal blocks of a partition of the indices.
    Pinching {
        blocks: Vec<Vec<usize>>,
    },
}

/// A validated positive unital map from `in_dim×in_dim` to `out_dim×out_dim`
/// matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveMapSpec {
    kind: MapKind,
    in_dim: usize,
    out_dim: usize,
}

fn gram_defect(m: &Matrix) -> f64 {
    (m.transpose() * m - Matrix::identity(m.ncols(), m.ncols())).amax()
}

impl PositiveMapSpec {
    pub fn identity(n: usize) -> Self {
        Self {
            kind: MapKind::Identity,
            in_dim: n,
            out_dim: n,
        }
    }

    pub fn compression(v: Matrix) -> Result<Self> {
        let (n, r) = v.shape();
        if r == 0 || r > n {
            return Err(Error::InvalidMap(format!(
                "compression needs 1 ≤ r ≤ n, got {n}x{r}"
            )));
        }
        let defect = gram_defect(&v);
        if defect > UNITAL_TOL {
            return Err(Error::InvalidMap(format!(
                "compression matrix is not column-orthonormal (|VᵀV − I| = {defect:e})"
            )));
        }
        Ok(Self {
            kind: MapKind::Compression { v },
            in_dim: n,
            out_dim: r,
        })
    }

    pub fn congruence_sum(us: Vec<Matrix>) -> Result<Self> {
        let first = us
            .first()
            .ok_or_else(|| Error::InvalidMap("empty congruence family".into()))?;
        let n = first.nrows();
        if us.iter().any(|u| u.shape() != (n, n)) {
            return Err(Error::InvalidMap(
                "congruence family must consist of n×n matrices".into(),
            ));
        }
        let total = us
            .iter()
            .fold(Matrix::zeros(n, n), |acc, u| acc + u.transpose() * u);
        let defect = (total - Matrix::identity(n, n)).amax();
        if defect > UNITAL_TOL {
            return Err(Error::InvalidMap(format!(
                "Σ UⱼᵀUⱼ differs from I by {defect:e}"
            )));
        }
        Ok(Self {
            kind: MapKind::CongruenceSum { us },
            in_dim: n,
            out_dim: n,
        })
    }

    pub fn trace_normalize(n: usize) -> Self {
        Self {
            kind: MapKind::TraceNormalize,
            in_dim: n,
            out_dim: n,
        }
    }

    pub fn pinching(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || seen[i] {
                return Err(Error::InvalidMap(format!(
                    "pinching blocks must partition 0..{n}; index {i} is out of range or repeated"
                )));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) || blocks.iter().any(Vec::is_empty) {
            return Err(Error::InvalidMap(format!(
                "pinching blocks must partition 0..{n} into non-empty blocks"
            )));
        }
        Ok(Self {
            kind: MapKind::Pinching { blocks },
            in_dim: n,
            out_dim: n,
        })
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            MapKind::Identity => "identity",
            MapKind::Compression { .. } => "compression",
            MapKind::CongruenceSum { .. } => "congruence_sum",
            MapKind::TraceNormalize => "trace_normalize",
            MapKind::Pinching { .. } => "pinching",
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Applies the map to any square matrix of size `in_dim`; the maps are
    /// linear on all matrices, not only symmetric ones.
    pub fn apply(&self, t: &Matrix) -> Result<Matrix> {
        if t.shape() != (self.in_dim, self.in_dim) {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                found: t.nrows(),
            });
        }
        Ok(match &self.kind {
            MapKind::Identity => t.clone(),
            MapKind::Compression { v } => v.transpose() * t * v,
            MapKind::CongruenceSum { us } => us
                .iter()
                .fold(Matrix::zeros(self.in_dim, self.in_dim), |acc, u| {
                    acc + u.transpose() * t * u
                }),
            MapKind::TraceNormalize => {
                Matrix::identity(self.out_dim, self.out_dim) * (t.trace() / self.in_dim as f64)
            }
            MapKind::Pinching { blocks } => {
                let mut out = Matrix::zeros(self.in_dim, self.in_dim);
                for block in blocks {
                    for &i in block {
                        for &j in block {
                            out[(i, j)] = t[(i, j)];
                        }
                    }
                }
                out
            }
        })
    }

    /// `Φ(A)` for positive-definite `A`; the image is again positive definite.
    pub fn apply_spd(&self, a: &SpdMatrix) -> Result<SpdMatrix> {
        make_spd(&self.apply(a.matrix())?)
    }
}

pub fn apply_map(spec: &PositiveMapSpec, t: &Matrix) -> Result<Matrix> {
    spec.apply(t)
}

/// Choi's inequality `Φ(T)⁻¹ ≤ Φ(T⁻¹)`.
pub fn check_choi(spec: &PositiveMapSpec, t: &SpdMatrix, tol: f64) -> Result<CheckVerdict> {
    let lhs = spec.apply_spd(t)?.inv();
    let rhs = spec.apply(t.inv().matrix())?;
    loewner_leq(lhs.matrix(), &rhs, tol)
}

/// `‖AB‖ ≤ ¼‖A + B‖²` for positive semidefinite `A`, `B`; scalar slack.
pub fn check_norm_amgm(a: &Matrix, b: &Matrix, tol: f64) -> Result<CheckVerdict> {
    let (lhs, rhs) = norm_amgm_sides(a, b)?;
    Ok(crate::spd::scalar_leq(lhs, rhs, tol))
}

pub(crate) fn norm_amgm_sides(a: &Matrix, b: &Matrix) -> Result<(f64, f64)> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    for m in [a, b] {
        if !is_psd(m, 1e-12) {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: crate::spd::sym_eigen(m).0.min(),
            });
        }
    }
    let lhs = crate::spd::spectral_norm(&(a * b));
    let s = operator_norm(&(a + b));
    Ok((lhs, 0.25 * s * s))
}
