//! One checker per inequality. Each returns an [`IneqRecord`] carrying the
//! refined verdict, the classical baseline it improves on, and the constants
//! of both.
//!
//! Checkers validate their hypotheses on the instance itself and return
//! [`Error::RegimeViolation`] instead of silently evaluating outside them.

mod amgm;
mod constants;
mod kantorovich;
mod lin;
mod polya;
mod wielandt;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{check_choi, norm_amgm_sides, PositiveMapSpec};
use crate::params::{BoundParams, Regime};
use crate::spd::{
    loewner_leq_scaled, loewner_ratio_scaled, operator_norm, scalar_leq_scaled, scalar_ratio,
    CheckVerdict, Matrix, SpdMatrix, Vector,
};

pub use amgm::{check_lemma_refined_amgm, scalar_refined_amgm};
pub use constants::{refinement_constants, ConstantRow, ConstantsTable};
pub use kantorovich::{
    check_holder_mccarthy_refined, check_kantorovich_classical, check_kantorovich_product_refined,
    check_kantorovich_refined, check_square_order_refined,
};
pub use lin::{check_lin_chain, check_lin_refined_squared, LinVariant};
pub use polya::{check_isometry_family_bound, check_polya_szego_refined};
pub use wielandt::{check_wielandt_operator, check_wielandt_scalar, WielandtVariant};

/// Relative tolerance used when re-verifying an instance's hypotheses.
pub const REGIME_TOL: f64 = 1e-9;

/// Tolerance on `‖x‖ = 1` and `⟨x, y⟩ = 0`.
pub const VECTOR_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    ScalarAmgm,
    LemmaAmgm,
    Kantorovich,
    KantorovichProduct,
    HolderMccarthy,
    SquareOrder,
    PolyaSzego,
    IsometryFamily,
    LinSquaredMapped,
    LinSquaredMeans,
    LinChain,
    WielandtScalar,
    WielandtBhatiaDavis,
    WielandtGumus,
    WielandtRefined,
    Choi,
    NormAmgm,
}

impl TheoremId {
    pub const ALL: [TheoremId; 17] = [
        TheoremId::ScalarAmgm,
        TheoremId::LemmaAmgm,
        TheoremId::Kantorovich,
        TheoremId::KantorovichProduct,
        TheoremId::HolderMccarthy,
        TheoremId::SquareOrder,
        TheoremId::PolyaSzego,
        TheoremId::IsometryFamily,
        TheoremId::LinSquaredMapped,
        TheoremId::LinSquaredMeans,
        TheoremId::LinChain,
        TheoremId::WielandtScalar,
        TheoremId::WielandtBhatiaDavis,
        TheoremId::WielandtGumus,
        TheoremId::WielandtRefined,
        TheoremId::Choi,
        TheoremId::NormAmgm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::ScalarAmgm => "scalar_amgm",
            TheoremId::LemmaAmgm => "lemma_amgm",
            TheoremId::Kantorovich => "kantorovich",
            TheoremId::KantorovichProduct => "kantorovich_product",
            TheoremId::HolderMccarthy => "holder_mccarthy",
            TheoremId::SquareOrder => "square_order",
            TheoremId::PolyaSzego => "polya_szego",
            TheoremId::IsometryFamily => "isometry_family",
            TheoremId::LinSquaredMapped => "lin_squared_mapped",
            TheoremId::LinSquaredMeans => "lin_squared_means",
            TheoremId::LinChain => "lin_chain",
            TheoremId::WielandtScalar => "wielandt_scalar",
            TheoremId::WielandtBhatiaDavis => "wielandt_bhatia_davis",
            TheoremId::WielandtGumus => "wielandt_gumus",
            TheoremId::WielandtRefined => "wielandt_refined",
            TheoremId::Choi => "choi",
            TheoremId::NormAmgm => "norm_amgm",
        }
    }

    /// Hypothesis regime the theorem's parameters live in.
    pub fn regime(self) -> Regime {
        match self {
            TheoremId::ScalarAmgm
            | TheoremId::WielandtScalar
            | TheoremId::WielandtBhatiaDavis
            | TheoremId::WielandtGumus
            | TheoremId::Choi
            | TheoremId::NormAmgm => Regime::Plain,
            TheoremId::LemmaAmgm => Regime::Relative,
            TheoremId::KantorovichProduct | TheoremId::PolyaSzego => Regime::Shifted,
            TheoremId::Kantorovich
            | TheoremId::HolderMccarthy
            | TheoremId::SquareOrder
            | TheoremId::IsometryFamily => Regime::SelfInverseLow,
            TheoremId::LinSquaredMapped | TheoremId::LinSquaredMeans | TheoremId::LinChain => {
                Regime::Sandwich
            }
            TheoremId::WielandtRefined => Regime::SelfInverseHigh,
        }
    }

    /// Power `p` with which `1 + (ln c)²/8` divides the classical constant;
    /// 0 for results that have no refined form.
    pub fn refinement_power(self) -> i32 {
        match self {
            TheoremId::Kantorovich
            | TheoremId::KantorovichProduct
            | TheoremId::HolderMccarthy
            | TheoremId::SquareOrder
            | TheoremId::LinSquaredMapped
            | TheoremId::LinSquaredMeans => 2,
            TheoremId::ScalarAmgm
            | TheoremId::LemmaAmgm
            | TheoremId::PolyaSzego
            | TheoremId::IsometryFamily
            | TheoremId::LinChain
            | TheoremId::WielandtRefined => 1,
            TheoremId::WielandtScalar
            | TheoremId::WielandtBhatiaDavis
            | TheoremId::WielandtGumus
            | TheoremId::Choi
            | TheoremId::NormAmgm => 0,
        }
    }

    /// Theorems quantified over unit vectors.
    pub fn uses_unit_vectors(self) -> bool {
        matches!(
            self,
            TheoremId::Kantorovich
                | TheoremId::KantorovichProduct
                | TheoremId::HolderMccarthy
                | TheoremId::WielandtScalar
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem id '{s}'")))
    }
}

/// One side of a checked inequality.
#[derive(Clone, Debug, PartialEq)]
pub enum Operand {
    Scalar(f64),
    Matrix(Matrix),
}

impl Operand {
    /// The scalar itself, or the operator norm of a matrix.
    pub fn magnitude(&self) -> f64 {
        match self {
            Operand::Scalar(v) => *v,
            Operand::Matrix(m) => operator_norm(m),
        }
    }
}

/// Instance identity attached by the campaign layer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub seed: u64,
    pub dim: usize,
    pub params: BoundParams,
}

/// An evaluated bound `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bound {
    pub lhs: Operand,
    pub rhs: Operand,
    pub verdict: CheckVerdict,
    /// `lhs / rhs` for scalars, `λ_max(R^{-1/2} L R^{-1/2})` for operators.
    pub ratio: f64,
}

impl Bound {
    /// Scalar bound with tolerance measured against `scale`.
    pub fn scalar(lhs: f64, rhs: f64, tol: f64, scale: f64) -> Self {
        Self {
            lhs: Operand::Scalar(lhs),
            rhs: Operand::Scalar(rhs),
            verdict: scalar_leq_scaled(lhs, rhs, tol, scale),
            ratio: scalar_ratio(lhs, rhs, tol, scale),
        }
    }

    /// Loewner bound with tolerance relative to `‖rhs‖`.
    pub fn loewner(lhs: Matrix, rhs: Matrix, tol: f64) -> Result<Self> {
        let scale = operator_norm(&rhs);
        Self::loewner_scaled(lhs, rhs, tol, scale)
    }

    pub fn loewner_scaled(lhs: Matrix, rhs: Matrix, tol: f64, scale: f64) -> Result<Self> {
        let verdict = loewner_leq_scaled(&lhs, &rhs, tol, scale)?;
        let ratio = loewner_ratio_scaled(&lhs, &rhs, tol, scale)?;
        Ok(Self {
            lhs: Operand::Matrix(lhs),
            rhs: Operand::Matrix(rhs),
            verdict,
            ratio,
        })
    }
}

/// A comparison bound evaluated on the same instance (the classical result
/// a refinement improves on, or a conjectured sharper constant).
#[derive(Clone, Debug, PartialEq)]
pub struct Baseline {
    pub rhs_scale: f64,
    pub bound: Bound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IneqRecord {
    pub theorem: TheoremId,
    /// Which inequality of the theorem this is (`refined`, a proof-chain
    /// link such as `mean_inverse`, ...).
    pub label: &'static str,
    pub lhs: Operand,
    pub rhs: Operand,
    pub verdict: CheckVerdict,
    pub ratio: f64,
    pub classical: Option<Baseline>,
    /// Conjectured bound, reported but never counted as a violation.
    pub reference: Option<Baseline>,
    pub classical_rhs_scale: f64,
    pub refined_rhs_scale: f64,
    pub improvement_ratio: f64,
    pub fingerprint: Option<Fingerprint>,
}

impl IneqRecord {
    pub(crate) fn new(
        theorem: TheoremId,
        label: &'static str,
        bound: Bound,
        refined_rhs_scale: f64,
        classical: Option<Baseline>,
    ) -> Self {
        let classical_rhs_scale = classical
            .as_ref()
            .map_or(refined_rhs_scale, |b| b.rhs_scale);
        let improvement_ratio = if classical_rhs_scale != 0.0 {
            refined_rhs_scale / classical_rhs_scale
        } else {
            1.0
        };
        Self {
            theorem,
            label,
            lhs: bound.lhs,
            rhs: bound.rhs,
            verdict: bound.verdict,
            ratio: bound.ratio,
            classical,
            reference: None,
            classical_rhs_scale,
            refined_rhs_scale,
            improvement_ratio,
            fingerprint: None,
        }
    }

    pub(crate) fn with_reference(mut self, reference: Baseline) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn with_fingerprint(mut self, fingerprint: Fingerprint) -> Self {
        self.fingerprint = Some(fingerprint);
        self
    }

    /// Refined verdict and classical baseline both hold.
    pub fn holds(&self) -> bool {
        self.verdict.holds
            && self
                .classical
                .as_ref()
                .is_none_or(|b| b.bound.verdict.holds)
    }

    pub fn classical_ratio(&self) -> Option<f64> {
        self.classical.as_ref().map(|b| b.bound.ratio)
    }
}

// Hypothesis checks shared by the checkers.

pub(crate) fn require_feasible(regime: Regime, params: &BoundParams) -> Result<()> {
    regime.check_feasible(params)
}

/// Spectrum of `a` inside `[lo, hi]` up to [`REGIME_TOL`].
pub(crate) fn require_spectrum(
    regime: Regime,
    what: &str,
    a: &SpdMatrix,
    lo: f64,
    hi: f64,
) -> Result<()> {
    let (min, max) = (a.min_eigenvalue(), a.max_eigenvalue());
    if min < lo * (1.0 - REGIME_TOL) {
        return Err(Error::violation(
            regime,
            format!("{what}: smallest eigenvalue {min} below {lo}"),
        ));
    }
    if max > hi * (1.0 + REGIME_TOL) {
        return Err(Error::violation(
            regime,
            format!("{what}: largest eigenvalue {max} above {hi}"),
        ));
    }
    Ok(())
}

/// `lo ≤ hi` in the Loewner order up to [`REGIME_TOL`].
pub(crate) fn require_order(regime: Regime, what: &str, lo: &Matrix, hi: &Matrix) -> Result<()> {
    let scale = operator_norm(lo).max(operator_norm(hi));
    let v = loewner_leq_scaled(lo, hi, REGIME_TOL, scale)?;
    if !v.holds {
        return Err(Error::violation(
            regime,
            format!("{what} fails (smallest gap eigenvalue {:e})", v.min_gap_eig),
        ));
    }
    Ok(())
}

pub(crate) fn require_unit(x: &Vector) -> Result<()> {
    let norm = x.norm();
    if (norm - 1.0).abs() > VECTOR_TOL {
        return Err(Error::NotUnitVector { norm });
    }
    Ok(())
}

pub(crate) fn require_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn require_map_dim(spec: &PositiveMapSpec, n: usize) -> Result<()> {
    require_dim(spec.in_dim(), n)
}

/// Choi's inequality `Φ(T)⁻¹ ≤ Φ(T⁻¹)` as a record.
pub fn check_choi_record(spec: &PositiveMapSpec, t: &SpdMatrix, tol: f64) -> Result<IneqRecord> {
    require_map_dim(spec, t.dim())?;
    let lhs = spec.apply_spd(t)?.inv().into_matrix();
    let rhs = spec.apply(t.inv().matrix())?;
    let bound = Bound::loewner(lhs, rhs, tol)?;
    debug_assert_eq!(bound.verdict.holds, check_choi(spec, t, tol)?.holds);
    Ok(IneqRecord::new(TheoremId::Choi, "choi", bound, 1.0, None))
}

/// `‖AB‖ ≤ ¼‖A + B‖²` for positive semidefinite `A`, `B` as a record.
pub fn check_norm_amgm_record(a: &Matrix, b: &Matrix, tol: f64) -> Result<IneqRecord> {
    let (lhs, rhs) = norm_amgm_sides(a, b)?;
    let bound = Bound::scalar(lhs, rhs, tol, rhs);
    Ok(IneqRecord::new(
        TheoremId::NormAmgm,
        "norm_amgm",
        bound,
        0.25,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
            assert_eq!(
                serde_json::to_string(&t).unwrap(),
                format!("\"{}\"", t.as_str())
            );
        }
        assert!("kantorovitch".parse::<TheoremId>().is_err());
    }

    #[test]
    fn choi_record_on_trace_normalize() {
        let spec = PositiveMapSpec::trace_normalize(2);
        let t = SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap();
        let r = check_choi_record(&spec, &t, 1e-9).unwrap();
        assert!(r.holds());
        assert!((r.verdict.min_gap_eig - 0.225).abs() < 1e-14);
        assert!((r.ratio - 0.64).abs() < 1e-14);
    }

    #[test]
    fn norm_amgm_record_examples() {
        let r =
            check_norm_amgm_record(&Matrix::identity(2, 2), &Matrix::identity(2, 2), 1e-9).unwrap();
        assert!(r.holds());
        assert!(r.verdict.min_gap_eig.abs() < 1e-14);
        let a = Matrix::from_diagonal(&Vector::from_vec(vec![4.0, 0.0]));
        let b = Matrix::from_diagonal(&Vector::from_vec(vec![0.0, 4.0]));
        let r = check_norm_amgm_record(&a, &b, 1e-9).unwrap();
        assert_eq!(r.lhs, Operand::Scalar(0.0));
        assert_eq!(r.rhs, Operand::Scalar(4.0));
    }
}
