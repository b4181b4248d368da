//! Wielandt-type bounds on the cross terms of `A` between orthogonal
//! subspaces.
//!
//! The scalar form is `|⟨x,Ay⟩|² ≤ W·⟨x,Ax⟩⟨y,Ay⟩`; the variant with
//! `⟨x,Ay⟩⟨y,Ay⟩` on the right does not hold in general. The operator forms
//! take `Φ(YᵀAX)` as third factor, and `Φ⁻¹(T)` means `Φ(T)⁻¹`.

use crate::error::{Error, Result};
use crate::maps::PositiveMapSpec;
use crate::params::{gumus_constant, refinement_factor, wielandt_constant, BoundParams, Regime};
use crate::sampling::IsometryPair;
use crate::spd::{make_spd, operator_norm, spectral_norm, Matrix, SpdMatrix, Vector};

use super::{
    require_dim, require_feasible, require_map_dim, require_spectrum, require_unit, Baseline,
    Bound, IneqRecord, TheoremId, VECTOR_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WielandtVariant {
    /// `Φ(XᵀAY) Φ(YᵀAY)⁻¹ Φ(YᵀAX) ≤ ((M−m)/(M+m))² Φ(XᵀAX)`.
    BhatiaDavis,
    /// `‖Φ(XᵀAY) Φ(YᵀAY)⁻¹ Φ(YᵀAX) Φ(XᵀAX)⁻¹‖ ≤ (M−m)²/(2√(Mm)(M+m))`.
    Gumus,
    /// The Gumus bound divided by `1 + (ln m')²/8`, under
    /// `mI ≤ m'A⁻¹ ≤ A ≤ MI`.
    Refined,
}

impl WielandtVariant {
    pub fn theorem(self) -> TheoremId {
        match self {
            WielandtVariant::BhatiaDavis => TheoremId::WielandtBhatiaDavis,
            WielandtVariant::Gumus => TheoremId::WielandtGumus,
            WielandtVariant::Refined => TheoremId::WielandtRefined,
        }
    }
}

/// `|⟨x,Ay⟩|² ≤ ((M−m)/(M+m))²·⟨x,Ax⟩⟨y,Ay⟩` for orthogonal unit `x`, `y`
/// and `mI ≤ A ≤ MI`.
pub fn check_wielandt_scalar(
    a: &SpdMatrix,
    x: &Vector,
    y: &Vector,
    m: f64,
    big_m: f64,
    tol: f64,
) -> Result<IneqRecord> {
    let params = BoundParams::plain(m, big_m)?;
    let regime = Regime::Plain;
    require_feasible(regime, &params)?;
    require_spectrum(regime, "A", a, m, big_m)?;
    require_dim(a.dim(), x.len())?;
    require_dim(a.dim(), y.len())?;
    require_unit(x)?;
    require_unit(y)?;
    let overlap = x.dot(y).abs();
    if overlap > VECTOR_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    let cross = x.dot(&(a.matrix() * y));
    let diag = a.quad(x) * a.quad(y);
    let w = wielandt_constant(m, big_m);
    Ok(IneqRecord::new(
        TheoremId::WielandtScalar,
        "corrected",
        Bound::scalar(cross * cross, w * diag, tol, diag),
        w,
        None,
    ))
}

fn positive_image(spec: &PositiveMapSpec, t: &Matrix, what: &'static str) -> Result<SpdMatrix> {
    make_spd(&spec.apply(t)?).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::RankDeficient(what),
        other => other,
    })
}

/// Operator Wielandt bounds for a 2-positive catalog map acting on `r×r`
/// matrices and isometries `X`, `Y` with `XᵀY = 0`.
///
/// The norm variants also report the conjectured constant
/// `((M−m)/(M+m))²` as a reference that is not counted as a violation.
pub fn check_wielandt_operator(
    spec: &PositiveMapSpec,
    a: &SpdMatrix,
    pair: &IsometryPair,
    params: &BoundParams,
    variant: WielandtVariant,
    tol: f64,
) -> Result<IneqRecord> {
    let (x, y) = (pair.x(), pair.y());
    require_dim(a.dim(), x.nrows())?;
    require_map_dim(spec, pair.rank())?;
    let (m, big_m) = (params.m, params.big_m);
    match variant {
        WielandtVariant::BhatiaDavis | WielandtVariant::Gumus => {
            let regime = Regime::Plain;
            require_feasible(regime, params)?;
            require_spectrum(regime, "A", a, m, big_m)?;
        }
        WielandtVariant::Refined => {
            let regime = Regime::SelfInverseHigh;
            let w = regime.window(params)?;
            require_spectrum(regime, "A", a, w.lo, w.hi)?;
        }
    }

    let xa = x.transpose() * a.matrix();
    let ya = y.transpose() * a.matrix();
    let p_xax = positive_image(spec, &(&xa * x), "Φ(XᵀAX)")?;
    let p_yay = positive_image(spec, &(&ya * y), "Φ(YᵀAY)")?;
    let p_xay = spec.apply(&(&xa * y))?;
    let p_yax = spec.apply(&(&ya * x))?;
    let z = &p_xay * p_yay.inv().matrix() * &p_yax;

    let wc = wielandt_constant(m, big_m);
    if variant == WielandtVariant::BhatiaDavis {
        // The right side vanishes when m = M, so the tolerance is measured
        // against Φ(XᵀAX) itself.
        let scale = operator_norm(p_xax.matrix());
        let bound = Bound::loewner_scaled(z, p_xax.matrix() * wc, tol, scale)?;
        return Ok(IneqRecord::new(
            variant.theorem(),
            "bhatia_davis",
            bound,
            wc,
            None,
        ));
    }

    if variant == WielandtVariant::Refined {
        // Derived precondition mI ≤ Φ(XᵀAX) ≤ MI.
        require_spectrum(Regime::SelfInverseHigh, "Φ(XᵀAX)", &p_xax, m, big_m)?;
    }
    let lhs = spectral_norm(&(&z * p_xax.inv().matrix()));
    let g = gumus_constant(m, big_m);
    let scalar = |rhs: f64| Bound::scalar(lhs, rhs, tol, rhs.max(f64::EPSILON));
    let reference = Baseline {
        rhs_scale: wc,
        bound: scalar(wc),
    };
    let record = match variant {
        WielandtVariant::Gumus => IneqRecord::new(variant.theorem(), "gumus", scalar(g), g, None),
        _ => {
            let gr = g / refinement_factor(params.m_prime);
            let classical = Baseline {
                rhs_scale: g,
                bound: scalar(g),
            };
            IneqRecord::new(
                variant.theorem(),
                "refined",
                scalar(gr),
                gr,
                Some(classical),
            )
        }
    };
    Ok(record.with_reference(reference))
}
