use crate::error::{Error, Result};
use crate::means::{arithmetic_mean, geometric_mean};
use crate::params::{refinement_factor, Regime};
use crate::spd::SpdMatrix;

use super::{require_dim, require_spectrum, Baseline, Bound, IneqRecord, TheoremId};

/// `(1 + (ln b − ln a)²/8)·√(ab) ≤ (a + b)/2`, against the plain AM-GM
/// inequality.
pub fn scalar_refined_amgm(a: f64, b: f64, tol: f64) -> Result<IneqRecord> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scalar AM-GM needs positive inputs, got a = {a}, b = {b}"
        )));
    }
    let f = refinement_factor(b / a);
    let gm = (a * b).sqrt();
    let am = 0.5 * (a + b);
    let refined = Bound::scalar(f * gm, am, tol, am);
    let classical = Baseline {
        rhs_scale: 1.0,
        bound: Bound::scalar(gm, am, tol, am),
    };
    Ok(IneqRecord::new(
        TheoremId::ScalarAmgm,
        "refined",
        refined,
        1.0 / f,
        Some(classical),
    ))
}

/// `(1 + (ln m)²/8)·(A # B) ≤ (A + B)/2` whenever `mA ≤ B` with `1 < m`.
///
/// The hypothesis is verified on `A^{-1/2} B A^{-1/2}`.
pub fn check_lemma_refined_amgm(
    a: &SpdMatrix,
    b: &SpdMatrix,
    m: f64,
    tol: f64,
) -> Result<IneqRecord> {
    let regime = Regime::Relative;
    if !(m.is_finite() && m > 1.0) {
        return Err(Error::infeasible(
            regime,
            format!("requires 1 < m, got m = {m}"),
        ));
    }
    require_dim(a.dim(), b.dim())?;
    let w = a.inv_sqrt();
    let c = SpdMatrix::new(&(w.matrix() * b.matrix() * w.matrix()))?;
    require_spectrum(regime, "A^{-1/2}BA^{-1/2}", &c, m, f64::INFINITY)?;

    let f = refinement_factor(m);
    let gm = geometric_mean(a, b)?.into_matrix();
    let am = arithmetic_mean(a, b)?.into_matrix();
    let refined = Bound::loewner(&gm * f, am.clone(), tol)?;
    let classical = Baseline {
        rhs_scale: 1.0,
        bound: Bound::loewner(gm, am, tol)?,
    };
    Ok(IneqRecord::new(
        TheoremId::LemmaAmgm,
        "refined",
        refined,
        1.0 / f,
        Some(classical),
    ))
}
