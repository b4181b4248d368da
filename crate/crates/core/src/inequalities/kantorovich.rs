//! Kantorovich-type bounds: the product form, the self-inverse form, the
//! reverse Hölder-McCarthy inequality and the square-order bound.
//!
//! All refined constants are `K(h) / (1 + (ln m')²/8)²` with `h = M/m`.

use crate::error::Result;
use crate::means::geometric_mean;
use crate::params::{kantorovich_constant, refinement_factor, BoundParams, Regime};
use crate::spd::{SpdMatrix, Vector};

use super::{
    require_dim, require_feasible, require_order, require_spectrum, require_unit, Baseline, Bound,
    IneqRecord, TheoremId,
};

/// Spectral form of `mI ≤ A`, `mI ≤ m'A ≤ A⁻¹ ≤ MI`.
pub(crate) fn require_self_inverse_low(a: &SpdMatrix, p: &BoundParams) -> Result<()> {
    let regime = Regime::SelfInverseLow;
    require_feasible(regime, p)?;
    let w = regime.window(p)?;
    require_spectrum(regime, "A", a, w.lo, w.hi)
}

fn quad(a: &SpdMatrix, x: &Vector) -> f64 {
    a.quad(x)
}

fn refined_constant(p: &BoundParams) -> (f64, f64) {
    let k = p.k_h();
    let f = refinement_factor(p.m_prime);
    (k, k / (f * f))
}

fn scalar_pair(
    theorem: TheoremId,
    lhs: f64,
    base: f64,
    classical_k: f64,
    refined_k: f64,
    tol: f64,
) -> IneqRecord {
    let rhs = refined_k * base;
    let classical_rhs = classical_k * base;
    let classical = Baseline {
        rhs_scale: classical_k,
        bound: Bound::scalar(lhs, classical_rhs, tol, classical_rhs),
    };
    IneqRecord::new(
        theorem,
        "refined",
        Bound::scalar(lhs, rhs, tol, rhs),
        refined_k,
        Some(classical),
    )
}

/// `⟨Ax,x⟩⟨Bx,x⟩ ≤ K(h)/(1 + (ln m')²/8)² · ⟨(A#B)x,x⟩²` under
/// `mI ≤ A`, `mI ≤ m'A ≤ B ≤ MI`; the classical baseline drops the divisor.
///
/// The displayed source inequality omits the square on `⟨(A#B)x,x⟩`; the
/// squared form is the one that is homogeneous and provable.
pub fn check_kantorovich_product_refined(
    a: &SpdMatrix,
    b: &SpdMatrix,
    x: &Vector,
    params: &BoundParams,
    tol: f64,
) -> Result<IneqRecord> {
    let regime = Regime::Shifted;
    require_feasible(regime, params)?;
    require_dim(a.dim(), b.dim())?;
    require_dim(a.dim(), x.len())?;
    require_unit(x)?;
    require_spectrum(regime, "A", a, params.m, f64::INFINITY)?;
    require_order(
        regime,
        "m'A ≤ B",
        &(a.matrix() * params.m_prime),
        b.matrix(),
    )?;
    require_spectrum(regime, "B", b, 0.0, params.big_m)?;

    let g = quad(&geometric_mean(a, b)?, x);
    let lhs = quad(a, x) * quad(b, x);
    let (k, kr) = refined_constant(params);
    Ok(scalar_pair(
        TheoremId::KantorovichProduct,
        lhs,
        g * g,
        k,
        kr,
        tol,
    ))
}

/// `⟨Ax,x⟩⟨A⁻¹x,x⟩ ≤ K(h)/(1 + (ln m')²/8)²` under `mI ≤ A`,
/// `mI ≤ m'A ≤ A⁻¹ ≤ MI`, against the Kantorovich constant `K(h)`.
pub fn check_kantorovich_refined(
    a: &SpdMatrix,
    x: &Vector,
    m: f64,
    m_prime: f64,
    big_m: f64,
    tol: f64,
) -> Result<IneqRecord> {
    let params = BoundParams::with_multiplier(m, m_prime, big_m)?;
    require_self_inverse_low(a, &params)?;
    require_dim(a.dim(), x.len())?;
    require_unit(x)?;
    let lhs = quad(a, x) * quad(&a.inv(), x);
    let (k, kr) = refined_constant(&params);
    Ok(scalar_pair(TheoremId::Kantorovich, lhs, 1.0, k, kr, tol))
}

/// The classical Kantorovich inequality `⟨Ax,x⟩⟨A⁻¹x,x⟩ ≤ K(M/m)` for
/// `mI ≤ A ≤ MI`.
pub fn check_kantorovich_classical(
    a: &SpdMatrix,
    x: &Vector,
    m: f64,
    big_m: f64,
    tol: f64,
) -> Result<IneqRecord> {
    let params = BoundParams::plain(m, big_m)?;
    let regime = Regime::Plain;
    require_feasible(regime, &params)?;
    require_spectrum(regime, "A", a, m, big_m)?;
    require_dim(a.dim(), x.len())?;
    require_unit(x)?;
    let lhs = quad(a, x) * quad(&a.inv(), x);
    let k = kantorovich_constant(params.h());
    Ok(IneqRecord::new(
        TheoremId::Kantorovich,
        "classical",
        Bound::scalar(lhs, k, tol, k),
        k,
        None,
    ))
}

/// `⟨A²x,x⟩ ≤ K(h)/(1 + (ln m')²/8)² · ⟨Ax,x⟩²` in the self-inverse regime,
/// against the reverse Hölder-McCarthy constant `K(h)`.
pub fn check_holder_mccarthy_refined(
    a: &SpdMatrix,
    x: &Vector,
    params: &BoundParams,
    tol: f64,
) -> Result<IneqRecord> {
    require_self_inverse_low(a, params)?;
    require_dim(a.dim(), x.len())?;
    require_unit(x)?;
    let ax = a.matrix() * x;
    let lhs = ax.dot(&ax);
    let q = quad(a, x);
    let (k, kr) = refined_constant(params);
    Ok(scalar_pair(
        TheoremId::HolderMccarthy,
        lhs,
        q * q,
        k,
        kr,
        tol,
    ))
}

/// `A² ≤ K(h)/(1 + (ln m')²/8)² · B²` for `A ≤ B` with `A` in the
/// self-inverse regime, against `A² ≤ K(h)·B²`. Nothing bounds `B` above.
pub fn check_square_order_refined(
    a: &SpdMatrix,
    b: &SpdMatrix,
    params: &BoundParams,
    tol: f64,
) -> Result<IneqRecord> {
    require_self_inverse_low(a, params)?;
    require_dim(a.dim(), b.dim())?;
    require_order(Regime::SelfInverseLow, "A ≤ B", a.matrix(), b.matrix())?;
    let a2 = a.square().into_matrix();
    let b2 = b.square().into_matrix();
    let (k, kr) = refined_constant(params);
    let classical = Baseline {
        rhs_scale: k,
        bound: Bound::loewner(a2.clone(), &b2 * k, tol)?,
    };
    Ok(IneqRecord::new(
        TheoremId::SquareOrder,
        "refined",
        Bound::loewner(a2, &b2 * kr, tol)?,
        kr,
        Some(classical),
    ))
}
