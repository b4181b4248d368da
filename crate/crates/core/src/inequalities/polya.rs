use crate::error::Result;
use crate::maps::PositiveMapSpec;
use crate::means::geometric_mean;
use crate::params::{polya_szego_constant, refinement_factor, BoundParams, Regime};
use crate::spd::{Matrix, SpdMatrix};

use super::kantorovich::require_self_inverse_low;
use super::{
    require_dim, require_feasible, require_map_dim, require_order, require_spectrum, Baseline,
    Bound, IneqRecord, TheoremId,
};

fn constants(p: &BoundParams) -> (f64, f64) {
    let c = polya_szego_constant(p.m, p.big_m);
    (c, c / refinement_factor(p.m_prime))
}

fn record(
    theorem: TheoremId,
    lhs: Matrix,
    base: &Matrix,
    p: &BoundParams,
    tol: f64,
) -> Result<IneqRecord> {
    let (c, cr) = constants(p);
    let classical = Baseline {
        rhs_scale: c,
        bound: Bound::loewner(lhs.clone(), base * c, tol)?,
    };
    Ok(IneqRecord::new(
        theorem,
        "refined",
        Bound::loewner(lhs, base * cr, tol)?,
        cr,
        Some(classical),
    ))
}

/// `Φ(A)#Φ(B) ≤ (M+m)/(2√(Mm)(1 + (ln m')²/8)) · Φ(A#B)` under `mI ≤ A`,
/// `mI ≤ m'A ≤ B ≤ MI`, against the operator Pólya–Szegő inequality.
pub fn check_polya_szego_refined(
    spec: &PositiveMapSpec,
    a: &SpdMatrix,
    b: &SpdMatrix,
    params: &BoundParams,
    tol: f64,
) -> Result<IneqRecord> {
    let regime = Regime::Shifted;
    require_feasible(regime, params)?;
    require_dim(a.dim(), b.dim())?;
    require_map_dim(spec, a.dim())?;
    require_spectrum(regime, "A", a, params.m, f64::INFINITY)?;
    require_order(
        regime,
        "m'A ≤ B",
        &(a.matrix() * params.m_prime),
        b.matrix(),
    )?;
    require_spectrum(regime, "B", b, 0.0, params.big_m)?;

    let lhs = geometric_mean(&spec.apply_spd(a)?, &spec.apply_spd(b)?)?.into_matrix();
    let base = spec.apply(geometric_mean(a, b)?.matrix())?;
    record(TheoremId::PolyaSzego, lhs, &base, params, tol)
}

/// `(Σ UⱼᵀAUⱼ) # (Σ UⱼᵀA⁻¹Uⱼ) ≤ (M+m)/(2√(Mm)(1 + (ln m')²/8)) · I` for a
/// family with `Σ UⱼᵀUⱼ = I` and `A` in the self-inverse regime.
pub fn check_isometry_family_bound(
    family: &[Matrix],
    a: &SpdMatrix,
    params: &BoundParams,
    tol: f64,
) -> Result<IneqRecord> {
    let spec = PositiveMapSpec::congruence_sum(family.to_vec())?;
    require_map_dim(&spec, a.dim())?;
    require_self_inverse_low(a, params)?;
    let lhs = geometric_mean(&spec.apply_spd(a)?, &spec.apply_spd(&a.inv())?)?.into_matrix();
    let n = spec.out_dim();
    record(
        TheoremId::IsometryFamily,
        lhs,
        &Matrix::identity(n, n),
        params,
        tol,
    )
}
