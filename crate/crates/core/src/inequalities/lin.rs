//! Squared reverse AM-GM bounds for unital positive maps in the sandwich
//! regime `mI ≤ A ≤ m'I ≤ M'I ≤ B ≤ MI`, and the chain of intermediate
//! inequalities they are derived from.

use crate::error::Result;
use crate::maps::PositiveMapSpec;
use crate::means::{arithmetic_mean, geometric_mean};
use crate::params::{kantorovich_constant, refinement_factor, BoundParams, Regime};
use crate::spd::{make_spd, spectral_norm, Matrix, SpdMatrix};

use super::{
    require_dim, require_feasible, require_map_dim, require_spectrum, Baseline, Bound, IneqRecord,
    TheoremId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinVariant {
    /// `Φ²((A+B)/2) ≤ c·Φ²(A#B)`.
    MappedMean,
    /// `Φ²((A+B)/2) ≤ c·(Φ(A)#Φ(B))²`.
    MeanOfMaps,
}

impl LinVariant {
    pub fn theorem(self) -> TheoremId {
        match self {
            LinVariant::MappedMean => TheoremId::LinSquaredMapped,
            LinVariant::MeanOfMaps => TheoremId::LinSquaredMeans,
        }
    }
}

fn require_sandwich(
    spec: &PositiveMapSpec,
    a: &SpdMatrix,
    b: &SpdMatrix,
    p: &BoundParams,
) -> Result<()> {
    let regime = Regime::Sandwich;
    require_feasible(regime, p)?;
    require_dim(a.dim(), b.dim())?;
    require_map_dim(spec, a.dim())?;
    require_spectrum(regime, "A", a, p.m, p.m_prime)?;
    require_spectrum(regime, "B", b, p.big_m_prime, p.big_m)
}

fn square(m: &Matrix) -> Matrix {
    m * m
}

/// Refinement divisor `1 + (ln(M'/m'))²/8` of the sandwich regime.
fn sandwich_factor(p: &BoundParams) -> f64 {
    refinement_factor(p.big_m_prime / p.m_prime)
}

/// Refined squared bound with constant `K²(h)/(1 + (ln(M'/m'))²/8)²`,
/// against the unrefined `K²(h)`.
pub fn check_lin_refined_squared(
    spec: &PositiveMapSpec,
    a: &SpdMatrix,
    b: &SpdMatrix,
    params: &BoundParams,
    variant: LinVariant,
    tol: f64,
) -> Result<IneqRecord> {
    require_sandwich(spec, a, b, params)?;
    let k = kantorovich_constant(params.h());
    let c = k * k;
    let f = sandwich_factor(params);
    let cr = c / (f * f);

    let lhs = square(&spec.apply(arithmetic_mean(a, b)?.matrix())?);
    let base = match variant {
        LinVariant::MappedMean => square(&spec.apply(geometric_mean(a, b)?.matrix())?),
        LinVariant::MeanOfMaps => {
            square(geometric_mean(&spec.apply_spd(a)?, &spec.apply_spd(b)?)?.matrix())
        }
    };
    let classical = Baseline {
        rhs_scale: c,
        bound: Bound::loewner(lhs.clone(), &base * c, tol)?,
    };
    Ok(IneqRecord::new(
        variant.theorem(),
        "refined",
        Bound::loewner(lhs, &base * cr, tol)?,
        cr,
        Some(classical),
    ))
}

/// Link labels of [`check_lin_chain`], in order.
pub const LIN_CHAIN_LINKS: [&str; 7] = [
    "endpoint_a",
    "endpoint_b",
    "endpoint_sum",
    "mean_inverse",
    "mapped_inverse",
    "choi_step",
    "norm",
];

/// Every intermediate inequality of the derivation, in order:
///
/// - `endpoint_a` `A/2 + Mm·A⁻¹/2 ≤ (M+m)/2·I`, and `endpoint_b` the same for `B`;
/// - `endpoint_sum` their sum;
/// - `mean_inverse` `(A+B)/2 + Mm·F·(A#B)⁻¹ ≤ (M+m)I`;
/// - `mapped_inverse` `Φ((A+B)/2) + Mm·F·Φ((A#B)⁻¹) ≤ (M+m)I`;
/// - `choi_step` `Φ((A+B)/2) + Mm·F·Φ(A#B)⁻¹ ≤ (M+m)I`;
/// - `norm` `‖Φ((A+B)/2)·Φ(A#B)⁻¹‖ ≤ K(h)/F`, with `F = 1 + (ln(M'/m'))²/8`.
pub fn check_lin_chain(
    spec: &PositiveMapSpec,
    a: &SpdMatrix,
    b: &SpdMatrix,
    params: &BoundParams,
    tol: f64,
) -> Result<Vec<IneqRecord>> {
    require_sandwich(spec, a, b, params)?;
    let (m, big_m) = (params.m, params.big_m);
    let mm = m * big_m;
    let sum = m + big_m;
    let f = sandwich_factor(params);
    let n = a.dim();
    let k = spec.out_dim();
    let id_n = Matrix::identity(n, n);
    let id_k = Matrix::identity(k, k);

    let half_link = |x: &SpdMatrix| x.matrix() * 0.5 + x.inv().matrix() * (0.5 * mm);
    let link = |label, lhs: Matrix, rhs: Matrix| -> Result<IneqRecord> {
        Ok(IneqRecord::new(
            TheoremId::LinChain,
            label,
            Bound::loewner(lhs, rhs, tol)?,
            sum,
            None,
        ))
    };

    let am = arithmetic_mean(a, b)?.into_matrix();
    let gm = geometric_mean(a, b)?;
    let mapped_am = spec.apply(&am)?;
    let mapped_gm = make_spd(&spec.apply(gm.matrix())?)?;

    let mut out = Vec::with_capacity(LIN_CHAIN_LINKS.len());
    out.push(link("endpoint_a", half_link(a), &id_n * (0.5 * sum))?);
    out.push(link("endpoint_b", half_link(b), &id_n * (0.5 * sum))?);
    out.push(link(
        "endpoint_sum",
        &am + (a.inv().matrix() + b.inv().matrix()) * (0.5 * mm),
        &id_n * sum,
    )?);
    out.push(link(
        "mean_inverse",
        &am + gm.inv().matrix() * (mm * f),
        &id_n * sum,
    )?);
    out.push(link(
        "mapped_inverse",
        &mapped_am + spec.apply(gm.inv().matrix())? * (mm * f),
        &id_k * sum,
    )?);
    out.push(link(
        "choi_step",
        &mapped_am + mapped_gm.inv().matrix() * (mm * f),
        &id_k * sum,
    )?);

    let kh = kantorovich_constant(params.h());
    let norm = spectral_norm(&(&mapped_am * mapped_gm.inv().matrix()));
    let classical = Baseline {
        rhs_scale: kh,
        bound: Bound::scalar(norm, kh, tol, kh),
    };
    out.push(IneqRecord::new(
        TheoremId::LinChain,
        "norm",
        Bound::scalar(norm, kh / f, tol, kh / f),
        kh / f,
        Some(classical),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use approx::assert_abs_diff_eq;

    fn scalar(v: f64) -> SpdMatrix {
        SpdMatrix::from_diagonal(&[v]).unwrap()
    }

    #[test]
    fn scalar_instance() {
        let p = BoundParams::new(1.0, 1.0, 4.0, 4.0).unwrap();
        let id = PositiveMapSpec::identity(1);
        for variant in [LinVariant::MappedMean, LinVariant::MeanOfMaps] {
            let r = check_lin_refined_squared(&id, &scalar(1.0), &scalar(4.0), &p, variant, 1e-12)
                .unwrap();
            assert!(r.holds());
            assert_abs_diff_eq!(r.lhs.magnitude(), 6.25, epsilon = 1e-13);
            // m' = 1, M' = 4: divisor (1 + (ln 4)²/8)² = 1.538162...
            assert_abs_diff_eq!(r.rhs.magnitude(), 6.34889, epsilon = 1e-4);
            assert_abs_diff_eq!(r.classical_rhs_scale, 2.44140625, epsilon = 1e-15);
        }
    }

    #[test]
    fn unit_refinement_argument_recovers_unrefined_constant() {
        let p = BoundParams::new(1.0, 2.0, 2.0, 4.0).unwrap();
        let r = check_lin_refined_squared(
            &PositiveMapSpec::identity(1),
            &scalar(1.5),
            &scalar(3.0),
            &p,
            LinVariant::MappedMean,
            1e-12,
        )
        .unwrap();
        assert_eq!(r.refined_rhs_scale, r.classical_rhs_scale);
        assert_eq!(r.improvement_ratio, 1.0);
    }

    #[test]
    fn identity_pair_is_equality() {
        let p = BoundParams::new(1.0, 1.0, 1.0, 1.0).unwrap();
        let i = SpdMatrix::identity(2);
        let r = check_lin_refined_squared(
            &PositiveMapSpec::identity(2),
            &i,
            &i,
            &p,
            LinVariant::MappedMean,
            1e-12,
        )
        .unwrap();
        assert!(r.holds());
        assert!(r.verdict.min_gap_eig.abs() < 1e-14);
    }

    #[test]
    fn chain_scalar_oracle() {
        let p = BoundParams::new(1.0, 1.0, 4.0, 4.0).unwrap();
        let chain = check_lin_chain(
            &PositiveMapSpec::identity(1),
            &scalar(1.0),
            &scalar(4.0),
            &p,
            1e-12,
        )
        .unwrap();
        let labels: Vec<_> = chain.iter().map(|r| r.label).collect();
        assert_eq!(labels, LIN_CHAIN_LINKS);
        assert!(chain.iter().all(IneqRecord::holds));
        let f = 1.0 + 4f64.ln().powi(2) / 8.0;
        let expected_lhs = [
            0.5 + 2.0,
            2.0 + 0.5,
            2.5 + 4.0 * 0.625,
            2.5 + 4.0 * f * 0.5,
            2.5 + 4.0 * f * 0.5,
            2.5 + 4.0 * f * 0.5,
            1.25,
        ];
        for (r, want) in chain.iter().zip(expected_lhs) {
            assert_abs_diff_eq!(r.lhs.magnitude(), want, epsilon = 1e-13);
        }
        // endpoint_a is tight at a = m, endpoint_b at b = M.
        assert!(chain[0].verdict.min_gap_eig.abs() < 1e-14);
        assert!(chain[1].verdict.min_gap_eig.abs() < 1e-14);
        assert_abs_diff_eq!(chain[6].rhs.magnitude(), 1.5625 / f, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_chain_is_all_equalities() {
        let p = BoundParams::new(2.0, 2.0, 2.0, 2.0).unwrap();
        let a = SpdMatrix::scaled_identity(3, 2.0);
        let chain =
            check_lin_chain(&PositiveMapSpec::trace_normalize(3), &a, &a, &p, 1e-12).unwrap();
        for r in chain {
            assert!(r.holds());
            assert!(r.verdict.min_gap_eig.abs() < 1e-13, "{}", r.label);
        }
    }

    #[test]
    fn rejects_overlapping_spectra() {
        let p = BoundParams::new(1.0, 2.0, 3.0, 4.0).unwrap();
        let r = check_lin_chain(
            &PositiveMapSpec::identity(1),
            &scalar(2.5),
            &scalar(3.5),
            &p,
            1e-12,
        );
        assert!(matches!(r, Err(Error::RegimeViolation { .. })));
    }
}
