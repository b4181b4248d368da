//! Small hand-checkable instances, one or more per inequality.

use std::f64::consts::{E, FRAC_1_SQRT_2};

use crate::error::Result;
use crate::inequalities::{
    check_choi_record, check_kantorovich_classical, check_kantorovich_product_refined,
    check_lemma_refined_amgm, check_lin_chain, check_lin_refined_squared, check_norm_amgm_record,
    check_polya_szego_refined, check_wielandt_operator, check_wielandt_scalar, scalar_refined_amgm,
    IneqRecord, LinVariant, WielandtVariant,
};
use crate::maps::PositiveMapSpec;
use crate::params::BoundParams;
use crate::sampling::IsometryPair;
use crate::spd::{Matrix, SpdMatrix, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct DemoCase {
    pub name: &'static str,
    pub records: Vec<IneqRecord>,
}

fn diag(values: &[f64]) -> Result<SpdMatrix> {
    SpdMatrix::from_diagonal(values)
}

/// The 2×2 matrix with eigenvalues 2 and 2.6 along `(1, ±1)/√2`.
pub fn wielandt_witness() -> SpdMatrix {
    SpdMatrix::new(&Matrix::from_row_slice(2, 2, &[2.3, 0.3, 0.3, 2.3])).expect("positive definite")
}

pub fn worked_examples(tol: f64) -> Result<Vec<DemoCase>> {
    let id1 = PositiveMapSpec::identity(1);
    let e1 = Vector::from_row_slice(&[1.0, 0.0]);
    let e2 = Vector::from_row_slice(&[0.0, 1.0]);
    let balanced = Vector::from_row_slice(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
    let basis = IsometryPair::from_orthogonal(&Matrix::identity(2, 2), 1)?;
    let shifted = BoundParams::with_multiplier(1.0, 3.0, 3.0)?;
    let sandwich = BoundParams::new(1.0, 1.0, 4.0, 4.0)?;
    let high = BoundParams::with_multiplier(1.5, 4.0, 4.0)?;
    let w = wielandt_witness();
    let one = diag(&[1.0])?;
    let three = diag(&[3.0])?;

    let case = |name, records| DemoCase { name, records };
    Ok(vec![
        case(
            "scalar AM-GM, a = 1, b = e^2",
            vec![scalar_refined_amgm(1.0, E * E, tol)?],
        ),
        case(
            "scalar AM-GM, a = b = 4",
            vec![scalar_refined_amgm(4.0, 4.0, tol)?],
        ),
        case(
            "operator AM-GM, A = I, B = diag(4, 9), m = 4",
            vec![check_lemma_refined_amgm(
                &SpdMatrix::identity(2),
                &diag(&[4.0, 9.0])?,
                4.0,
                tol,
            )?],
        ),
        case(
            "Kantorovich product, A = 1, B = 3, m = 1, m' = 3, M = 3",
            vec![check_kantorovich_product_refined(
                &one,
                &three,
                &Vector::from_row_slice(&[1.0]),
                &shifted,
                tol,
            )?],
        ),
        case(
            "classical Kantorovich, A = diag(1, 4), x = (1, 1)/sqrt 2",
            vec![check_kantorovich_classical(
                &diag(&[1.0, 4.0])?,
                &balanced,
                1.0,
                4.0,
                tol,
            )?],
        ),
        case(
            "Polya-Szego, identity map, A = 1, B = 3",
            vec![check_polya_szego_refined(
                &id1, &one, &three, &shifted, tol,
            )?],
        ),
        case(
            "squared Lin bound, identity map, a = 1, b = 4",
            vec![check_lin_refined_squared(
                &id1,
                &one,
                &diag(&[4.0])?,
                &sandwich,
                LinVariant::MappedMean,
                tol,
            )?],
        ),
        case(
            "Lin proof chain, identity map, a = 1, b = 4",
            check_lin_chain(&id1, &one, &diag(&[4.0])?, &sandwich, tol)?,
        ),
        case(
            "Lin proof chain, m = M = 2",
            check_lin_chain(
                &id1,
                &diag(&[2.0])?,
                &diag(&[2.0])?,
                &BoundParams::plain(2.0, 2.0)?,
                tol,
            )?,
        ),
        case(
            "scalar Wielandt, eigenvalues {2, 2.6}, x = e1, y = e2",
            vec![check_wielandt_scalar(&w, &e1, &e2, 2.0, 2.6, tol)?],
        ),
        case(
            "Bhatia-Davis, eigenvalues {2, 2.6}, X = e1, Y = e2",
            vec![check_wielandt_operator(
                &id1,
                &w,
                &basis,
                &BoundParams::plain(2.0, 2.6)?,
                WielandtVariant::BhatiaDavis,
                tol,
            )?],
        ),
        case(
            "refined Gumus, eigenvalues {2, 2.6}, m = 1.5, m' = 4, M = 4",
            vec![check_wielandt_operator(
                &id1,
                &w,
                &basis,
                &high,
                WielandtVariant::Refined,
                tol,
            )?],
        ),
        case(
            "Choi, trace normalization, T = diag(1, 4)",
            vec![check_choi_record(
                &PositiveMapSpec::trace_normalize(2),
                &diag(&[1.0, 4.0])?,
                tol,
            )?],
        ),
        case(
            "norm AM-GM, A = diag(1, 0), B = diag(0, 1)",
            vec![check_norm_amgm_record(
                &Matrix::from_diagonal(&Vector::from_row_slice(&[1.0, 0.0])),
                &Matrix::from_diagonal(&Vector::from_row_slice(&[0.0, 1.0])),
                tol,
            )?],
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_examples_hold() {
        let cases = worked_examples(1e-10).unwrap();
        assert_eq!(cases.len(), 14);
        for c in cases {
            for r in &c.records {
                assert!(r.holds(), "{}: {:?}", c.name, r);
            }
        }
    }
}
