//! Operator means.

use crate::error::{Error, Result};
use crate::spd::{make_spd, Matrix, SpdMatrix};

fn same_dim(a: &SpdMatrix, b: &SpdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}`, computed by
/// congruence with `A^{±1/2}`.
pub fn geometric_mean(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix> {
    same_dim(a, b)?;
    let root = a.sqrt();
    let inv_root = a.inv_sqrt();
    let inner = make_spd(&(inv_root.matrix() * b.matrix() * inv_root.matrix()))?;
    let mid = inner.sqrt();
    make_spd(&(root.matrix() * mid.matrix() * root.matrix()))
}

/// `(A + B) / 2`.
pub fn arithmetic_mean(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix> {
    same_dim(a, b)?;
    make_spd(&((a.matrix() + b.matrix()) * 0.5))
}

/// `(A⁻¹ + B⁻¹) / 2`, the quantity summed in the Kantorovich-type proof
/// chain (the inverse of the harmonic mean).
pub fn harmonic_like(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix> {
    same_dim(a, b)?;
    let sum: Matrix = a.inv().matrix() + b.inv().matrix();
    make_spd(&(sum * 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spd::loewner_leq;

    fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
        (a - b).amax()
    }

    #[test]
    fn idempotent() {
        let a = make_spd(&Matrix::from_row_slice(2, 2, &[2.3, 0.3, 0.3, 2.3])).unwrap();
        let g = geometric_mean(&a, &a).unwrap();
        assert!(max_abs_diff(g.matrix(), a.matrix()) < 1e-13);
    }

    #[test]
    fn mean_with_inverse_is_identity() {
        let a = make_spd(&Matrix::from_row_slice(
            3,
            3,
            &[3.0, 1.0, 0.2, 1.0, 2.0, 0.1, 0.2, 0.1, 1.5],
        ))
        .unwrap();
        let g = geometric_mean(&a, &a.inv()).unwrap();
        assert!(max_abs_diff(g.matrix(), &Matrix::identity(3, 3)) < 1e-12);
    }

    #[test]
    fn commuting_case_is_entrywise_sqrt() {
        let a = SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap();
        let b = SpdMatrix::from_diagonal(&[4.0, 1.0]).unwrap();
        let g = geometric_mean(&a, &b).unwrap();
        assert!(max_abs_diff(g.matrix(), &(Matrix::identity(2, 2) * 2.0)) < 1e-14);
    }

    #[test]
    fn arithmetic_and_harmonic() {
        let i = SpdMatrix::identity(2);
        let a = arithmetic_mean(&i, &SpdMatrix::scaled_identity(2, 3.0)).unwrap();
        assert!(max_abs_diff(a.matrix(), &(Matrix::identity(2, 2) * 2.0)) < 1e-15);
        let h = harmonic_like(&i, &i).unwrap();
        assert!(max_abs_diff(h.matrix(), &Matrix::identity(2, 2)) < 1e-15);
        let h = harmonic_like(
            &SpdMatrix::from_diagonal(&[1.0, 2.0]).unwrap(),
            &SpdMatrix::from_diagonal(&[2.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert!(max_abs_diff(h.matrix(), &(Matrix::identity(2, 2) * 0.75)) < 1e-15);
    }

    #[test]
    fn amgm_on_a_non_commuting_pair() {
        let a = make_spd(&Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).unwrap();
        let b = SpdMatrix::from_diagonal(&[1.0, 5.0]).unwrap();
        let g = geometric_mean(&a, &b).unwrap();
        let am = arithmetic_mean(&a, &b).unwrap();
        assert!(loewner_leq(g.matrix(), am.matrix(), 1e-12).unwrap().holds);
    }

    #[test]
    fn dimension_mismatch() {
        let r = geometric_mean(&SpdMatrix::identity(2), &SpdMatrix::identity(3));
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }
}
