//! Instances on which misstated forms of the bounds fail while the
//! implemented forms hold.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use common::oracle::{kant, refine};
use opineq::demo::wielandt_witness;
use opineq::inequalities::{
    check_kantorovich_product_refined, check_wielandt_operator, check_wielandt_scalar,
    WielandtVariant,
};
use opineq::maps::PositiveMapSpec;
use opineq::sampling::IsometryPair;
use opineq::{BoundParams, Error, Matrix, SpdMatrix, Vector};

/// `⟨Ax,x⟩⟨Bx,x⟩ ≤ K(h)/F(m')² · ⟨A♯B x,x⟩` without the square on the
/// geometric-mean term, on scalars.
fn unsquared_scalar(a: f64, b: f64, m: f64, mp: f64, bm: f64) -> bool {
    a * b <= kant(bm / m) / refine(mp).powi(2) * (a * b).sqrt()
}

fn scalar(v: f64) -> SpdMatrix {
    SpdMatrix::from_diagonal(&[v]).unwrap()
}

fn squared_holds(a: f64, b: f64, m: f64, mp: f64, bm: f64) -> bool {
    let p = BoundParams::with_multiplier(m, mp, bm).unwrap();
    let x = Vector::from_row_slice(&[1.0]);
    check_kantorovich_product_refined(&scalar(a), &scalar(b), &x, &p, 1e-10)
        .unwrap()
        .holds()
}

#[test]
fn unsquared_product_bound_fails_near_equal_pair() {
    for s in [1.0, 2.0, 5.0, 10.0, 100.0] {
        let (a, b, m, mp, bm) = (10.0 * s, 10.1 * s, 10.0 * s, 1.01, 10.1 * s);
        assert!(!unsquared_scalar(a, b, m, mp, bm), "s = {s}");
        assert!(squared_holds(a, b, m, mp, bm), "s = {s}");
    }
}

#[test]
fn unsquared_product_bound_fails_on_triple_ratio() {
    for s in [1.0, 2.0, 5.0, 10.0, 100.0] {
        let (a, b, m, mp, bm) = (s, 3.0 * s, s, 3.0, 3.0 * s);
        assert!(!unsquared_scalar(a, b, m, mp, bm), "s = {s}");
        assert!(squared_holds(a, b, m, mp, bm), "s = {s}");
    }
}

/// Without `mI ≤ A` the refined product bound fails: `A = diag(1/3, 1)`,
/// `B = 3I`, `(m, m', M) = (1, 3, 3)` satisfies `mI ≤ m'A ≤ B ≤ MI` yet
/// exceeds the refined constant, by 6.5% at `x = (1, 1)/√2` and by 7.0% at
/// the worst unit vector.
#[test]
fn product_bound_needs_lower_bound_on_a() {
    let (a, b): ([f64; 2], [f64; 2]) = ([1.0 / 3.0, 1.0], [3.0, 3.0]);
    let ratio = |w0: f64| {
        let q = |d: [f64; 2]| d[0] * w0 + d[1] * (1.0 - w0);
        let g = q([(a[0] * b[0]).sqrt(), (a[1] * b[1]).sqrt()]);
        q(a) * q(b) / (kant(3.0) / refine(3.0).powi(2) * g * g)
    };
    assert!((ratio(0.5) - 1.0647).abs() < 1e-4, "{}", ratio(0.5));
    let worst = (1..10_000)
        .map(|i| ratio(i as f64 / 10_000.0))
        .fold(0.0, f64::max);
    assert!((worst - 1.0702).abs() < 1e-4, "{worst}");

    let p = BoundParams::with_multiplier(1.0, 3.0, 3.0).unwrap();
    let err = check_kantorovich_product_refined(
        &SpdMatrix::from_diagonal(&a).unwrap(),
        &SpdMatrix::from_diagonal(&b).unwrap(),
        &Vector::from_row_slice(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
        &p,
        1e-10,
    )
    .unwrap_err();
    assert!(matches!(err, Error::RegimeViolation { .. }), "{err}");
}

#[test]
fn scalar_wielandt_equality_on_witness() {
    let w = wielandt_witness();
    let (e1, e2) = (
        Vector::from_row_slice(&[1.0, 0.0]),
        Vector::from_row_slice(&[0.0, 1.0]),
    );
    let r = check_wielandt_scalar(&w, &e1, &e2, 2.0, 2.6, 1e-10).unwrap();
    assert!(r.holds());
    assert!((r.ratio - 1.0).abs() < 1e-10, "ratio {}", r.ratio);

    // |⟨x,Ay⟩|² ≤ W·⟨x,Ay⟩⟨y,Ay⟩ with the misprinted right-hand side.
    let cross = w.matrix()[(0, 1)];
    let constant = (0.6f64 / 4.6).powi(2);
    assert!(cross * cross > constant * cross * w.matrix()[(1, 1)]);
}

/// Eigenvalues `{100, 101}` with eigenvectors at 45° to the isometries
/// `X = e1`, `Y = e2`; `(m, m', M) = (99, 10⁴, 101)`.
#[test]
fn refined_operator_wielandt_counterexample() {
    let s = FRAC_1_SQRT_2;
    let frame = Matrix::from_row_slice(2, 2, &[s, -s, s, s]);
    let a = SpdMatrix::from_spectrum(&[100.0, 101.0], &frame).unwrap();
    let pair = IsometryPair::from_orthogonal(&Matrix::identity(2, 2), 1).unwrap();
    let p = BoundParams::with_multiplier(99.0, 1e4, 101.0).unwrap();
    let id = PositiveMapSpec::identity(1);

    let refined =
        check_wielandt_operator(&id, &a, &pair, &p, WielandtVariant::Refined, 1e-8).unwrap();
    assert!(!refined.holds());
    assert!(refined.ratio > 2.0, "ratio {}", refined.ratio);

    let gumus = check_wielandt_operator(&id, &a, &pair, &p, WielandtVariant::Gumus, 1e-8).unwrap();
    assert!(gumus.holds());
}
