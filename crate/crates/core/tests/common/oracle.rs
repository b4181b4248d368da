//! Eigenvalue-wise scalar oracle for diagonal inputs.
//!
//! Every constant is recomputed here from its closed form; only the
//! regime windows and the seeding come from the library.

use opineq::campaign::default_grid;
use opineq::inequalities::{
    check_choi_record, check_holder_mccarthy_refined, check_isometry_family_bound,
    check_kantorovich_product_refined, check_kantorovich_refined, check_lemma_refined_amgm,
    check_lin_chain, check_lin_refined_squared, check_norm_amgm_record, check_polya_szego_refined,
    check_square_order_refined, check_wielandt_operator, check_wielandt_scalar,
    scalar_refined_amgm, IneqRecord, LinVariant, Operand, WielandtVariant,
};
use opineq::instance::canonical_params;
use opineq::maps::PositiveMapSpec;
use opineq::sampling::{derive_seed, haar_orthogonal, rng_from_seed, IsometryPair, SeededRng};
use opineq::{BoundParams, Matrix, SpdMatrix, TheoremId, Vector};
use rand::Rng;

pub fn kant(h: f64) -> f64 {
    (h + 1.0) * (h + 1.0) / (4.0 * h)
}

pub fn refine(c: f64) -> f64 {
    1.0 + c.ln() * c.ln() / 8.0
}

fn polya(m: f64, big_m: f64) -> f64 {
    (big_m + m) / (2.0 * (big_m * m).sqrt())
}

fn wiel(m: f64, big_m: f64) -> f64 {
    ((big_m - m) / (big_m + m)).powi(2)
}

fn gumus(m: f64, big_m: f64) -> f64 {
    (big_m - m).powi(2) / (2.0 * (big_m * m).sqrt() * (big_m + m))
}

/// Expected value of one side: a scalar, or the diagonal of a matrix.
enum Side {
    S(f64),
    D(Vec<f64>),
}

fn discrepancy(op: &Operand, expected: &Side) -> f64 {
    match (op, expected) {
        (Operand::Scalar(x), Side::S(e)) => (x - e).abs() / e.abs().max(1.0),
        (Operand::Matrix(m), Side::D(d)) => {
            assert_eq!(m.nrows(), d.len(), "oracle dimension");
            let scale = d.iter().fold(1.0f64, |s, v| s.max(v.abs()));
            let mut worst = 0.0f64;
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let e = if i == j { d[i] } else { 0.0 };
                    worst = worst.max((m[(i, j)] - e).abs() / scale);
                }
            }
            worst
        }
        _ => f64::INFINITY,
    }
}

fn check(r: &IneqRecord, lhs: Side, rhs: Side) -> f64 {
    discrepancy(&r.lhs, &lhs).max(discrepancy(&r.rhs, &rhs))
}

fn diag(v: &[f64]) -> SpdMatrix {
    SpdMatrix::from_diagonal(v).unwrap()
}

fn uniform(rng: &mut SeededRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n)
        .map(|_| lo + (hi - lo) * rng.random::<f64>())
        .collect()
}

fn unit(rng: &mut SeededRng, n: usize) -> Vector {
    let q = haar_orthogonal(n, rng);
    q.column(0).into_owned()
}

/// A map that sends diagonal matrices to diagonal matrices, and its action
/// on a diagonal.
#[derive(Clone, Copy)]
enum DiagMap {
    Identity,
    Pinching,
    TraceNormalize,
}

impl DiagMap {
    fn pick(i: usize) -> Self {
        [
            DiagMap::Identity,
            DiagMap::Pinching,
            DiagMap::TraceNormalize,
        ][i % 3]
    }

    fn spec(self, n: usize) -> PositiveMapSpec {
        match self {
            DiagMap::Identity => PositiveMapSpec::identity(n),
            DiagMap::Pinching => {
                let blocks = vec![(0..n).step_by(2).collect(), (1..n).step_by(2).collect()]
                    .into_iter()
                    .filter(|b: &Vec<usize>| !b.is_empty())
                    .collect();
                PositiveMapSpec::pinching(n, blocks).unwrap()
            }
            DiagMap::TraceNormalize => PositiveMapSpec::trace_normalize(n),
        }
    }

    fn apply(self, d: &[f64]) -> Vec<f64> {
        match self {
            DiagMap::Identity | DiagMap::Pinching => d.to_vec(),
            DiagMap::TraceNormalize => {
                let mean = d.iter().sum::<f64>() / d.len() as f64;
                vec![mean; d.len()]
            }
        }
    }
}

fn zip(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
}

fn map1(a: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    a.iter().map(|x| f(*x)).collect()
}

fn quad(a: &[f64], x: &Vector) -> f64 {
    a.iter().zip(x.iter()).map(|(ai, xi)| ai * xi * xi).sum()
}

fn bilinear(a: &[f64], x: &Vector, y: &Vector) -> f64 {
    a.iter()
        .zip(x.iter().zip(y.iter()))
        .map(|(ai, (xi, yi))| ai * xi * yi)
        .sum()
}

fn params_for(theorem: TheoremId, case: usize) -> BoundParams {
    let regime = theorem.regime();
    let points: Vec<BoundParams> = default_grid(regime)
        .into_iter()
        .map(|(m, mp, bmp, bm)| {
            canonical_params(regime, &BoundParams::new(m, mp, bmp, bm).unwrap())
        })
        .filter(|p| regime.check_feasible(p).is_ok())
        .collect();
    points[case % points.len()]
}

/// Largest relative discrepancy between checker and oracle on one seeded
/// diagonal case.
pub fn oracle_case(theorem: TheoremId, case: usize) -> f64 {
    let tol = 1e-8;
    let mut rng = rng_from_seed(derive_seed(0x0DAC1E, &[theorem as u64, case as u64]));
    let p = params_for(theorem, case);
    let (m, mp, bmp, bm) = (p.m, p.m_prime, p.big_m_prime, p.big_m);
    let lo_dim = if matches!(
        theorem,
        TheoremId::WielandtScalar
            | TheoremId::WielandtBhatiaDavis
            | TheoremId::WielandtGumus
            | TheoremId::WielandtRefined
    ) {
        2
    } else {
        1
    };
    let n = rng.random_range(lo_dim..=5);
    let window = theorem.regime().window(&p).unwrap();
    let in_window = |rng: &mut SeededRng| uniform(rng, n, window.lo, window.hi);
    let dmap = DiagMap::pick(case);
    let k = kant(bm / m);

    match theorem {
        TheoremId::ScalarAmgm => {
            let (a, b) = (
                uniform(&mut rng, 1, m, bm)[0],
                uniform(&mut rng, 1, m, bm)[0],
            );
            let r = scalar_refined_amgm(a, b, tol).unwrap();
            check(
                &r,
                Side::S(refine(b / a) * (a * b).sqrt()),
                Side::S((a + b) / 2.0),
            )
        }
        TheoremId::LemmaAmgm => {
            let a = uniform(&mut rng, n, 1.0, 4.0);
            let c = uniform(&mut rng, n, m, bm);
            let b = zip(&a, &c, |x, y| x * y);
            let r = check_lemma_refined_amgm(&diag(&a), &diag(&b), m, tol).unwrap();
            check(
                &r,
                Side::D(zip(&a, &b, |x, y| refine(m) * (x * y).sqrt())),
                Side::D(zip(&a, &b, |x, y| (x + y) / 2.0)),
            )
        }
        TheoremId::Kantorovich => {
            let a = in_window(&mut rng);
            let x = unit(&mut rng, n);
            let r = check_kantorovich_refined(&diag(&a), &x, m, mp, bm, tol).unwrap();
            let inv = map1(&a, |v| 1.0 / v);
            check(
                &r,
                Side::S(quad(&a, &x) * quad(&inv, &x)),
                Side::S(k / refine(mp).powi(2)),
            )
        }
        TheoremId::KantorovichProduct => {
            let a = in_window(&mut rng);
            let b: Vec<f64> = a
                .iter()
                .map(|&ai| uniform(&mut rng, 1, mp * ai, bm)[0])
                .collect();
            let x = unit(&mut rng, n);
            let r = check_kantorovich_product_refined(&diag(&a), &diag(&b), &x, &p, tol).unwrap();
            let g = quad(&zip(&a, &b, |u, v| (u * v).sqrt()), &x);
            check(
                &r,
                Side::S(quad(&a, &x) * quad(&b, &x)),
                Side::S(k / refine(mp).powi(2) * g * g),
            )
        }
        TheoremId::HolderMccarthy => {
            let a = in_window(&mut rng);
            let x = unit(&mut rng, n);
            let r = check_holder_mccarthy_refined(&diag(&a), &x, &p, tol).unwrap();
            let s = quad(&a, &x);
            check(
                &r,
                Side::S(quad(&map1(&a, |v| v * v), &x)),
                Side::S(k / refine(mp).powi(2) * s * s),
            )
        }
        TheoremId::SquareOrder => {
            let a = in_window(&mut rng);
            let b = zip(&a, &uniform(&mut rng, n, 0.0, 1.0), |x, e| x + e);
            let r = check_square_order_refined(&diag(&a), &diag(&b), &p, tol).unwrap();
            let c = k / refine(mp).powi(2);
            check(
                &r,
                Side::D(map1(&a, |v| v * v)),
                Side::D(map1(&b, |v| c * v * v)),
            )
        }
        TheoremId::PolyaSzego => {
            let a = in_window(&mut rng);
            let b: Vec<f64> = a
                .iter()
                .map(|&ai| uniform(&mut rng, 1, mp * ai, bm)[0])
                .collect();
            let r =
                check_polya_szego_refined(&dmap.spec(n), &diag(&a), &diag(&b), &p, tol).unwrap();
            let (pa, pb) = (dmap.apply(&a), dmap.apply(&b));
            let gm = dmap.apply(&zip(&a, &b, |u, v| (u * v).sqrt()));
            let c = polya(m, bm) / refine(mp);
            check(
                &r,
                Side::D(zip(&pa, &pb, |u, v| (u * v).sqrt())),
                Side::D(map1(&gm, |v| c * v)),
            )
        }
        TheoremId::IsometryFamily => {
            let a = in_window(&mut rng);
            let parts = rng.random_range(1..=3);
            let weights: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    let w = uniform(&mut rng, parts, 0.1, 1.0);
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(|v| v / s).collect()
                })
                .collect();
            let family: Vec<Matrix> = (0..parts)
                .map(|j| {
                    Matrix::from_diagonal(&Vector::from_iterator(
                        n,
                        (0..n).map(|i| weights[i][j].sqrt()),
                    ))
                })
                .collect();
            let r = check_isometry_family_bound(&family, &diag(&a), &p, tol).unwrap();
            let c = polya(m, bm) / refine(mp);
            check(&r, Side::D(vec![1.0; n]), Side::D(vec![c; n]))
        }
        TheoremId::LinSquaredMapped | TheoremId::LinSquaredMeans => {
            let a = uniform(&mut rng, n, m, mp);
            let b = uniform(&mut rng, n, bmp, bm);
            let mapped = theorem == TheoremId::LinSquaredMapped;
            let variant = if mapped {
                LinVariant::MappedMean
            } else {
                LinVariant::MeanOfMaps
            };
            let r =
                check_lin_refined_squared(&dmap.spec(n), &diag(&a), &diag(&b), &p, variant, tol)
                    .unwrap();
            let am = dmap.apply(&zip(&a, &b, |u, v| (u + v) / 2.0));
            let base = if mapped {
                dmap.apply(&zip(&a, &b, |u, v| (u * v).sqrt()))
            } else {
                zip(&dmap.apply(&a), &dmap.apply(&b), |u, v| (u * v).sqrt())
            };
            let c = k * k / refine(bmp / mp).powi(2);
            check(
                &r,
                Side::D(map1(&am, |v| v * v)),
                Side::D(map1(&base, |v| c * v * v)),
            )
        }
        TheoremId::LinChain => {
            let a = uniform(&mut rng, n, m, mp);
            let b = uniform(&mut rng, n, bmp, bm);
            let recs = check_lin_chain(&dmap.spec(n), &diag(&a), &diag(&b), &p, tol).unwrap();
            let (mm, sum, f) = (m * bm, m + bm, refine(bmp / mp));
            let am = zip(&a, &b, |u, v| (u + v) / 2.0);
            let gm = zip(&a, &b, |u, v| (u * v).sqrt());
            let mapped_am = dmap.apply(&am);
            let mapped_gm = dmap.apply(&gm);
            let mapped_inv_gm = dmap.apply(&map1(&gm, |v| 1.0 / v));
            let half = |x: &[f64]| map1(x, |v| v / 2.0 + mm / (2.0 * v));
            let expected = [
                (half(&a), vec![sum / 2.0; n]),
                (half(&b), vec![sum / 2.0; n]),
                (
                    zip(
                        &am,
                        &zip(&a, &b, |u, v| mm / 2.0 * (1.0 / u + 1.0 / v)),
                        |x, y| x + y,
                    ),
                    vec![sum; n],
                ),
                (zip(&am, &gm, |x, g| x + mm * f / g), vec![sum; n]),
                (
                    zip(&mapped_am, &mapped_inv_gm, |x, y| x + mm * f * y),
                    vec![sum; n],
                ),
                (
                    zip(&mapped_am, &mapped_gm, |x, g| x + mm * f / g),
                    vec![sum; n],
                ),
            ];
            let mut worst = 0.0f64;
            for (rec, (l, r)) in recs.iter().zip(expected) {
                worst = worst.max(check(rec, Side::D(l), Side::D(r)));
            }
            let norm = zip(&mapped_am, &mapped_gm, |x, g| x / g)
                .into_iter()
                .fold(0.0, f64::max);
            worst.max(check(&recs[6], Side::S(norm), Side::S(k / f)))
        }
        TheoremId::WielandtScalar => {
            let a = uniform(&mut rng, n, m, bm);
            let q = haar_orthogonal(n, &mut rng);
            let (x, y) = (q.column(0).into_owned(), q.column(1).into_owned());
            let r = check_wielandt_scalar(&diag(&a), &x, &y, m, bm, tol).unwrap();
            let cross = bilinear(&a, &x, &y);
            check(
                &r,
                Side::S(cross * cross),
                Side::S(wiel(m, bm) * quad(&a, &x) * quad(&a, &y)),
            )
        }
        TheoremId::WielandtBhatiaDavis | TheoremId::WielandtGumus | TheoremId::WielandtRefined => {
            let a = if theorem == TheoremId::WielandtRefined {
                in_window(&mut rng)
            } else {
                uniform(&mut rng, n, m, bm)
            };
            let rank = n / 2;
            let pair = IsometryPair::from_orthogonal(&Matrix::identity(n, n), rank).unwrap();
            let spec = dmap.spec(rank);
            let variant = match theorem {
                TheoremId::WielandtBhatiaDavis => WielandtVariant::BhatiaDavis,
                TheoremId::WielandtGumus => WielandtVariant::Gumus,
                _ => WielandtVariant::Refined,
            };
            let r = check_wielandt_operator(&spec, &diag(&a), &pair, &p, variant, tol).unwrap();
            match variant {
                WielandtVariant::BhatiaDavis => {
                    let top = dmap.apply(&a[..rank]);
                    check(
                        &r,
                        Side::D(vec![0.0; rank]),
                        Side::D(map1(&top, |v| wiel(m, bm) * v)),
                    )
                }
                WielandtVariant::Gumus => check(&r, Side::S(0.0), Side::S(gumus(m, bm))),
                WielandtVariant::Refined => {
                    check(&r, Side::S(0.0), Side::S(gumus(m, bm) / refine(mp)))
                }
            }
        }
        TheoremId::Choi => {
            let a = uniform(&mut rng, n, m, bm);
            let r = check_choi_record(&dmap.spec(n), &diag(&a), tol).unwrap();
            check(
                &r,
                Side::D(map1(&dmap.apply(&a), |v| 1.0 / v)),
                Side::D(dmap.apply(&map1(&a, |v| 1.0 / v))),
            )
        }
        TheoremId::NormAmgm => {
            let a = uniform(&mut rng, n, 0.0, bm);
            let b = uniform(&mut rng, n, 0.0, bm);
            let (am, bmat) = (
                Matrix::from_diagonal(&Vector::from_row_slice(&a)),
                Matrix::from_diagonal(&Vector::from_row_slice(&b)),
            );
            let r = check_norm_amgm_record(&am, &bmat, tol).unwrap();
            let prod = zip(&a, &b, |u, v| u * v).into_iter().fold(0.0, f64::max);
            let sum = zip(&a, &b, |u, v| u + v).into_iter().fold(0.0, f64::max);
            check(&r, Side::S(prod), Side::S(sum * sum / 4.0))
        }
    }
}

/// Worst discrepancy over `cases` seeded cases.
pub fn oracle_worst(theorem: TheoremId, cases: usize) -> f64 {
    (0..cases)
        .map(|i| oracle_case(theorem, i))
        .fold(0.0, f64::max)
}
