use opineq::maps::{check_choi, check_norm_amgm, PositiveMapSpec};
use opineq::sampling::{rng_from_seed, sample_positive_map, sample_psd, sample_spd};
use opineq::spd::{is_psd, operator_norm, SpectralInterval};
use opineq::Matrix;
use proptest::prelude::*;

fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    operator_norm(&(a - b)) <= tol * operator_norm(b).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(160))]

    #[test]
    fn catalog_maps_are_unital(seed in any::<u64>(), n in 1usize..=6, kind in 0usize..5) {
        let mut rng = rng_from_seed(seed);
        let map = sample_positive_map(n, kind, &mut rng).unwrap();
        let image = map.apply(&Matrix::identity(n, n)).unwrap();
        let k = map.out_dim();
        prop_assert!(close(&image, &Matrix::identity(k, k), 1e-12));
    }

    #[test]
    fn catalog_maps_are_positive(seed in any::<u64>(), n in 1usize..=6, kind in 0usize..5) {
        let mut rng = rng_from_seed(seed);
        let map = sample_positive_map(n, kind, &mut rng).unwrap();
        let p = sample_psd(n, 5.0, &mut rng);
        prop_assert!(is_psd(&map.apply(&p).unwrap(), 1e-12));
    }

    #[test]
    fn catalog_maps_are_linear(
        seed in any::<u64>(),
        n in 1usize..=5,
        kind in 0usize..5,
        s in -3.0f64..3.0,
        t in -3.0f64..3.0,
    ) {
        let mut rng = rng_from_seed(seed);
        let map = sample_positive_map(n, kind, &mut rng).unwrap();
        let x = sample_psd(n, 2.0, &mut rng);
        let y = sample_psd(n, 2.0, &mut rng);
        let lhs = map.apply(&(&x * s + &y * t)).unwrap();
        let rhs = map.apply(&x).unwrap() * s + map.apply(&y).unwrap() * t;
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn choi_inequality_holds(seed in any::<u64>(), n in 1usize..=6, kind in 0usize..5) {
        let mut rng = rng_from_seed(seed);
        let map = sample_positive_map(n, kind, &mut rng).unwrap();
        let t = sample_spd(n, SpectralInterval::new(0.05, 20.0).unwrap(), &mut rng).unwrap();
        prop_assert!(check_choi(&map, &t, 1e-8).unwrap().holds);
    }

    #[test]
    fn norm_amgm_holds(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rng_from_seed(seed);
        let a = sample_psd(n, 3.0, &mut rng);
        let b = sample_psd(n, 7.0, &mut rng);
        prop_assert!(check_norm_amgm(&a, &b, 1e-8).unwrap().holds);
    }
}

#[test]
fn non_unital_compression_is_rejected() {
    let v = Matrix::from_row_slice(2, 1, &[2.0, 0.0]);
    assert!(PositiveMapSpec::compression(v).is_err());
}

#[test]
fn trace_normalize_example() {
    let t = Matrix::from_diagonal(&opineq::Vector::from_row_slice(&[1.0, 3.0]));
    let out = PositiveMapSpec::trace_normalize(2).apply(&t).unwrap();
    assert!(close(&out, &(Matrix::identity(2, 2) * 2.0), 1e-15));
}

#[test]
fn choi_equality_for_identity_map() {
    let t = opineq::demo::wielandt_witness();
    let v = check_choi(&PositiveMapSpec::identity(2), &t, 1e-10).unwrap();
    assert!(v.holds && v.min_gap_eig.abs() < 1e-12);
}
