mod common;

use common::oracle::refine;
use opineq::inequalities::refinement_constants;
use opineq::search::compare_bounds;
use opineq::BoundParams;

fn grid() -> Vec<BoundParams> {
    let mut out = Vec::new();
    for m in [0.25, 0.5, 1.0, 1.5, 2.0] {
        for mp in [1.01, 1.21, 1.5, 2.0, 3.0, 4.0, 9.0] {
            for bmp in [2.0, 3.0, 4.0, 8.0] {
                for bm in [4.0, 8.0, 16.0] {
                    if let Ok(p) = BoundParams::new(m, mp, bmp, bm) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn refined_constants_never_exceed_classical() {
    let mut checked = 0;
    for p in grid() {
        let Ok(table) = refinement_constants(&p) else {
            continue;
        };
        for r in table.rows.iter().filter(|r| r.feasible) {
            let expected = r.classical / refine(r.refinement_argument).powi(r.power);
            assert!(r.refined <= r.classical, "{} at {:?}", r.name, p);
            assert!(
                (r.refined - expected).abs() <= 1e-12 * r.classical.max(1.0),
                "{} at {:?}: {} vs {}",
                r.name,
                p,
                r.refined,
                expected
            );
            checked += 1;
        }
    }
    assert!(checked > 500, "only {checked} feasible rows");
}

#[test]
fn comparison_table_reports_dominance_and_monotonicity() {
    let table = compare_bounds(&grid()).unwrap();
    assert!(table.dominance);
    assert!(table.monotone());
    assert!(table.monotonicity.iter().any(|c| c.points >= 3));
    for r in table.rows.iter().filter(|r| r.feasible) {
        assert!(r.ratio_error < 1e-12);
        assert!(r.improvement_percent >= 0.0);
    }
}

#[test]
fn refinement_factor_oracle_values() {
    assert_eq!(refine(1.0), 1.0);
    assert!((refine(std::f64::consts::E.powi(2)) - 1.5).abs() < 1e-15);
    let t = refinement_constants(&BoundParams::new(1.0, 2.0, 8.0, 8.0).unwrap()).unwrap();
    let row = t.row("lin_squared").unwrap();
    assert!((row.divisor - 1.538_162).abs() < 5e-7, "{}", row.divisor);
}
