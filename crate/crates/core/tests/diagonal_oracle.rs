mod common;

use common::oracle::oracle_worst;
use opineq::TheoremId;

#[test]
fn checkers_match_scalar_oracle_on_diagonal_inputs() {
    for theorem in TheoremId::ALL {
        let worst = oracle_worst(theorem, 200);
        assert!(worst <= 1e-10, "{theorem}: discrepancy {worst:e}");
    }
}
