use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::{
    gumus_constant, kantorovich_constant, polya_szego_constant, refinement_factor,
    wielandt_constant, BoundParams, Regime, LOG_BASE,
};

/// A classical constant next to its refined counterpart
/// `classical / (1 + (ln c)²/8)^power`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub name: String,
    pub regime: Regime,
    /// Whether the parameters satisfy the row's regime.
    pub feasible: bool,
    pub classical: f64,
    pub refined: f64,
    /// The argument `c` (`m'`, `M'/m'` or `m`).
    pub refinement_argument: f64,
    pub power: i32,
    pub divisor: f64,
    pub improvement_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsTable {
    pub params: BoundParams,
    pub h: f64,
    pub k_h: f64,
    pub log_base: String,
    pub rows: Vec<ConstantRow>,
}

impl ConstantsTable {
    pub fn row(&self, name: &str) -> Option<&ConstantRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

fn row(
    name: &str,
    regime: Regime,
    params: &BoundParams,
    classical: f64,
    argument: f64,
    power: i32,
) -> ConstantRow {
    let divisor = refinement_factor(argument).powi(power);
    ConstantRow {
        name: name.to_owned(),
        regime,
        feasible: regime.check_feasible(params).is_ok(),
        classical,
        refined: classical / divisor,
        refinement_argument: argument,
        power,
        divisor,
        improvement_ratio: 1.0 / divisor,
    }
}

/// Every classical constant for `params` with its refined counterpart.
pub fn refinement_constants(params: &BoundParams) -> Result<ConstantsTable> {
    let p = BoundParams::new(params.m, params.m_prime, params.big_m_prime, params.big_m)?;
    Regime::Plain.check_feasible(&p)?;
    let (m, big_m) = (p.m, p.big_m);
    let h = p.h();
    let k = kantorovich_constant(h);
    let spread = p.big_m_prime / p.m_prime;
    let rows = vec![
        row("amgm", Regime::Relative, &p, 1.0, m, 1),
        row("kantorovich", Regime::SelfInverseLow, &p, k, p.m_prime, 2),
        row("kantorovich_product", Regime::Shifted, &p, k, p.m_prime, 2),
        row(
            "polya_szego",
            Regime::Shifted,
            &p,
            polya_szego_constant(m, big_m),
            p.m_prime,
            1,
        ),
        row("lin_squared", Regime::Sandwich, &p, k * k, spread, 2),
        row("lin_norm", Regime::Sandwich, &p, k, spread, 1),
        row(
            "wielandt",
            Regime::Plain,
            &p,
            wielandt_constant(m, big_m),
            1.0,
            0,
        ),
        row(
            "gumus",
            Regime::SelfInverseHigh,
            &p,
            gumus_constant(m, big_m),
            p.m_prime,
            1,
        ),
    ];
    Ok(ConstantsTable {
        params: p,
        h,
        k_h: k,
        log_base: LOG_BASE.to_owned(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_ratio_gives_unit_constant() {
        let t = refinement_constants(&BoundParams::plain(2.0, 2.0).unwrap()).unwrap();
        assert_eq!(t.k_h, 1.0);
    }

    #[test]
    fn h_four() {
        let t = refinement_constants(&BoundParams::new(1.0, 2.0, 3.0, 4.0).unwrap()).unwrap();
        assert_eq!(t.k_h, 1.5625);
        assert_eq!(t.row("lin_squared").unwrap().classical, 2.44140625);
        assert!(t.row("lin_squared").unwrap().feasible);
        assert!(!t.row("kantorovich").unwrap().feasible);
    }

    #[test]
    fn equal_inner_bounds_give_lin_constant() {
        let t = refinement_constants(&BoundParams::new(1.0, 2.0, 2.0, 4.0).unwrap()).unwrap();
        let r = t.row("lin_squared").unwrap();
        assert_eq!(r.refined, r.classical);
        assert_eq!(r.improvement_ratio, 1.0);
    }

    #[test]
    fn spread_four_divisor() {
        let t = refinement_constants(&BoundParams::new(1.0, 1.0, 4.0, 4.0).unwrap()).unwrap();
        assert_abs_diff_eq!(
            t.row("lin_squared").unwrap().divisor,
            1.538162,
            epsilon = 1e-6
        );
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(refinement_constants(&BoundParams::plain(4.0, 1.0).unwrap()).is_err());
    }
}
