use opineq::campaign::{run_campaign, CampaignConfig, ParamGrid};
use opineq::report::{from_json, to_json, Meta, ReportDocument};
use opineq::{BoundParams, Error, TheoremId};
use proptest::prelude::*;

fn all(dims: Vec<usize>, samples: usize, seed: u64) -> CampaignConfig {
    CampaignConfig::new(TheoremId::ALL.to_vec(), dims, samples, seed)
}

#[test]
fn same_seed_same_report() {
    let cfg = all(vec![2, 3], 12, 42);
    let a = run_campaign(&cfg).unwrap();
    let b = run_campaign(&cfg).unwrap();
    assert_eq!(a, b);
    let meta = Meta::new("0", 42, cfg.tol, "t");
    assert_eq!(
        to_json(&ReportDocument::new(meta.clone(), a)).unwrap(),
        to_json(&ReportDocument::new(meta, b)).unwrap()
    );
}

#[test]
fn different_seed_different_draws() {
    let a = run_campaign(&all(vec![3], 8, 1)).unwrap();
    let b = run_campaign(&all(vec![3], 8, 2)).unwrap();
    assert_ne!(a, b);
}

#[test]
fn report_round_trips() {
    let doc = ReportDocument::new(
        Meta::new("0", 7, 1e-8, "t"),
        run_campaign(&all(vec![2], 6, 7)).unwrap(),
    );
    let text = to_json(&doc).unwrap();
    let back: ReportDocument = from_json(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(to_json(&back).unwrap(), text);
}

#[test]
fn degenerate_interval_chain_is_tight() {
    let mut cfg = CampaignConfig::new(vec![TheoremId::LinChain], vec![1, 2, 4], 20, 3);
    cfg.grid = Some(ParamGrid::point(&BoundParams::plain(2.0, 2.0).unwrap()));
    let report = run_campaign(&cfg).unwrap();
    assert_eq!(report.cells.len(), 3);
    for cell in &report.cells {
        assert_eq!(cell.violations, 0);
        assert!(cell.min_slack.abs() < 1e-12, "{}", cell.min_slack);
        assert!(cell.mean_slack.abs() < 1e-12, "{}", cell.mean_slack);
        assert!((cell.max_ratio - 1.0).abs() < 1e-12);
    }
}

#[test]
fn infeasible_grid_is_an_error() {
    let mut cfg = CampaignConfig::new(vec![TheoremId::KantorovichProduct], vec![2], 5, 0);
    cfg.grid = Some(ParamGrid::point(
        &BoundParams::with_multiplier(2.0, 3.0, 5.0).unwrap(),
    ));
    let err = run_campaign(&cfg).unwrap_err();
    assert!(matches!(err, Error::EmptyGrid(_)), "{err}");
    assert!(err.is_infeasible());
}

#[test]
fn wielandt_skips_dimension_one() {
    let cfg = CampaignConfig::new(vec![TheoremId::WielandtScalar], vec![1, 2], 4, 0);
    let report = run_campaign(&cfg).unwrap();
    assert!(report.cells.iter().all(|c| c.dim == 2));
    assert!(report
        .skipped
        .iter()
        .any(|s| s.dim == Some(1) && s.point.is_none()));
}

#[test]
fn zero_samples_rejected() {
    let cfg = all(vec![2], 0, 0);
    assert!(matches!(run_campaign(&cfg), Err(Error::InvalidArgument(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn no_violations_on_default_grids(seed in any::<u64>(), dim in 2usize..=5) {
        let report = run_campaign(&all(vec![dim], 6, seed)).unwrap();
        prop_assert_eq!(report.violations(), 0);
        prop_assert!(report.max_ratio() <= 1.0 + 1e-8);
    }
}
