//! Seeded verification campaigns: every requested theorem is evaluated on
//! random regime-valid instances over a grid of dimensions and parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{Fingerprint, TheoremId};
use crate::instance::{canonical_params, describe_map, min_dim, sample_instance, NamedMatrix};
use crate::params::{BoundParams, Regime};
use crate::sampling::{derive_seed, rng_from_seed};
use crate::spd::DEFAULT_TOL;

/// Random unit vectors per instance for the vector inequalities (the
/// eigenvectors of `A` are always added).
pub const DEFAULT_VECTORS: usize = 16;

/// Largest dimension a campaign accepts.
pub const MAX_CAMPAIGN_DIM: usize = 64;

/// Cartesian grid over `(m, m', M', M)`. Entries a regime ignores are
/// canonicalized, so e.g. a plain theorem only sees the distinct `(m, M)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub m: Vec<f64>,
    pub m_prime: Vec<f64>,
    #[serde(rename = "M_prime")]
    pub big_m_prime: Vec<f64>,
    #[serde(rename = "M")]
    pub big_m: Vec<f64>,
}

impl ParamGrid {
    pub fn new(m: &[f64], m_prime: &[f64], big_m_prime: &[f64], big_m: &[f64]) -> Self {
        Self {
            m: m.to_vec(),
            m_prime: m_prime.to_vec(),
            big_m_prime: big_m_prime.to_vec(),
            big_m: big_m.to_vec(),
        }
    }

    /// A single point.
    pub fn point(p: &BoundParams) -> Self {
        Self::new(&[p.m], &[p.m_prime], &[p.big_m_prime], &[p.big_m])
    }

    fn plain(pairs: &[(f64, f64)]) -> Vec<(f64, f64, f64, f64)> {
        pairs
            .iter()
            .map(|&(m, big_m)| (m, m, big_m, big_m))
            .collect()
    }

    /// Every combination, in lexicographic order of the four axes.
    pub fn points(&self) -> Vec<(f64, f64, f64, f64)> {
        let mut out = Vec::new();
        for &m in &self.m {
            for &mp in &self.m_prime {
                for &bmp in &self.big_m_prime {
                    for &bm in &self.big_m {
                        out.push((m, mp, bmp, bm));
                    }
                }
            }
        }
        out
    }
}

/// Grid used when a campaign does not specify one.
pub fn default_grid(regime: Regime) -> Vec<(f64, f64, f64, f64)> {
    match regime {
        Regime::Plain => ParamGrid::plain(&[(1.0, 4.0), (0.5, 8.0)]),
        Regime::Relative => ParamGrid::plain(&[(1.5, 4.0), (4.0, 9.0)]),
        Regime::Shifted => {
            ParamGrid::new(&[1.0], &[1.5, 2.0, 3.0], &[8.0], &[3.0, 4.0, 8.0]).points()
        }
        Regime::SelfInverseLow => {
            ParamGrid::new(&[0.25, 0.5], &[1.21, 2.0], &[4.0], &[4.0]).points()
        }
        Regime::SelfInverseHigh => {
            ParamGrid::new(&[1.0, 1.5], &[2.0, 4.0], &[8.0], &[4.0, 8.0]).points()
        }
        Regime::Sandwich => ParamGrid::new(&[1.0], &[1.0, 2.0], &[2.0, 3.0], &[4.0]).points(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub theorems: Vec<TheoremId>,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// `None` selects [`default_grid`] for each theorem's regime.
    pub grid: Option<ParamGrid>,
    pub vectors: usize,
}

impl CampaignConfig {
    pub fn new(theorems: Vec<TheoremId>, dims: Vec<usize>, samples: usize, seed: u64) -> Self {
        Self {
            theorems,
            dims,
            samples,
            seed,
            tol: DEFAULT_TOL,
            grid: None,
            vectors: DEFAULT_VECTORS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_owned()));
        if self.samples == 0 {
            return bad("samples must be at least 1");
        }
        if self.theorems.is_empty() {
            return bad("no theorems selected");
        }
        if self.dims.is_empty() {
            return bad("no dimensions selected");
        }
        if self.dims.iter().any(|&d| d == 0 || d > MAX_CAMPAIGN_DIM) {
            return bad("dimensions must lie in 1..=64");
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return bad("tolerance must be finite and non-negative");
        }
        Ok(())
    }
}

/// A grid point or dimension left out of a campaign, with the reason.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub theorem: TheoremId,
    pub dim: Option<usize>,
    /// `(m, m', M', M)`, absent when a whole dimension is skipped.
    pub point: Option<[f64; 4]>,
    pub reason: String,
}

/// The instance with the smallest relative slack in a cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extremal {
    pub fingerprint: Fingerprint,
    pub draw: usize,
    pub label: String,
    pub ratio: f64,
    pub rel_slack: f64,
    pub map: Option<String>,
    pub matrices: Vec<NamedMatrix>,
}

/// Statistics for one `(theorem, dim, params)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub theorem: TheoremId,
    pub dim: usize,
    pub params: BoundParams,
    pub samples: usize,
    /// Instances where the refined bound or its classical baseline failed.
    pub violations: usize,
    pub refined_violations: usize,
    pub classical_violations: usize,
    pub near_tight: usize,
    /// Largest attained `lhs/rhs` of the refined bound.
    pub max_ratio: f64,
    pub classical_max_ratio: Option<f64>,
    /// Largest attained ratio against a conjectured constant, reported only.
    pub reference_max_ratio: Option<f64>,
    pub min_slack: f64,
    pub mean_slack: f64,
    pub improvement_ratio: f64,
    pub extremal: Extremal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub cells: Vec<CellReport>,
    pub skipped: Vec<Skipped>,
}

impl CampaignReport {
    pub fn violations(&self) -> usize {
        self.cells.iter().map(|c| c.violations).sum()
    }

    pub fn max_ratio(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.max_ratio)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

struct DrawOutcome {
    refined_violated: bool,
    classical_violated: bool,
    near_tight: bool,
    max_ratio: f64,
    classical_max_ratio: Option<f64>,
    reference_max_ratio: Option<f64>,
    min_slack: f64,
    improvement_ratio: f64,
    extremal: Extremal,
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn run_draw(
    theorem: TheoremId,
    dim: usize,
    params: &BoundParams,
    draw: usize,
    seed: u64,
    cfg: &CampaignConfig,
) -> Result<DrawOutcome> {
    let mut rng = rng_from_seed(seed);
    let inst = sample_instance(theorem, dim, params, draw, cfg.vectors, &mut rng)?;
    let evaluated = inst.evaluate(cfg.tol)?;
    let mut out: Option<(DrawOutcome, Option<usize>)> = None;
    for e in evaluated {
        let r = &e.record;
        let slack = r.verdict.rel_slack;
        let classical_ok = r.classical.as_ref().is_none_or(|c| c.bound.verdict.holds);
        match &mut out {
            None => {
                out = Some((
                    DrawOutcome {
                        refined_violated: !r.verdict.holds,
                        classical_violated: !classical_ok,
                        near_tight: r.verdict.is_near_tight(),
                        max_ratio: r.ratio,
                        classical_max_ratio: r.classical_ratio(),
                        reference_max_ratio: r.reference.as_ref().map(|b| b.bound.ratio),
                        min_slack: slack,
                        improvement_ratio: r.improvement_ratio,
                        extremal: Extremal {
                            fingerprint: Fingerprint {
                                seed,
                                dim,
                                params: *params,
                            },
                            draw,
                            label: r.label.to_owned(),
                            ratio: r.ratio,
                            rel_slack: slack,
                            map: inst.map.as_ref().map(describe_map),
                            matrices: Vec::new(),
                        },
                    },
                    e.probe,
                ));
            }
            Some((o, probe)) => {
                o.refined_violated |= !r.verdict.holds;
                o.classical_violated |= !classical_ok;
                o.near_tight |= r.verdict.is_near_tight();
                o.max_ratio = o.max_ratio.max(r.ratio);
                o.classical_max_ratio = max_opt(o.classical_max_ratio, r.classical_ratio());
                o.reference_max_ratio = max_opt(
                    o.reference_max_ratio,
                    r.reference.as_ref().map(|b| b.bound.ratio),
                );
                if slack < o.min_slack {
                    o.min_slack = slack;
                    o.improvement_ratio = r.improvement_ratio;
                    o.extremal.label = r.label.to_owned();
                    o.extremal.ratio = r.ratio;
                    o.extremal.rel_slack = slack;
                    *probe = e.probe;
                }
            }
        }
    }
    let (mut o, probe) =
        out.ok_or_else(|| Error::InvalidArgument(format!("{theorem} produced no comparison")))?;
    o.extremal.matrices = inst.named_matrices(probe);
    Ok(o)
}

fn run_cell(
    theorem: TheoremId,
    theorem_index: usize,
    dim: usize,
    grid_index: usize,
    params: &BoundParams,
    cfg: &CampaignConfig,
) -> Result<CellReport> {
    let outcomes = (0..cfg.samples)
        .into_par_iter()
        .map(|draw| {
            let seed = derive_seed(
                cfg.seed,
                &[
                    theorem_index as u64,
                    dim as u64,
                    grid_index as u64,
                    draw as u64,
                ],
            );
            run_draw(theorem, dim, params, draw, seed, cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut outcomes = outcomes.into_iter();
    let first = outcomes.next().expect("samples >= 1");
    let mut cell = CellReport {
        theorem,
        dim,
        params: *params,
        samples: cfg.samples,
        violations: usize::from(first.refined_violated || first.classical_violated),
        refined_violations: usize::from(first.refined_violated),
        classical_violations: usize::from(first.classical_violated),
        near_tight: usize::from(first.near_tight),
        max_ratio: first.max_ratio,
        classical_max_ratio: first.classical_max_ratio,
        reference_max_ratio: first.reference_max_ratio,
        min_slack: first.min_slack,
        mean_slack: 0.0,
        improvement_ratio: first.improvement_ratio,
        extremal: first.extremal,
    };
    let mut slack_sum = first.min_slack;
    for o in outcomes {
        cell.violations += usize::from(o.refined_violated || o.classical_violated);
        cell.refined_violations += usize::from(o.refined_violated);
        cell.classical_violations += usize::from(o.classical_violated);
        cell.near_tight += usize::from(o.near_tight);
        cell.max_ratio = cell.max_ratio.max(o.max_ratio);
        cell.classical_max_ratio = max_opt(cell.classical_max_ratio, o.classical_max_ratio);
        cell.reference_max_ratio = max_opt(cell.reference_max_ratio, o.reference_max_ratio);
        slack_sum += o.min_slack;
        if o.min_slack < cell.min_slack {
            cell.min_slack = o.min_slack;
            cell.improvement_ratio = o.improvement_ratio;
            cell.extremal = o.extremal;
        }
    }
    cell.mean_slack = slack_sum / cfg.samples as f64;
    Ok(cell)
}

/// The feasible, deduplicated parameter points of a theorem, with the
/// skipped ones and their reasons.
fn feasible_points(
    theorem: TheoremId,
    grid: Option<&ParamGrid>,
) -> (Vec<BoundParams>, Vec<Skipped>) {
    let regime = theorem.regime();
    let raw = match grid {
        Some(g) => g.points(),
        None => default_grid(regime),
    };
    let mut points: Vec<BoundParams> = Vec::new();
    let mut skipped = Vec::new();
    for (m, mp, bmp, bm) in raw {
        let p = BoundParams {
            m,
            m_prime: mp,
            big_m_prime: bmp,
            big_m: bm,
        };
        let check = BoundParams::new(m, mp, bmp, bm)
            .map(|p| canonical_params(regime, &p))
            .and_then(|p| regime.check_feasible(&p).map(|()| p));
        match check {
            Ok(p) if !points.contains(&p) => points.push(p),
            Ok(_) => {}
            Err(e) => skipped.push(Skipped {
                theorem,
                dim: None,
                point: Some([p.m, p.m_prime, p.big_m_prime, p.big_m]),
                reason: e.to_string(),
            }),
        }
    }
    (points, skipped)
}

/// Runs every `(theorem, dim, grid point)` cell in a fixed order; within a
/// cell, instances are drawn in parallel from per-instance seeds and merged
/// in draw order, so the report depends only on the configuration.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for &theorem in &cfg.theorems {
        let theorem_index = TheoremId::ALL
            .iter()
            .position(|&t| t == theorem)
            .expect("theorem in catalog");
        let (points, mut skips) = feasible_points(theorem, cfg.grid.as_ref());
        skipped.append(&mut skips);
        let dims: Vec<usize> = if theorem == TheoremId::ScalarAmgm {
            vec![1]
        } else {
            let mut dims = Vec::new();
            for &d in &cfg.dims {
                if d < min_dim(theorem) {
                    skipped.push(Skipped {
                        theorem,
                        dim: Some(d),
                        point: None,
                        reason: format!("{theorem} needs dimension at least {}", min_dim(theorem)),
                    });
                } else if !dims.contains(&d) {
                    dims.push(d);
                }
            }
            dims
        };
        if points.is_empty() || dims.is_empty() {
            return Err(Error::EmptyGrid(theorem.to_string()));
        }
        for &dim in &dims {
            for (grid_index, p) in points.iter().enumerate() {
                cells.push(run_cell(theorem, theorem_index, dim, grid_index, p, cfg)?);
            }
        }
    }
    Ok(CampaignReport { cells, skipped })
}
