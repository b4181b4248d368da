//! Ratio maximization by random restarts and coordinate hill-climbing, and
//! the classical/refined constant comparison over a parameter grid.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{
    check_kantorovich_classical, refinement_constants, IneqRecord, TheoremId,
};
use crate::instance::{canonical_params, describe_map, min_dim, Instance, NamedMatrix, Probe};
use crate::maps::PositiveMapSpec;
use crate::params::{refinement_factor, BoundParams, Regime};
use crate::sampling::{
    derive_seed, haar_orthogonal, relative_pair, rng_from_seed, sample_congruence_family,
    sample_positive_map, sample_unit_vector, IsometryPair, SeededRng, RELATIVE_BASE_WINDOW,
};
use crate::spd::{symmetrize, Matrix, SpdMatrix, Vector, DEFAULT_TOL};

/// Largest dimension accepted by the search.
pub const MAX_SEARCH_DIM: usize = 8;

pub const DEFAULT_BUDGET: usize = 10_000;

pub const DEFAULT_RESTARTS: usize = 8;

const DELTA_START: f64 = 0.1;
const DELTA_END: f64 = 1e-4;
const INIT_TRIES: usize = 1000;

/// Which constant of a theorem the ratio is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Refined,
    /// The classical baseline. For `kantorovich` this is the classical
    /// inequality on the plain regime `mI ≤ A ≤ MI`.
    Classical,
}

/// Axis-aligned box of parameters `lo ≤ (m, m', M', M) ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamBox {
    pub lo: BoundParams,
    pub hi: BoundParams,
}

fn components(p: &BoundParams) -> [f64; 4] {
    [p.m, p.m_prime, p.big_m_prime, p.big_m]
}

fn from_components(c: [f64; 4]) -> BoundParams {
    BoundParams {
        m: c[0],
        m_prime: c[1],
        big_m_prime: c[2],
        big_m: c[3],
    }
}

impl ParamBox {
    pub fn new(lo: BoundParams, hi: BoundParams) -> Result<Self> {
        if components(&lo)
            .iter()
            .zip(components(&hi))
            .any(|(a, b)| *a > b)
        {
            return Err(Error::InvalidArgument(
                "box lower corner exceeds upper corner".into(),
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(p: BoundParams) -> Self {
        Self { lo: p, hi: p }
    }

    fn clamp(&self, c: [f64; 4]) -> [f64; 4] {
        let (lo, hi) = (components(&self.lo), components(&self.hi));
        std::array::from_fn(|i| c[i].clamp(lo[i], hi[i]))
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BoundParams {
        let (lo, hi) = (components(&self.lo), components(&self.hi));
        from_components(std::array::from_fn(|i| {
            lo[i] + (hi[i] - lo[i]) * rng.random::<f64>()
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub theorem: TheoremId,
    pub bound: BoundKind,
    pub dim: usize,
    pub param_box: ParamBox,
    /// Total number of ratio evaluations over all restarts.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
}

impl SearchConfig {
    pub fn new(theorem: TheoremId, dim: usize, param_box: ParamBox, seed: u64) -> Self {
        Self {
            theorem,
            bound: BoundKind::Refined,
            dim,
            param_box,
            budget: DEFAULT_BUDGET,
            restarts: DEFAULT_RESTARTS,
            seed,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub theorem: TheoremId,
    pub bound: BoundKind,
    pub dim: usize,
    pub best_ratio: f64,
    pub best_restart: usize,
    /// Best ratio reached by each restart.
    pub restart_ratios: Vec<f64>,
    pub evaluations: usize,
    pub params: BoundParams,
    pub label: String,
    pub map: Option<String>,
    pub matrices: Vec<NamedMatrix>,
}

/// How the eigenvalues of one spectral slot are confined.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Slot {
    /// The regime window of `A`.
    Window,
    /// `[m, M]`.
    Plain,
    RelativeBase,
    /// `[0, 1]`, for the contraction defining `B` in the shifted regime.
    Unit,
    /// `[M', M]`.
    Upper,
    /// `[0, hi]` with `hi` the top of the regime window of `A`.
    Psd,
}

struct Layout {
    regime: Regime,
    slots: Vec<Slot>,
    extra_frame: bool,
    vector: bool,
}

fn layout(theorem: TheoremId, bound: BoundKind) -> Layout {
    use Slot::*;
    use TheoremId as T;
    let classical_kantorovich = theorem == T::Kantorovich && bound == BoundKind::Classical;
    let regime = if classical_kantorovich {
        Regime::Plain
    } else {
        theorem.regime()
    };
    let (slots, extra_frame, vector) = match theorem {
        T::ScalarAmgm | T::NormAmgm => (vec![Plain, Plain], false, false),
        T::LemmaAmgm => (vec![RelativeBase, Plain], false, false),
        T::Kantorovich | T::HolderMccarthy => (vec![Window], false, true),
        T::KantorovichProduct => (vec![Window, Unit], false, true),
        T::SquareOrder => (vec![Window, Psd], false, false),
        T::PolyaSzego => (vec![Window, Unit], false, false),
        T::IsometryFamily | T::Choi => (vec![Window], false, false),
        T::LinSquaredMapped | T::LinSquaredMeans | T::LinChain => {
            (vec![Window, Upper], false, false)
        }
        T::WielandtScalar | T::WielandtBhatiaDavis | T::WielandtGumus | T::WielandtRefined => {
            (vec![Window], true, false)
        }
    };
    Layout {
        regime,
        slots,
        extra_frame,
        vector,
    }
}

/// Indices into `(m, m', M', M)` that a regime depends on.
fn free_params(regime: Regime) -> &'static [usize] {
    match regime {
        Regime::Plain | Regime::Relative => &[0, 3],
        Regime::Shifted | Regime::SelfInverseLow | Regime::SelfInverseHigh => &[0, 1, 3],
        Regime::Sandwich => &[0, 1, 2, 3],
    }
}

fn slot_window(slot: Slot, regime: Regime, p: &BoundParams) -> Result<(f64, f64)> {
    Ok(match slot {
        Slot::Window => {
            let w = regime.window(p)?;
            (w.lo, w.hi)
        }
        Slot::Plain => (p.m, p.big_m),
        Slot::RelativeBase => RELATIVE_BASE_WINDOW,
        Slot::Unit => (0.0, 1.0),
        Slot::Upper => (p.big_m_prime, p.big_m),
        Slot::Psd => (0.0, regime.window(p)?.hi),
    })
}

/// Restores orthonormality after a rotation.
fn reorthonormalize(q: &Matrix) -> Matrix {
    let qr = q.clone().qr();
    let r = qr.r();
    let mut out = qr.q();
    for j in 0..out.ncols() {
        if r[(j, j)] < 0.0 {
            out.column_mut(j).neg_mut();
        }
    }
    out
}

fn conjugate(frame: &Matrix, values: &[f64]) -> Matrix {
    let d = Matrix::from_diagonal(&Vector::from_row_slice(values));
    symmetrize(&(frame * d * frame.transpose()))
}

#[derive(Clone, Debug)]
struct Candidate {
    params: BoundParams,
    spectra: Vec<Vec<f64>>,
    frames: Vec<Matrix>,
    vector: Option<Vector>,
}

/// Per-restart data that the climb does not move.
struct Fixed {
    theorem: TheoremId,
    bound: BoundKind,
    layout: Layout,
    dim: usize,
    map: Option<PositiveMapSpec>,
    family: Vec<Matrix>,
    tol: f64,
}

impl Fixed {
    fn clamp_spectra(&self, c: &mut Candidate) -> Result<()> {
        for (slot, values) in self.layout.slots.iter().zip(c.spectra.iter_mut()) {
            let (lo, hi) = slot_window(*slot, self.layout.regime, &c.params)?;
            for v in values.iter_mut() {
                *v = v.clamp(lo, hi);
            }
        }
        Ok(())
    }

    fn instance(&self, c: &Candidate) -> Result<Instance> {
        use TheoremId as T;
        let p = c.params;
        let spd = |i: usize| SpdMatrix::from_spectrum(&c.spectra[i], &c.frames[i]);
        let a = spd(0)?;
        let b = match self.theorem {
            T::ScalarAmgm
            | T::NormAmgm
            | T::LinSquaredMapped
            | T::LinSquaredMeans
            | T::LinChain => Some(spd(1)?),
            T::LemmaAmgm => Some(relative_pair(&a, &spd(1)?)?),
            T::KantorovichProduct | T::PolyaSzego => {
                // B = m'A + D C D with D = (MI − m'A)^{1/2} and 0 ≤ C ≤ I,
                // so that m'A ≤ B ≤ MI.
                let roots: Vec<f64> = c.spectra[0]
                    .iter()
                    .map(|&l| (p.big_m - p.m_prime * l).max(0.0).sqrt())
                    .collect();
                let d = conjugate(&c.frames[0], &roots);
                let contraction = conjugate(&c.frames[1], &c.spectra[1]);
                Some(SpdMatrix::new(
                    &(a.matrix() * p.m_prime + &d * contraction * &d),
                )?)
            }
            T::SquareOrder => {
                let extra = conjugate(&c.frames[1], &c.spectra[1]);
                Some(SpdMatrix::new(&(a.matrix() + extra))?)
            }
            _ => None,
        };
        let mut inst = Instance {
            theorem: self.theorem,
            params: p,
            a,
            b,
            map: self.map.clone(),
            family: self.family.clone(),
            pair: None,
            probes: Vec::new(),
        };
        if let Some(x) = &c.vector {
            inst.probes.push(Probe::Single(x.clone()));
        }
        if self.layout.extra_frame {
            let q = c.frames.last().expect("extra frame");
            if self.theorem == T::WielandtScalar {
                inst.probes.push(Probe::Pair(
                    q.column(0).into_owned(),
                    q.column(1).into_owned(),
                ));
            } else {
                inst.pair = Some(IsometryPair::from_orthogonal(q, self.dim / 2)?);
            }
        }
        Ok(inst)
    }

    fn records(&self, c: &Candidate) -> Result<(Instance, Vec<IneqRecord>)> {
        let inst = self.instance(c)?;
        let records =
            if self.theorem == TheoremId::Kantorovich && self.bound == BoundKind::Classical {
                let x = c.vector.as_ref().expect("vector theorem");
                vec![check_kantorovich_classical(
                    &inst.a,
                    x,
                    c.params.m,
                    c.params.big_m,
                    self.tol,
                )?]
            } else {
                inst.evaluate(self.tol)?
                    .into_iter()
                    .map(|e| e.record)
                    .collect()
            };
        Ok((inst, records))
    }

    fn ratio_of(&self, r: &IneqRecord) -> f64 {
        match self.bound {
            BoundKind::Refined => r.ratio,
            BoundKind::Classical => r.classical_ratio().unwrap_or(r.ratio),
        }
    }

    /// Largest ratio over the instance's records, or `None` if the
    /// candidate leaves the regime numerically.
    fn ratio(&self, c: &Candidate) -> Option<f64> {
        let (_, records) = self.records(c).ok()?;
        records
            .iter()
            .map(|r| self.ratio_of(r))
            .fold(None, |acc: Option<f64>, v| {
                Some(acc.map_or(v, |a| a.max(v)))
            })
    }

    fn random_candidate(&self, pbox: &ParamBox, rng: &mut SeededRng) -> Result<Candidate> {
        let regime = self.layout.regime;
        let params = (0..INIT_TRIES)
            .map(|_| canonical_params(regime, &pbox.sample(rng)))
            .find(|p| regime.check_feasible(p).is_ok())
            .ok_or_else(|| {
                Error::infeasible(regime, "no feasible parameters found in the search box")
            })?;
        let mut spectra = Vec::new();
        let mut frames = Vec::new();
        for &slot in &self.layout.slots {
            let n = if matches!(self.theorem, TheoremId::ScalarAmgm) {
                1
            } else {
                self.dim
            };
            let (lo, hi) = slot_window(slot, regime, &params)?;
            spectra.push(
                (0..n)
                    .map(|_| lo + (hi - lo) * rng.random::<f64>())
                    .collect(),
            );
            frames.push(haar_orthogonal(n, rng));
        }
        if self.layout.extra_frame {
            frames.push(haar_orthogonal(self.dim, rng));
        }
        let vector = self
            .layout
            .vector
            .then(|| sample_unit_vector(self.dim, rng));
        Ok(Candidate {
            params,
            spectra,
            frames,
            vector,
        })
    }

    /// One random coordinate move of size `delta`.
    fn propose(
        &self,
        c: &Candidate,
        pbox: &ParamBox,
        delta: f64,
        rng: &mut SeededRng,
    ) -> Result<Option<Candidate>> {
        let mut next = c.clone();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let regime = self.layout.regime;
        let movable: Vec<usize> = free_params(regime)
            .iter()
            .copied()
            .filter(|&i| components(&pbox.lo)[i] < components(&pbox.hi)[i])
            .collect();
        let rotatable: Vec<usize> = (0..next.frames.len())
            .filter(|&i| next.frames[i].nrows() >= 2)
            .collect();
        let mut kinds = vec![0u8];
        if !rotatable.is_empty() {
            kinds.push(1);
        }
        if next.vector.is_some() {
            kinds.push(2);
        }
        if !movable.is_empty() {
            kinds.push(3);
        }
        match *kinds.choose(rng).expect("eigenvalue moves always apply") {
            0 => {
                let s = rng.random_range(0..next.spectra.len());
                let i = rng.random_range(0..next.spectra[s].len());
                next.spectra[s][i] *= 1.0 + sign * delta;
            }
            1 => {
                let f = *rotatable.choose(rng).expect("non-empty");
                let n = next.frames[f].nrows();
                let i = rng.random_range(0..n);
                let j = (i + rng.random_range(1..n)) % n;
                let (s, co) = (sign * delta).sin_cos();
                let q = &mut next.frames[f];
                for k in 0..n {
                    let (qi, qj) = (q[(i, k)], q[(j, k)]);
                    q[(i, k)] = co * qi - s * qj;
                    q[(j, k)] = s * qi + co * qj;
                }
                *q = reorthonormalize(q);
            }
            2 => {
                let x = next.vector.as_mut().expect("vector present");
                let step = Vector::from_fn(x.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
                *x += step * delta;
                let norm = x.norm();
                if norm == 0.0 {
                    return Ok(None);
                }
                *x /= norm;
            }
            _ => {
                let i = *movable.choose(rng).expect("non-empty");
                let mut comps = components(&next.params);
                comps[i] *= 1.0 + sign * delta;
                let p = canonical_params(regime, &from_components(pbox.clamp(comps)));
                if regime.check_feasible(&p).is_err() {
                    return Ok(None);
                }
                next.params = p;
            }
        }
        self.clamp_spectra(&mut next)?;
        Ok(Some(next))
    }
}

struct RestartOutcome {
    ratio: f64,
    evaluations: usize,
    candidate: Candidate,
    fixed: Fixed,
}

fn run_restart(cfg: &SearchConfig, restart: usize, budget: usize) -> Result<RestartOutcome> {
    let mut rng = rng_from_seed(derive_seed(cfg.seed, &[restart as u64]));
    let theorem = cfg.theorem;
    let map_dim = match theorem {
        TheoremId::WielandtBhatiaDavis | TheoremId::WielandtGumus | TheoremId::WielandtRefined => {
            cfg.dim / 2
        }
        _ => cfg.dim,
    };
    let uses_map = matches!(
        theorem,
        TheoremId::PolyaSzego
            | TheoremId::LinSquaredMapped
            | TheoremId::LinSquaredMeans
            | TheoremId::LinChain
            | TheoremId::WielandtBhatiaDavis
            | TheoremId::WielandtGumus
            | TheoremId::WielandtRefined
            | TheoremId::Choi
    );
    let map = if uses_map {
        Some(sample_positive_map(map_dim, restart, &mut rng)?)
    } else {
        None
    };
    let family = if theorem == TheoremId::IsometryFamily {
        sample_congruence_family(cfg.dim, 1 + restart % 3, &mut rng)
    } else {
        Vec::new()
    };
    let fixed = Fixed {
        theorem,
        bound: cfg.bound,
        layout: layout(theorem, cfg.bound),
        dim: cfg.dim,
        map,
        family,
        tol: cfg.tol,
    };

    let mut evaluations = 0;
    let mut start = None;
    while evaluations < budget {
        let c = fixed.random_candidate(&cfg.param_box, &mut rng)?;
        evaluations += 1;
        if let Some(r) = fixed.ratio(&c) {
            start = Some((c, r));
            break;
        }
    }
    let Some((mut current, mut ratio)) = start else {
        return Ok(RestartOutcome {
            ratio: f64::NEG_INFINITY,
            evaluations,
            candidate: fixed.random_candidate(&cfg.param_box, &mut rng)?,
            fixed,
        });
    };

    let steps = budget - evaluations;
    for k in 0..steps {
        let frac = if steps > 1 {
            k as f64 / (steps - 1) as f64
        } else {
            1.0
        };
        let delta = DELTA_START * (DELTA_END / DELTA_START).powf(frac);
        evaluations += 1;
        let Some(next) = fixed.propose(&current, &cfg.param_box, delta, &mut rng)? else {
            continue;
        };
        if let Some(r) = fixed.ratio(&next) {
            if r >= ratio {
                ratio = r;
                current = next;
            }
        }
    }
    Ok(RestartOutcome {
        ratio,
        evaluations,
        candidate: current,
        fixed,
    })
}

/// Maximizes `lhs/rhs` of one theorem over instances and parameters in a
/// box. Restarts run in parallel with their own RNG streams; the best
/// ratio wins, ties going to the lowest restart index.
pub fn maximize_ratio(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least 1".into()));
    }
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    if cfg.dim == 0 || cfg.dim > MAX_SEARCH_DIM {
        return Err(Error::InvalidArgument(format!(
            "search dimension must lie in 1..={MAX_SEARCH_DIM}"
        )));
    }
    let dim = if cfg.theorem == TheoremId::ScalarAmgm {
        1
    } else {
        cfg.dim
    };
    if dim < min_dim(cfg.theorem) {
        return Err(Error::InvalidArgument(format!(
            "{} needs dimension at least {}",
            cfg.theorem,
            min_dim(cfg.theorem)
        )));
    }
    let cfg = SearchConfig { dim, ..cfg.clone() };
    let restarts = cfg.restarts.min(cfg.budget);
    let share = cfg.budget / restarts;
    let extra = cfg.budget % restarts;
    let outcomes = (0..restarts)
        .into_par_iter()
        .map(|i| run_restart(&cfg, i, share + usize::from(i < extra)))
        .collect::<Result<Vec<_>>>()?;

    let restart_ratios: Vec<f64> = outcomes.iter().map(|o| o.ratio).collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let best_restart =
        restart_ratios.iter().enumerate().fold(
            0,
            |best, (i, &r)| if r > restart_ratios[best] { i } else { best },
        );
    let best = &outcomes[best_restart];
    let (inst, records) = best.fixed.records(&best.candidate)?;
    let worst = records
        .iter()
        .max_by(|a, b| best.fixed.ratio_of(a).total_cmp(&best.fixed.ratio_of(b)))
        .expect("at least one record");
    Ok(SearchResult {
        theorem: cfg.theorem,
        bound: cfg.bound,
        dim,
        best_ratio: best.ratio,
        best_restart,
        restart_ratios,
        evaluations,
        params: best.candidate.params,
        label: worst.label.to_owned(),
        map: inst.map.as_ref().map(describe_map),
        matrices: inst.named_matrices(if inst.probes.is_empty() {
            None
        } else {
            Some(0)
        }),
    })
}

/// One constant at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub params: BoundParams,
    pub name: String,
    pub regime: Regime,
    pub feasible: bool,
    pub classical: f64,
    pub refined: f64,
    pub refinement_argument: f64,
    pub power: i32,
    pub improvement_percent: f64,
    /// `|refined/classical − (1 + (ln c)²/8)^{−p}|`.
    pub ratio_error: f64,
}

/// Whether a refined constant strictly decreases in its refinement argument
/// among feasible grid points sharing `(m, M)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub name: String,
    pub m: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    pub points: usize,
    pub strictly_decreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    pub monotonicity: Vec<MonotonicityCheck>,
    /// Every feasible row has `refined ≤ classical` and a ratio error
    /// below `1e-12`.
    pub dominance: bool,
}

impl ComparisonTable {
    pub fn monotone(&self) -> bool {
        self.monotonicity.iter().all(|m| m.strictly_decreasing)
    }
}

/// Classical and refined constants over a grid of `(m, m', M', M)`.
pub fn compare_bounds(grid: &[BoundParams]) -> Result<ComparisonTable> {
    let mut rows = Vec::new();
    for p in grid {
        let table = refinement_constants(p)?;
        for r in table.rows {
            let expected = refinement_factor(r.refinement_argument).powi(-r.power);
            rows.push(ComparisonRow {
                params: table.params,
                ratio_error: (r.refined / r.classical - expected).abs(),
                improvement_percent: 100.0 * (1.0 - r.refined / r.classical),
                name: r.name,
                regime: r.regime,
                feasible: r.feasible,
                classical: r.classical,
                refined: r.refined,
                refinement_argument: r.refinement_argument,
                power: r.power,
            });
        }
    }
    let dominance = rows
        .iter()
        .filter(|r| r.feasible)
        .all(|r| r.refined <= r.classical && r.ratio_error < 1e-12);

    let mut monotonicity: Vec<MonotonicityCheck> = Vec::new();
    // (name, m, M, [(c, refined)])
    type Group = (String, f64, f64, Vec<(f64, f64)>);
    let mut groups: Vec<Group> = Vec::new();
    for r in rows.iter().filter(|r| r.feasible && r.power > 0) {
        let key = (r.name.as_str(), r.params.m, r.params.big_m);
        match groups.iter_mut().find(|g| (g.0.as_str(), g.1, g.2) == key) {
            Some(g) => g.3.push((r.refinement_argument, r.refined)),
            None => groups.push((
                r.name.clone(),
                r.params.m,
                r.params.big_m,
                vec![(r.refinement_argument, r.refined)],
            )),
        }
    }
    for (name, m, big_m, mut pts) in groups {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        let strictly_decreasing = pts.windows(2).all(|w| w[1].1 < w[0].1);
        monotonicity.push(MonotonicityCheck {
            name,
            m,
            big_m,
            points: pts.len(),
            strictly_decreasing,
        });
    }
    Ok(ComparisonTable {
        rows,
        monotonicity,
        dominance,
    })
}
