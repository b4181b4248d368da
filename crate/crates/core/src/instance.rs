//! A concrete input for one theorem (matrices, map, isometries, probe
//! vectors), how to draw one at random, and how to evaluate it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{
    check_choi_record, check_holder_mccarthy_refined, check_isometry_family_bound,
    check_kantorovich_product_refined, check_kantorovich_refined, check_lemma_refined_amgm,
    check_lin_chain, check_lin_refined_squared, check_norm_amgm_record, check_polya_szego_refined,
    check_square_order_refined, check_wielandt_operator, check_wielandt_scalar,
    scalar_refined_amgm, IneqRecord, LinVariant, TheoremId, WielandtVariant,
};
use crate::maps::{MapKind, PositiveMapSpec};
use crate::params::{BoundParams, Regime};
use crate::sampling::{
    haar_orthogonal, sample_congruence_family, sample_orthogonal_isometries, sample_positive_map,
    sample_psd, sample_relative_pair, sample_sandwich_pair, sample_self_inverse,
    sample_shifted_pair, sample_spd, sample_unit_vector, IsometryPair, SelfInverseVariant,
};
use crate::spd::{Matrix, SpdMatrix, Vector};

/// A unit vector, or an orthonormal pair, at which a vector inequality is
/// evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum Probe {
    Single(Vector),
    Pair(Vector, Vector),
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub theorem: TheoremId,
    pub params: BoundParams,
    pub a: SpdMatrix,
    pub b: Option<SpdMatrix>,
    pub map: Option<PositiveMapSpec>,
    pub family: Vec<Matrix>,
    pub pair: Option<IsometryPair>,
    pub probes: Vec<Probe>,
}

/// A record together with the probe it was evaluated at.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub record: IneqRecord,
    pub probe: Option<usize>,
}

/// Matrix in row-major nested form, for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub rows: Vec<Vec<f64>>,
}

impl NamedMatrix {
    pub fn new(name: impl Into<String>, m: &Matrix) -> Self {
        Self {
            name: name.into(),
            rows: (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        let r = self.rows.len();
        let c = self.rows.first().map_or(0, Vec::len);
        Matrix::from_fn(r, c, |i, j| self.rows[i][j])
    }
}

/// Smallest dimension a theorem can be evaluated in.
pub fn min_dim(theorem: TheoremId) -> usize {
    match theorem {
        TheoremId::WielandtScalar
        | TheoremId::WielandtBhatiaDavis
        | TheoremId::WielandtGumus
        | TheoremId::WielandtRefined => 2,
        _ => 1,
    }
}

/// Parameters with the entries a regime ignores set to their canonical
/// values (`m' = m`, `M' = M`, or `M' = M`), so grids can be deduplicated.
pub fn canonical_params(regime: Regime, p: &BoundParams) -> BoundParams {
    match regime {
        Regime::Plain | Regime::Relative => BoundParams {
            m_prime: p.m,
            big_m_prime: p.big_m,
            ..*p
        },
        Regime::Shifted | Regime::SelfInverseLow | Regime::SelfInverseHigh => BoundParams {
            big_m_prime: p.big_m,
            ..*p
        },
        Regime::Sandwich => *p,
    }
}

fn map_matrices(spec: &PositiveMapSpec) -> Vec<NamedMatrix> {
    match spec.kind() {
        MapKind::Compression { v } => vec![NamedMatrix::new("V", v)],
        MapKind::CongruenceSum { us } => us
            .iter()
            .enumerate()
            .map(|(j, u)| NamedMatrix::new(format!("U{}", j + 1), u))
            .collect(),
        _ => Vec::new(),
    }
}

/// Short description of a map, e.g. `pinching [[0, 2], [1]]`.
pub fn describe_map(spec: &PositiveMapSpec) -> String {
    match spec.kind() {
        MapKind::Pinching { blocks } => format!("pinching {blocks:?}"),
        MapKind::Compression { v } => format!("compression {}x{}", v.nrows(), v.ncols()),
        MapKind::CongruenceSum { us } => format!("congruence_sum k={}", us.len()),
        _ => spec.name().to_owned(),
    }
}

fn column(v: &Vector) -> Matrix {
    Matrix::from_column_slice(v.len(), 1, v.as_slice())
}

impl Instance {
    fn new(theorem: TheoremId, params: BoundParams, a: SpdMatrix) -> Self {
        Self {
            theorem,
            params,
            a,
            b: None,
            map: None,
            family: Vec::new(),
            pair: None,
            probes: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    fn b(&self) -> Result<&SpdMatrix> {
        self.b.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!("{} needs a second matrix", self.theorem))
        })
    }

    fn map(&self) -> Result<&PositiveMapSpec> {
        self.map
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("{} needs a positive map", self.theorem)))
    }

    fn pair(&self) -> Result<&IsometryPair> {
        self.pair.as_ref().ok_or_else(|| {
            Error::InvalidArgument(format!("{} needs an isometry pair", self.theorem))
        })
    }

    /// Every matrix of the instance, plus the probe vectors of `probe`.
    pub fn named_matrices(&self, probe: Option<usize>) -> Vec<NamedMatrix> {
        let mut out = vec![NamedMatrix::new("A", self.a.matrix())];
        if let Some(b) = &self.b {
            out.push(NamedMatrix::new("B", b.matrix()));
        }
        if let Some(map) = &self.map {
            out.extend(map_matrices(map));
        }
        out.extend(
            self.family
                .iter()
                .enumerate()
                .map(|(j, u)| NamedMatrix::new(format!("U{}", j + 1), u)),
        );
        if let Some(pair) = &self.pair {
            out.push(NamedMatrix::new("X", pair.x()));
            out.push(NamedMatrix::new("Y", pair.y()));
        }
        match probe.and_then(|i| self.probes.get(i)) {
            Some(Probe::Single(x)) => out.push(NamedMatrix::new("x", &column(x))),
            Some(Probe::Pair(x, y)) => {
                out.push(NamedMatrix::new("x", &column(x)));
                out.push(NamedMatrix::new("y", &column(y)));
            }
            None => {}
        }
        out
    }

    /// Runs the theorem's checker on this instance; vector theorems give one
    /// record per probe and the proof chain one record per link.
    pub fn evaluate(&self, tol: f64) -> Result<Vec<Evaluated>> {
        let p = &self.params;
        let a = &self.a;
        let whole = |record: IneqRecord| {
            vec![Evaluated {
                record,
                probe: None,
            }]
        };
        let out = match self.theorem {
            TheoremId::ScalarAmgm => {
                let x = a.matrix()[(0, 0)];
                let y = self.b()?.matrix()[(0, 0)];
                whole(scalar_refined_amgm(x, y, tol)?)
            }
            TheoremId::LemmaAmgm => whole(check_lemma_refined_amgm(a, self.b()?, p.m, tol)?),
            TheoremId::SquareOrder => whole(check_square_order_refined(a, self.b()?, p, tol)?),
            TheoremId::PolyaSzego => whole(check_polya_szego_refined(
                self.map()?,
                a,
                self.b()?,
                p,
                tol,
            )?),
            TheoremId::IsometryFamily => {
                whole(check_isometry_family_bound(&self.family, a, p, tol)?)
            }
            TheoremId::LinSquaredMapped | TheoremId::LinSquaredMeans => {
                let variant = if self.theorem == TheoremId::LinSquaredMapped {
                    LinVariant::MappedMean
                } else {
                    LinVariant::MeanOfMaps
                };
                whole(check_lin_refined_squared(
                    self.map()?,
                    a,
                    self.b()?,
                    p,
                    variant,
                    tol,
                )?)
            }
            TheoremId::LinChain => check_lin_chain(self.map()?, a, self.b()?, p, tol)?
                .into_iter()
                .map(|record| Evaluated {
                    record,
                    probe: None,
                })
                .collect(),
            TheoremId::WielandtBhatiaDavis
            | TheoremId::WielandtGumus
            | TheoremId::WielandtRefined => {
                let variant = match self.theorem {
                    TheoremId::WielandtBhatiaDavis => WielandtVariant::BhatiaDavis,
                    TheoremId::WielandtGumus => WielandtVariant::Gumus,
                    _ => WielandtVariant::Refined,
                };
                whole(check_wielandt_operator(
                    self.map()?,
                    a,
                    self.pair()?,
                    p,
                    variant,
                    tol,
                )?)
            }
            TheoremId::Choi => whole(check_choi_record(self.map()?, a, tol)?),
            TheoremId::NormAmgm => {
                whole(check_norm_amgm_record(a.matrix(), self.b()?.matrix(), tol)?)
            }
            TheoremId::Kantorovich
            | TheoremId::KantorovichProduct
            | TheoremId::HolderMccarthy
            | TheoremId::WielandtScalar => {
                let mut out = Vec::with_capacity(self.probes.len());
                for (i, probe) in self.probes.iter().enumerate() {
                    let record = match (self.theorem, probe) {
                        (TheoremId::Kantorovich, Probe::Single(x)) => {
                            check_kantorovich_refined(a, x, p.m, p.m_prime, p.big_m, tol)?
                        }
                        (TheoremId::KantorovichProduct, Probe::Single(x)) => {
                            check_kantorovich_product_refined(a, self.b()?, x, p, tol)?
                        }
                        (TheoremId::HolderMccarthy, Probe::Single(x)) => {
                            check_holder_mccarthy_refined(a, x, p, tol)?
                        }
                        (TheoremId::WielandtScalar, Probe::Pair(x, y)) => {
                            check_wielandt_scalar(a, x, y, p.m, p.big_m, tol)?
                        }
                        _ => {
                            return Err(Error::InvalidArgument(format!(
                                "probe kind does not fit {}",
                                self.theorem
                            )))
                        }
                    };
                    out.push(Evaluated {
                        record,
                        probe: Some(i),
                    });
                }
                if out.is_empty() {
                    return Err(Error::InvalidArgument(format!(
                        "{} needs at least one probe vector",
                        self.theorem
                    )));
                }
                out
            }
        };
        Ok(out)
    }
}

/// `s` random unit vectors, the eigenvectors of `a`, and the balanced mix
/// `(q_min + q_max)/√2` of its extreme eigenvectors.
fn single_probes<R: Rng + ?Sized>(a: &SpdMatrix, s: usize, rng: &mut R) -> Vec<Probe> {
    let n = a.dim();
    let q = a.eigenvectors();
    let mut probes: Vec<Probe> = (0..s)
        .map(|_| Probe::Single(sample_unit_vector(n, rng)))
        .collect();
    probes.extend((0..n).map(|j| Probe::Single(q.column(j).into_owned())));
    if n >= 2 {
        let mix = (q.column(0) + q.column(n - 1)) * std::f64::consts::FRAC_1_SQRT_2;
        probes.push(Probe::Single(mix));
    }
    probes
}

/// `s` random orthonormal pairs, plus `(q_min ± q_max)/√2`.
fn pair_probes<R: Rng + ?Sized>(a: &SpdMatrix, s: usize, rng: &mut R) -> Vec<Probe> {
    let n = a.dim();
    let mut probes: Vec<Probe> = (0..s)
        .map(|_| {
            let q = haar_orthogonal(n, rng);
            Probe::Pair(q.column(0).into_owned(), q.column(1).into_owned())
        })
        .collect();
    let q = a.eigenvectors();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    probes.push(Probe::Pair(
        (q.column(0) + q.column(n - 1)) * h,
        (q.column(0) - q.column(n - 1)) * h,
    ));
    probes
}

/// Draws a regime-valid instance. `draw` selects the map kind (cycling
/// through the catalog) and the congruence family size.
pub fn sample_instance<R: Rng + ?Sized>(
    theorem: TheoremId,
    dim: usize,
    params: &BoundParams,
    draw: usize,
    vectors: usize,
    rng: &mut R,
) -> Result<Instance> {
    let p = *params;
    let regime = theorem.regime();
    regime.check_feasible(&p)?;
    if dim < min_dim(theorem) {
        return Err(Error::InvalidArgument(format!(
            "{theorem} needs dimension at least {}",
            min_dim(theorem)
        )));
    }
    let plain = || crate::spd::SpectralInterval::new(p.m, p.big_m);
    let low = SelfInverseVariant::Low;
    let inst = match theorem {
        TheoremId::ScalarAmgm => {
            let lo = p.m;
            let hi = p.big_m;
            let x = lo + (hi - lo) * rng.random::<f64>();
            let y = lo + (hi - lo) * rng.random::<f64>();
            let mut inst = Instance::new(theorem, p, SpdMatrix::from_diagonal(&[x])?);
            inst.b = Some(SpdMatrix::from_diagonal(&[y])?);
            inst
        }
        TheoremId::LemmaAmgm => {
            let (a, b) = sample_relative_pair(dim, p.m, p.big_m, rng)?;
            let mut inst = Instance::new(theorem, p, a);
            inst.b = Some(b);
            inst
        }
        TheoremId::Kantorovich | TheoremId::HolderMccarthy => {
            let a = sample_self_inverse(dim, &p, low, rng)?;
            let probes = single_probes(&a, vectors, rng);
            let mut inst = Instance::new(theorem, p, a);
            inst.probes = probes;
            inst
        }
        TheoremId::KantorovichProduct => {
            let (a, b) = sample_shifted_pair(dim, &p, rng)?;
            let probes = single_probes(&a, vectors, rng);
            let mut inst = Instance::new(theorem, p, a);
            inst.b = Some(b);
            inst.probes = probes;
            inst
        }
        TheoremId::SquareOrder => {
            let a = sample_self_inverse(dim, &p, low, rng)?;
            let scale = a.max_eigenvalue() * rng.random::<f64>();
            let b = SpdMatrix::new(&(a.matrix() + sample_psd(dim, scale, rng)))?;
            let mut inst = Instance::new(theorem, p, a);
            inst.b = Some(b);
            inst
        }
        TheoremId::PolyaSzego => {
            let (a, b) = sample_shifted_pair(dim, &p, rng)?;
            let mut inst = Instance::new(theorem, p, a);
            inst.b = Some(b);
            inst.map = Some(sample_positive_map(dim, draw, rng)?);
            inst
        }
        TheoremId::IsometryFamily => {
            let a = sample_self_inverse(dim, &p, low, rng)?;
            let mut inst = Instance::new(theorem, p, a);
            inst.family = sample_congruence_family(dim, 1 + draw % 3, rng);
            inst
        }
        TheoremId::LinSquaredMapped | TheoremId::LinSquaredMeans | TheoremId::LinChain => {
            let (a, b) = sample_sandwich_pair(dim, &p, rng)?;
            let mut inst = Instance::new(theorem, p, a);
            inst.b = Some(b);
            inst.map = Some(sample_positive_map(dim, draw, rng)?);
            inst
        }
        TheoremId::WielandtScalar => {
            let a = sample_spd(dim, plain()?, rng)?;
            let probes = pair_probes(&a, vectors, rng);
            let mut inst = Instance::new(theorem, p, a);
            inst.probes = probes;
            inst
        }
        TheoremId::WielandtBhatiaDavis | TheoremId::WielandtGumus | TheoremId::WielandtRefined => {
            let a = if theorem == TheoremId::WielandtRefined {
                sample_self_inverse(dim, &p, SelfInverseVariant::High, rng)?
            } else {
                sample_spd(dim, plain()?, rng)?
            };
            let r = dim / 2;
            let mut inst = Instance::new(theorem, p, a);
            inst.pair = Some(sample_orthogonal_isometries(dim, r, rng)?);
            inst.map = Some(sample_positive_map(r, draw, rng)?);
            inst
        }
        TheoremId::Choi => {
            let a = sample_spd(dim, plain()?, rng)?;
            let mut inst = Instance::new(theorem, p, a);
            inst.map = Some(sample_positive_map(dim, draw, rng)?);
            inst
        }
        TheoremId::NormAmgm => {
            let a = sample_spd(dim, plain()?, rng)?;
            let b = sample_spd(dim, plain()?, rng)?;
            let mut inst = Instance::new(theorem, p, a);
            inst.b = Some(b);
            inst
        }
    };
    Ok(inst)
}
