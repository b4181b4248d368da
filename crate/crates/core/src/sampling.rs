//! Seeded generators for instances that satisfy each regime by construction.
//!
//! Samplers pin the spectral endpoints of the window they draw from, so the
//! stated bounds are attained and not merely respected.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::maps::PositiveMapSpec;
use crate::params::{BoundParams, Regime};
use crate::spd::{Matrix, SpdMatrix, SpectralInterval, Vector};

/// The RNG used throughout; ChaCha output is stable across platforms.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream seed for `(master, parts...)`, e.g.
/// `(seed, theorem, dim, grid point, draw)`.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(master), |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of `diag(R)` moved into `Q`.
pub fn haar_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let qr = gaussian_matrix(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Eigenvalues in `interval`: for `dim ≥ 2` the first is `lo`, the last is
/// `hi`, the rest uniform; for `dim = 1` the single eigenvalue is `lo`.
pub fn pinned_spectrum<R: Rng + ?Sized>(
    dim: usize,
    interval: SpectralInterval,
    rng: &mut R,
) -> Vec<f64> {
    (0..dim)
        .map(|i| match i {
            0 => interval.lo,
            _ if i == dim - 1 => interval.hi,
            _ => interval.lo + (interval.hi - interval.lo) * rng.random::<f64>(),
        })
        .collect()
}

/// SPD matrix with pinned spectrum in `interval` and a Haar eigenframe.
pub fn sample_spd<R: Rng + ?Sized>(
    dim: usize,
    interval: SpectralInterval,
    rng: &mut R,
) -> Result<SpdMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "dimension must be at least 1".into(),
        ));
    }
    let spectrum = pinned_spectrum(dim, interval, rng);
    let frame = haar_orthogonal(dim, rng);
    SpdMatrix::from_spectrum(&spectrum, &frame)
}

/// `B = A^{1/2} C A^{1/2}`, so that `A^{-1/2} B A^{-1/2} = C`.
pub fn relative_pair(a: &SpdMatrix, c: &SpdMatrix) -> Result<SpdMatrix> {
    if a.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: c.dim(),
        });
    }
    let root = a.sqrt();
    SpdMatrix::new(&(root.matrix() * c.matrix() * root.matrix()))
}

/// Spectral window used for the free matrix `A` of the relative regime.
pub const RELATIVE_BASE_WINDOW: (f64, f64) = (1.0, 4.0);

/// `(A, B)` with `mA ≤ B ≤ MA`, `1 < m ≤ M`.
pub fn sample_relative_pair<R: Rng + ?Sized>(
    dim: usize,
    m: f64,
    big_m: f64,
    rng: &mut R,
) -> Result<(SpdMatrix, SpdMatrix)> {
    let params = BoundParams::plain(m, big_m)?;
    let window = Regime::Relative.window(&params)?;
    let (lo, hi) = RELATIVE_BASE_WINDOW;
    let a = sample_spd(dim, SpectralInterval::new(lo, hi)?, rng)?;
    let c = sample_spd(dim, window, rng)?;
    let b = relative_pair(&a, &c)?;
    Ok((a, b))
}

/// `B = (1 − t)·m'A + t·MI` for `t ∈ [0, 1]`; gives `m'A ≤ B ≤ MI` whenever
/// `m'A ≤ MI`.
pub fn shifted_pair(a: &SpdMatrix, m_prime: f64, big_m: f64, t: f64) -> Result<SpdMatrix> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "path parameter t = {t} outside [0, 1]"
        )));
    }
    let n = a.dim();
    let raw = a.matrix() * ((1.0 - t) * m_prime) + Matrix::identity(n, n) * (t * big_m);
    SpdMatrix::new(&raw)
}

/// `(A, B)` with `mI ≤ A`, `mI ≤ m'A ≤ B ≤ MI`.
pub fn sample_shifted_pair<R: Rng + ?Sized>(
    dim: usize,
    params: &BoundParams,
    rng: &mut R,
) -> Result<(SpdMatrix, SpdMatrix)> {
    let window = Regime::Shifted.window(params)?;
    let a = sample_spd(dim, window, rng)?;
    // t ∈ (0, 1]
    let t = 1.0 - rng.random::<f64>();
    let b = shifted_pair(&a, params.m_prime, params.big_m, t)?;
    Ok((a, b))
}

/// `(A, B)` with `mI ≤ A ≤ m'I ≤ M'I ≤ B ≤ MI`.
pub fn sample_sandwich_pair<R: Rng + ?Sized>(
    dim: usize,
    params: &BoundParams,
    rng: &mut R,
) -> Result<(SpdMatrix, SpdMatrix)> {
    let window = Regime::Sandwich.window(params)?;
    let a = sample_spd(dim, window, rng)?;
    let b = sample_spd(
        dim,
        SpectralInterval::new(params.big_m_prime, params.big_m)?,
        rng,
    )?;
    Ok((a, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelfInverseVariant {
    /// `mI ≤ A`, `mI ≤ m'A ≤ A⁻¹ ≤ MI`.
    Low,
    /// `mI ≤ m'A⁻¹ ≤ A ≤ MI`.
    High,
}

impl SelfInverseVariant {
    pub fn regime(self) -> Regime {
        match self {
            SelfInverseVariant::Low => Regime::SelfInverseLow,
            SelfInverseVariant::High => Regime::SelfInverseHigh,
        }
    }
}

pub fn sample_self_inverse<R: Rng + ?Sized>(
    dim: usize,
    params: &BoundParams,
    variant: SelfInverseVariant,
    rng: &mut R,
) -> Result<SpdMatrix> {
    let window = variant.regime().window(params)?;
    sample_spd(dim, window, rng)
}

/// Two `n×r` isometries with orthogonal ranges: `XᵀX = YᵀY = I`, `XᵀY = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryPair {
    x: Matrix,
    y: Matrix,
}

impl IsometryPair {
    pub const TOL: f64 = 1e-12;

    pub fn new(x: Matrix, y: Matrix) -> Result<Self> {
        if x.shape() != y.shape() {
            return Err(Error::DimensionMismatch {
                expected: x.ncols(),
                found: y.ncols(),
            });
        }
        let r = x.ncols();
        let id = Matrix::identity(r, r);
        let defect = (x.transpose() * &x - &id)
            .amax()
            .max((y.transpose() * &y - &id).amax());
        if defect > Self::TOL {
            return Err(Error::InvalidArgument(format!(
                "isometry pair is not column-orthonormal (defect {defect:e})"
            )));
        }
        let overlap = (x.transpose() * &y).amax();
        if overlap > Self::TOL {
            return Err(Error::NotOrthogonal { overlap });
        }
        Ok(Self { x, y })
    }

    /// First and last `r` columns of an orthogonal matrix.
    pub fn from_orthogonal(q: &Matrix, r: usize) -> Result<Self> {
        let n = q.nrows();
        if r == 0 || 2 * r > n {
            return Err(Error::InvalidArgument(format!(
                "isometry pair needs 1 ≤ r and 2r ≤ n, got n = {n}, r = {r}"
            )));
        }
        Self::new(
            q.columns(0, r).into_owned(),
            q.columns(n - r, r).into_owned(),
        )
    }

    pub fn x(&self) -> &Matrix {
        &self.x
    }

    pub fn y(&self) -> &Matrix {
        &self.y
    }

    pub fn rank(&self) -> usize {
        self.x.ncols()
    }
}

pub fn sample_orthogonal_isometries<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    rng: &mut R,
) -> Result<IsometryPair> {
    if r == 0 || 2 * r > n {
        return Err(Error::InvalidArgument(format!(
            "isometry pair needs 1 ≤ r and 2r ≤ n, got n = {n}, r = {r}"
        )));
    }
    IsometryPair::from_orthogonal(&haar_orthogonal(n, rng), r)
}

/// Uniform point on the unit sphere.
pub fn sample_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vector {
    loop {
        let v = Vector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-300 {
            return v / n;
        }
    }
}

/// `Uⱼ = DⱼQ` with `Q` Haar orthogonal and diagonal `Dⱼ ≥ 0`, `Σ Dⱼ² = I`.
pub fn sample_congruence_family<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<Matrix> {
    let q = haar_orthogonal(n, rng);
    if k == 1 {
        return vec![q];
    }
    // Each row of weights is a random point of the probability simplex.
    let weights: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|w| w / total).collect()
        })
        .collect();
    (0..k)
        .map(|j| {
            let d = Vector::from_fn(n, |i, _| weights[i][j].sqrt());
            Matrix::from_diagonal(&d) * &q
        })
        .collect()
}

/// PSD matrix with eigenvalues uniform in `[0, scale]` and a Haar frame.
pub fn sample_psd<R: Rng + ?Sized>(dim: usize, scale: f64, rng: &mut R) -> Matrix {
    let q = haar_orthogonal(dim, rng);
    let d = Vector::from_fn(dim, |_, _| scale * rng.random::<f64>());
    crate::spd::symmetrize(&(&q * Matrix::from_diagonal(&d) * q.transpose()))
}

/// One member of the map catalog on `n×n` inputs, chosen by `kind_index`
/// modulo 5 (identity, compression, congruence sum, trace normalize,
/// pinching) with random parameters.
pub fn sample_positive_map<R: Rng + ?Sized>(
    n: usize,
    kind_index: usize,
    rng: &mut R,
) -> Result<PositiveMapSpec> {
    match kind_index % 5 {
        0 => Ok(PositiveMapSpec::identity(n)),
        1 => {
            let r = rng.random_range(1..=n);
            let q = haar_orthogonal(n, rng);
            PositiveMapSpec::compression(q.columns(0, r).into_owned())
        }
        2 => {
            let k = rng.random_range(1..=3);
            PositiveMapSpec::congruence_sum(sample_congruence_family(n, k, rng))
        }
        3 => Ok(PositiveMapSpec::trace_normalize(n)),
        _ => {
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            for idx in order {
                match blocks.last_mut() {
                    Some(last) if rng.random::<bool>() => last.push(idx),
                    _ => blocks.push(vec![idx]),
                }
            }
            PositiveMapSpec::pinching(n, blocks)
        }
    }
}
