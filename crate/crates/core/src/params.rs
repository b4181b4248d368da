//! Scalar bound parameters and the hypothesis regimes they parameterize.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spd::SpectralInterval;

/// Logarithm used by every refinement factor.
pub const LOG_BASE: &str = "natural (base e)";

/// Relative slack allowed when deciding whether a window collapses to a point.
const WINDOW_EPS: f64 = 1e-12;

/// Kantorovich constant `K(h) = (h + 1)² / (4h)`.
pub fn kantorovich_constant(h: f64) -> f64 {
    (h + 1.0) * (h + 1.0) / (4.0 * h)
}

/// Refinement divisor `1 + (ln c)² / 8`.
pub fn refinement_factor(c: f64) -> f64 {
    let l = c.ln();
    1.0 + l * l / 8.0
}

/// Pólya–Szegő constant `(M + m) / (2√(Mm))`, which equals `√K(M/m)`.
pub fn polya_szego_constant(m: f64, big_m: f64) -> f64 {
    (big_m + m) / (2.0 * (big_m * m).sqrt())
}

/// Wielandt constant `((M − m) / (M + m))²`.
pub fn wielandt_constant(m: f64, big_m: f64) -> f64 {
    let r = (big_m - m) / (big_m + m);
    r * r
}

/// Gumus' operator Wielandt constant `(M − m)² / (2√(Mm)(M + m))`.
pub fn gumus_constant(m: f64, big_m: f64) -> f64 {
    (big_m - m) * (big_m - m) / (2.0 * (big_m * m).sqrt() * (big_m + m))
}

/// The scalars `m ≤ m' ≤ M' ≤ M` (or a subset of them) that a theorem's
/// hypotheses are stated in.
///
/// Regimes that do not use `m'` or `M'` fill them with `m` and `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub m: f64,
    pub m_prime: f64,
    #[serde(rename = "M_prime")]
    pub big_m_prime: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
}

impl BoundParams {
    pub fn new(m: f64, m_prime: f64, big_m_prime: f64, big_m: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("m'", m_prime), ("M'", big_m_prime), ("M", big_m)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(Self {
            m,
            m_prime,
            big_m_prime,
            big_m,
        })
    }

    /// `(m, M)` only.
    pub fn plain(m: f64, big_m: f64) -> Result<Self> {
        Self::new(m, m, big_m, big_m)
    }

    /// `(m, m', M)` for the regimes built on a multiplier `m'`.
    pub fn with_multiplier(m: f64, m_prime: f64, big_m: f64) -> Result<Self> {
        Self::new(m, m_prime, big_m, big_m)
    }

    pub fn h(&self) -> f64 {
        self.big_m / self.m
    }

    pub fn k_h(&self) -> f64 {
        kantorovich_constant(self.h())
    }
}

impl fmt::Display for BoundParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m={} m'={} M'={} M={}",
            self.m, self.m_prime, self.big_m_prime, self.big_m
        )
    }
}

/// Hypothesis regimes.
///
/// * `Plain`: `mI ≤ A ≤ MI`.
/// * `Relative`: `mA ≤ B ≤ MA` with `1 < m`.
/// * `Shifted`: `mI ≤ A`, `mI ≤ m'A ≤ B ≤ MI`, `1 < m'`.
/// * `Sandwich`: `mI ≤ A ≤ m'I ≤ M'I ≤ B ≤ MI`.
/// * `SelfInverseLow`: `mI ≤ A`, `mI ≤ m'A ≤ A⁻¹ ≤ MI`, `1 < m'`.
/// * `SelfInverseHigh`: `mI ≤ m'A⁻¹ ≤ A ≤ MI`, `1 < m'`.
///
/// The `mI ≤ A` requirement in the shifted and low regimes is the classical
/// frame `mI ≤ A, B ≤ MI` of the baselines these regimes refine; without it
/// the refined Kantorovich-type bounds fail (see the falsifier tests).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Plain,
    Relative,
    Shifted,
    Sandwich,
    SelfInverseLow,
    SelfInverseHigh,
}

impl Regime {
    pub const ALL: [Regime; 6] = [
        Regime::Plain,
        Regime::Relative,
        Regime::Shifted,
        Regime::Sandwich,
        Regime::SelfInverseLow,
        Regime::SelfInverseHigh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Plain => "plain",
            Regime::Relative => "relative",
            Regime::Shifted => "shifted",
            Regime::Sandwich => "sandwich",
            Regime::SelfInverseLow => "self_inverse_low",
            Regime::SelfInverseHigh => "self_inverse_high",
        }
    }

    /// Checks the scalar preconditions, naming the first violated bound.
    pub fn check_feasible(self, p: &BoundParams) -> Result<()> {
        let fail = |reason: String| Err(Error::infeasible(self, reason));
        match self {
            Regime::Plain => {
                if p.m > p.big_m {
                    return fail(format!("m = {} exceeds M = {}", p.m, p.big_m));
                }
            }
            Regime::Relative => {
                if p.m <= 1.0 {
                    return fail(format!("requires 1 < m, got m = {}", p.m));
                }
                if p.m > p.big_m {
                    return fail(format!("m = {} exceeds M = {}", p.m, p.big_m));
                }
            }
            Regime::Shifted => {
                if p.m_prime <= 1.0 {
                    return fail(format!("requires 1 < m', got m' = {}", p.m_prime));
                }
                if p.m * p.m_prime > p.big_m * (1.0 + WINDOW_EPS) {
                    return fail(format!(
                        "m·m' = {} exceeds M = {} (window [m, M/m'] is empty)",
                        p.m * p.m_prime,
                        p.big_m
                    ));
                }
            }
            Regime::Sandwich => {
                if p.m > p.m_prime {
                    return fail(format!("m = {} exceeds m' = {}", p.m, p.m_prime));
                }
                if p.m_prime > p.big_m_prime {
                    return fail(format!("m' = {} exceeds M' = {}", p.m_prime, p.big_m_prime));
                }
                if p.big_m_prime > p.big_m {
                    return fail(format!("M' = {} exceeds M = {}", p.big_m_prime, p.big_m));
                }
            }
            Regime::SelfInverseLow => {
                if p.m_prime <= 1.0 {
                    return fail(format!("requires 1 < m', got m' = {}", p.m_prime));
                }
                let top = 1.0 / p.m_prime.sqrt();
                if p.m > top * (1.0 + WINDOW_EPS) {
                    return fail(format!("m = {} exceeds 1/√m' = {}", p.m, top));
                }
                if 1.0 / p.big_m > top * (1.0 + WINDOW_EPS) {
                    return fail(format!("1/M = {} exceeds 1/√m' = {}", 1.0 / p.big_m, top));
                }
            }
            Regime::SelfInverseHigh => {
                if p.m_prime <= 1.0 {
                    return fail(format!("requires 1 < m', got m' = {}", p.m_prime));
                }
                let bottom = p.m_prime.sqrt();
                if bottom > (p.m_prime / p.m) * (1.0 + WINDOW_EPS) {
                    return fail(format!(
                        "√m' = {} exceeds m'/m = {}",
                        bottom,
                        p.m_prime / p.m
                    ));
                }
                if bottom > p.big_m * (1.0 + WINDOW_EPS) {
                    return fail(format!("√m' = {} exceeds M = {}", bottom, p.big_m));
                }
            }
        }
        Ok(())
    }

    /// Spectral window of the matrix a sampler draws first: `A` for every
    /// regime except `Relative`, where it is the window of `A^{-1/2}BA^{-1/2}`.
    pub fn window(self, p: &BoundParams) -> Result<SpectralInterval> {
        self.check_feasible(p)?;
        let (lo, hi) = match self {
            Regime::Plain | Regime::Relative => (p.m, p.big_m),
            Regime::Shifted => (p.m, p.big_m / p.m_prime),
            Regime::Sandwich => (p.m, p.m_prime),
            Regime::SelfInverseLow => ((p.m).max(1.0 / p.big_m), 1.0 / p.m_prime.sqrt()),
            Regime::SelfInverseHigh => (p.m_prime.sqrt(), (p.m_prime / p.m).min(p.big_m)),
        };
        SpectralInterval::new(lo, hi.max(lo))
    }

    /// The argument `c` of the refinement factor `1 + (ln c)²/8`, if any.
    pub fn refinement_argument(self, p: &BoundParams) -> Option<f64> {
        match self {
            Regime::Plain => None,
            Regime::Relative => Some(p.m),
            Regime::Sandwich => Some(p.big_m_prime / p.m_prime),
            Regime::Shifted | Regime::SelfInverseLow | Regime::SelfInverseHigh => Some(p.m_prime),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
