//! Numerical verification of Kantorovich-type operator inequalities and
//! their refinements by the factor `1 + (ln c)²/8`.
//!
//! Instances are drawn inside each theorem's hypothesis regime, checked in
//! the Loewner order with a relative tolerance, and aggregated into seeded,
//! reproducible campaign reports.

pub mod campaign;
pub mod demo;
pub mod error;
pub mod inequalities;
pub mod instance;
pub mod maps;
pub mod means;
pub mod params;
pub mod report;
pub mod sampling;
pub mod search;
pub mod spd;

pub use error::{Error, Result};
pub use inequalities::{IneqRecord, TheoremId};
pub use params::{BoundParams, Regime};
pub use spd::{Matrix, SpdMatrix, Vector};
