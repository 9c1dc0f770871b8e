//! Closed-form DMT curves.

mod curve;
mod formulas;

pub use curve::{curve_min, PiecewiseLinearCurve, CORNER_MERGE_TOL};
pub use formulas::{
    full_duplex_dmt, ptp_dmt, symmetric_corners, symmetric_half_duplex_dmt, symmetric_l0, Regime,
    RegimeCorner,
};

use serde::{Deserialize, Serialize};

/// Antenna counts at the source (`p`), relay (`m`) and destination (`n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntennaConfig {
    pub p: usize,
    pub m: usize,
    pub n: usize,
}

impl AntennaConfig {
    pub fn new(p: usize, m: usize, n: usize) -> Result<Self, CurveError> {
        if p == 0 || m == 0 || n == 0 {
            return Err(CurveError::InvalidAntennas { p, m, n });
        }
        Ok(Self { p, m, n })
    }

    /// `p = m' = n` shorthand for the symmetric case.
    pub fn symmetric(n: usize, m: usize) -> Result<Self, CurveError> {
        Self::new(n, m, n)
    }

    /// Largest multiplexing gain, `p ∧ n`.
    pub fn max_multiplexing(&self) -> usize {
        self.p.min(self.n)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("antenna counts must be positive, got p={p}, m={m}, n={n}")]
    InvalidAntennas { p: usize, m: usize, n: usize },
    #[error("a curve needs at least one corner")]
    Empty,
    #[error("corner {index} is not finite or has a negative coordinate")]
    InvalidCorner { index: usize },
    #[error("multiplexing gains must be strictly increasing (corner {index})")]
    NotIncreasing { index: usize },
    #[error("diversity gains must be non-increasing (corner {index})")]
    Increasing { index: usize },
    #[error("last corner must have zero diversity, found {d}")]
    NonZeroEnd { d: f64 },
    #[error("curve is not convex at corner {index}")]
    NotConvex { index: usize },
    #[error("r = {r} outside curve domain [{lo}, {hi}]")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },
    #[error("curve domains do not overlap")]
    DisjointDomains,
}
