//! Finite-SNR Monte Carlo checks: outage probabilities and their slopes,
//! spherical integrals, and a few matrix inequalities used in the analysis.

mod channel;
mod identities;
mod outage;
mod spherical;
mod stats;

pub use channel::{mutual_info_sample, ChannelSample};
pub use identities::{
    combined_eigen_gap, combined_eigen_sanity, covariance_bound_check, covariance_gap, lemma1_check, CovarianceCheck,
    IdentityCheck, Lemma1Report, Lemma1Status, LEMMA1_LAMBDA0,
};
pub use outage::{
    diversity_slope, outage_probability, snr_linear, DiversityFit, EstimatePoint, EstimateSeries, OutageSpec,
    BLOCK_TRIALS, DEFAULT_SNR_DB, MIN_EVENTS,
};
pub use spherical::{
    antidiagonal_min_check, spherical_exponent, spherical_integral_estimate, spherical_series, superpoly_decay_check,
    AntidiagonalCheck, SphericalEstimate, SphericalExponent, SphericalFit, SphericalSpec, SuperpolyCheck,
    SuperpolyPoint, MIN_SPHERICAL_TRIALS,
};
pub use stats::{fit_line, wilson_interval, LineFit, WILSON_Z};

use crate::dmt_analytic::CurveError;
use crate::rand_matrix::MatrixError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MonteCarloError {
    #[error(transparent)]
    Antenna(#[from] CurveError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("listening fraction t = {t} outside [0, 1]")]
    ListeningFraction { t: f64 },
    #[error("target multiplexing gain r = {r} must be finite and non-negative")]
    Rate { r: f64 },
    #[error("SNR must be positive and finite, got {p}")]
    Snr { p: f64 },
    #[error("SNR list needs at least 3 finite, strictly increasing values")]
    SnrList,
    #[error("{what} must be positive")]
    Zero { what: &'static str },
    #[error("at least {min} trials required, got {trials}")]
    TooFewTrials { min: usize, trials: usize },
    #[error("{name} has shape {found:?}, expected {expected:?}")]
    Shape {
        name: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("{name} must have length {expected}, found {found}")]
    Length {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{name} must be finite, non-negative and ordered")]
    Ordering { name: &'static str },
    #[error("spherical exponent is finite; the super-polynomial check does not apply")]
    NotSuperPolynomial,
    #[error("{usable} usable points, need at least {required}")]
    TooFewPoints { usable: usize, required: usize },
    #[error("covariance trace {trace} exceeds the power budget {p}")]
    Trace { trace: f64, p: f64 },
}
