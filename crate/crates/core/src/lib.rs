//! Diversity-multiplexing tradeoff (DMT) of the MIMO static half-duplex
//! relay channel.
//!
//! * [`dmt_analytic`]: point-to-point, full-duplex and closed-form symmetric
//!   half-duplex curves.
//! * [`dmt_solver`]: the diversity-order programs, solved exactly as LPs, and
//!   the outer optimisation over the listening fraction.
//! * [`montecarlo`]: finite-SNR outage simulation and spherical-integral
//!   checks.
//! * [`rand_matrix`]: the complex random-matrix primitives underneath.

pub mod dmt_analytic;
pub mod dmt_solver;
pub mod montecarlo;
pub mod rand_matrix;

pub use dmt_analytic::{AntennaConfig, PiecewiseLinearCurve};
pub use dmt_solver::{Cut, DiversityProgram, ExponentPoint, SolverResult};

pub use rand_matrix::{ComplexMatrix, RngStream};
