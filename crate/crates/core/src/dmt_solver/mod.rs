//! The diversity-order minimisation programs for the two cuts, solved as
//! linear programs, plus the outer maximisation over the listening fraction.

mod lp;
mod oracle;
mod outer;
mod program;
mod simplex;
mod witness;

pub use lp::{build_lp, diversity_order, solve_lp, LpInstance, RowCounts, SolverResult};
pub use oracle::{grid_oracle, ORACLE_MAX_VARS};
pub use outer::{
    half_duplex_dmt, half_duplex_dmt_with_tol, optimal_t, TEvaluation, TOptimum, COLLINEAR_TOL, DEFAULT_R_STEP,
    DEFAULT_T_TOL,
};
pub use program::{
    check_feasible, objective, Constraint, Cut, DiversityProgram, ExponentPoint, FeasibilityReport, Violation,
    FEASIBILITY_TOL,
};
pub use simplex::{LinearProgram, LinearRow, LpError, LpSolution, Relation};
pub use witness::{witness_check, witness_point, WitnessCheck};

use crate::dmt_analytic::{CurveError, Regime};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("listening fraction t = {t} outside [0, 1]")]
    ListeningFraction { t: f64 },
    #[error("multiplexing gain r = {r} outside [0, {max}]")]
    Multiplexing { r: f64, max: f64 },
    #[error("point has dimensions {found:?}, program expects {expected:?}")]
    Dimension {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("grid oracle refuses {vars} variables")]
    OracleTooLarge { vars: usize },
    #[error("grid resolution must be positive")]
    OracleResolution,
    #[error("index l = {l} outside regime {regime} range 0..={max}")]
    WitnessIndex { regime: Regime, l: usize, max: usize },
    #[error("r step {step} must be 1/2, 1/4 or 1/8")]
    InvalidStep { step: f64 },
    #[error("t tolerance {tol} must lie in (0, 1)")]
    InvalidTolerance { tol: f64 },
    #[error("LP optimum violates constraints: {0:?}")]
    InfeasibleOptimum(Vec<Violation>),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
