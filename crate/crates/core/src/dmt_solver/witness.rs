//! Explicit optimal points for the symmetric (`p = n`, `t = 1/2`) program.

use serde::Serialize;

use super::program::{check_feasible, objective, Cut, DiversityProgram, ExponentPoint, FeasibilityReport};
use super::SolverError;
use crate::dmt_analytic::{AntennaConfig, Regime};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCheck {
    pub program: DiversityProgram,
    pub point: ExponentPoint,
    pub value: f64,
    pub report: FeasibilityReport,
}

impl WitnessCheck {
    pub fn feasible(&self) -> bool {
        self.report.is_feasible()
    }
}

/// Step vector: the first `zeros` entries 0, the rest 1.
fn step(len: usize, zeros: usize) -> Vec<f64> {
    (0..len).map(|i| if i < zeros { 0.0 } else { 1.0 }).collect()
}

/// The corner point of `regime` with index `l`, and the program it solves
/// (Destination cut, `t = 1/2`).
pub fn witness_point(n: usize, m: usize, regime: Regime, l: usize) -> Result<(DiversityProgram, ExponentPoint), SolverError> {
    let cfg = AntennaConfig::symmetric(n, m)?;
    let max = regime.max_index(n, m);
    if l > max {
        return Err(SolverError::WitnessIndex { regime, l, max });
    }
    let l0 = crate::dmt_analytic::symmetric_l0(n, m);
    let k = n.min(m);
    let (alpha_zeros, beta_zeros) = match regime {
        Regime::A => (0, l),
        Regime::B => (l, l0),
        Regime::C => (n - l, l),
    };
    let prog = DiversityProgram::new(cfg, Cut::Destination, 0.5, regime.multiplexing(n, m, l))?;
    Ok((prog, ExponentPoint::new(step(n, alpha_zeros), step(k, beta_zeros))))
}

pub fn witness_check(n: usize, m: usize, regime: Regime, l: usize) -> Result<WitnessCheck, SolverError> {
    let (program, point) = witness_point(n, m, regime, l)?;
    let value = objective(&program, &point)?;
    let report = check_feasible(&program, &point)?;
    Ok(WitnessCheck {
        program,
        point,
        value,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_witnesses() {
        let w = witness_check(3, 3, Regime::A, 1).unwrap();
        assert_eq!(w.value, 13.0);
        assert!(w.feasible());
        let w = witness_check(3, 3, Regime::B, 2).unwrap();
        assert_eq!(w.value, 1.0);
        assert!(w.feasible());
        let w = witness_check(3, 7, Regime::C, 2).unwrap();
        assert_eq!(w.value, 4.0);
        assert!(w.feasible());
    }

    #[test]
    fn case_b_point() {
        let (_, pt) = witness_point(3, 3, Regime::B, 1).unwrap();
        assert_eq!(pt.alphas, vec![0.0, 1.0, 1.0]);
        assert_eq!(pt.betas, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn every_witness_matches_its_formula() {
        for n in 1..=6 {
            for m in 1..=20 {
                for regime in Regime::ALL {
                    for l in 0..=regime.max_index(n, m) {
                        let w = witness_check(n, m, regime, l).unwrap();
                        assert!(w.feasible(), "({n},{m},{regime},{l}): {:?}", w.report);
                        assert_eq!(w.value, regime.diversity(n, m, l), "({n},{m},{regime},{l})");
                    }
                }
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(
            witness_check(3, 3, Regime::C, 2),
            Err(SolverError::WitnessIndex { max: 1, .. })
        ));
    }
}
