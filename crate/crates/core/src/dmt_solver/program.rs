use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::dmt_analytic::AntennaConfig;

/// Slack allowed in every feasibility test.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Which cut-set bound a program belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cut {
    Source,
    Destination,
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Cut::Source => "source",
            Cut::Destination => "destination",
        })
    }
}

/// One diversity-order minimisation: antenna counts, cut, listening
/// fraction `t` and target multiplexing gain `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiversityProgram {
    pub cfg: AntennaConfig,
    pub cut: Cut,
    pub t: f64,
    pub r: f64,
}

impl DiversityProgram {
    pub fn new(cfg: AntennaConfig, cut: Cut, t: f64, r: f64) -> Result<Self, SolverError> {
        if !(0.0..=1.0).contains(&t) {
            return Err(SolverError::ListeningFraction { t });
        }
        let max = cfg.max_multiplexing() as f64;
        if !(0.0..=max).contains(&r) {
            return Err(SolverError::Multiplexing { r, max });
        }
        Ok(Self { cfg, cut, t, r })
    }

    /// `(J, K)`: number of alpha and beta exponents.
    pub fn dims(&self) -> (usize, usize) {
        let AntennaConfig { p, m, n } = self.cfg;
        match self.cut {
            Cut::Destination => (n.min(p), n.min(m)),
            Cut::Source => (p.min(n), p.min(m)),
        }
    }

    /// Antenna count of the terminal the cut is drawn around; the
    /// anti-diagonal is `j + k = pivot + 1` (1-based).
    fn pivot(&self) -> usize {
        match self.cut {
            Cut::Destination => self.cfg.n,
            Cut::Source => self.cfg.p,
        }
    }

    /// `c_j = n + p - 2j + 1` (1-based `j`).
    pub fn alpha_coeffs(&self) -> Vec<f64> {
        let (j_count, _) = self.dims();
        let AntennaConfig { p, n, .. } = self.cfg;
        (1..=j_count).map(|j| (n + p + 1 - 2 * j) as f64).collect()
    }

    /// `e_k = q + m - 2k + 1` with `q = n` (destination) or `p` (source).
    pub fn beta_coeffs(&self) -> Vec<f64> {
        let (_, k_count) = self.dims();
        let q = self.pivot();
        (1..=k_count).map(|k| (q + self.cfg.m + 1 - 2 * k) as f64).collect()
    }

    /// Weight of the relay-link rate term: `1 - t` for the destination cut,
    /// `t` for the source cut.
    pub fn relay_weight(&self) -> f64 {
        match self.cut {
            Cut::Destination => 1.0 - self.t,
            Cut::Source => self.t,
        }
    }

    /// 0-based `(j, k)` index pairs on the anti-diagonal.
    pub fn antidiagonal_pairs(&self) -> Vec<(usize, usize)> {
        let (j_count, k_count) = self.dims();
        let target = self.pivot() - 1;
        (0..j_count)
            .filter_map(|j| {
                let k = target.checked_sub(j)?;
                (k < k_count).then_some((j, k))
            })
            .collect()
    }

    /// l1 norm of every coefficient in the objective, hinge terms included.
    /// Moving each exponent by at most `h` changes the objective by at most
    /// `h` times this.
    pub fn coefficient_l1(&self) -> f64 {
        let (j_count, k_count) = self.dims();
        let c: f64 = self.alpha_coeffs().iter().map(|x| x.abs()).sum();
        let e: f64 = self.beta_coeffs().iter().map(|x| x.abs()).sum();
        c + e + (self.cfg.m * j_count) as f64 + (j_count * k_count) as f64
    }

    pub(crate) fn check_dims(&self, pt: &ExponentPoint) -> Result<(), SolverError> {
        let (j_count, k_count) = self.dims();
        if pt.alphas.len() != j_count || pt.betas.len() != k_count {
            return Err(SolverError::Dimension {
                expected: (j_count, k_count),
                found: (pt.alphas.len(), pt.betas.len()),
            });
        }
        Ok(())
    }
}

/// Exponents `alpha_j`, `beta_k` (eigenvalues `P^{-alpha_j}`, `P^{-beta_k}`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentPoint {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl ExponentPoint {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Self {
        Self { alphas, betas }
    }
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// Raw objective, hinges and all. Feasibility is not checked.
pub fn objective(prog: &DiversityProgram, pt: &ExponentPoint) -> Result<f64, SolverError> {
    prog.check_dims(pt)?;
    let m = prog.cfg.m as f64;
    let linear_alpha: f64 = prog
        .alpha_coeffs()
        .iter()
        .zip(&pt.alphas)
        .map(|(c, a)| c * a - m * pos(1.0 - a))
        .sum();
    let linear_beta: f64 = prog.beta_coeffs().iter().zip(&pt.betas).map(|(e, b)| e * b).sum();
    let hinge: f64 = pt
        .alphas
        .iter()
        .flat_map(|a| pt.betas.iter().map(move |b| pos(1.0 - a - b)))
        .sum();
    Ok(linear_alpha + linear_beta + hinge)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Constraint {
    AlphaNonNegative { j: usize },
    BetaNonNegative { k: usize },
    AlphaOrder { j: usize },
    BetaOrder { k: usize },
    Rate,
    AntiDiagonal { j: usize, k: usize },
}

/// One violated constraint and its (negative) slack. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tests every constraint of the program at `pt`, within [`FEASIBILITY_TOL`].
pub fn check_feasible(prog: &DiversityProgram, pt: &ExponentPoint) -> Result<FeasibilityReport, SolverError> {
    prog.check_dims(pt)?;
    let mut violations = Vec::new();
    let mut require = |constraint, slack: f64| {
        if slack < -FEASIBILITY_TOL {
            violations.push(Violation { constraint, slack });
        }
    };

    for (j, &a) in pt.alphas.iter().enumerate() {
        require(Constraint::AlphaNonNegative { j }, a);
    }
    for (k, &b) in pt.betas.iter().enumerate() {
        require(Constraint::BetaNonNegative { k }, b);
    }
    for j in 1..pt.alphas.len() {
        require(Constraint::AlphaOrder { j }, pt.alphas[j] - pt.alphas[j - 1]);
    }
    for k in 1..pt.betas.len() {
        require(Constraint::BetaOrder { k }, pt.betas[k] - pt.betas[k - 1]);
    }
    let rate: f64 = pt.alphas.iter().map(|a| pos(1.0 - a)).sum::<f64>()
        + prog.relay_weight() * pt.betas.iter().map(|b| pos(1.0 - b)).sum::<f64>();
    require(Constraint::Rate, prog.r - rate);
    for (j, k) in prog.antidiagonal_pairs() {
        require(Constraint::AntiDiagonal { j, k }, pt.alphas[j] + pt.betas[k] - 1.0);
    }
    Ok(FeasibilityReport { violations })
}
