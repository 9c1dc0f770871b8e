//! Exact LP reduction of the diversity programs.
//!
//! On `[0, 1]` every exponent sits in the region where `(1 - alpha)^+` is
//! linear, and nothing is lost by restricting to that box: for
//! `alpha_j >= 1` the objective grows with `alpha_j` (its coefficient
//! `c_j >= 1` and all hinges containing it are already zero) while the rate
//! and anti-diagonal constraints cannot get tighter. The same holds for the
//! betas. Lifting each hinge `(1 - alpha_j - beta_k)^+` to an epigraph
//! variable `z_jk` then leaves a plain LP.

use serde::Serialize;

use super::program::{check_feasible, DiversityProgram, ExponentPoint};
use super::simplex::{LinearProgram, Relation};
use super::SolverError;

/// Number of rows of each constraint family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RowCounts {
    pub hinge: usize,
    pub rate: usize,
    pub order: usize,
    pub antidiagonal: usize,
    pub bounds: usize,
}

/// The lifted LP. Variables are laid out as `alpha (J)`, `beta (K)`,
/// `z (J*K, row-major)`.
#[derive(Debug, Clone, Serialize)]
pub struct LpInstance {
    pub program: DiversityProgram,
    pub lp: LinearProgram,
    /// Constant `-m J` dropped from the linear objective.
    pub offset: f64,
    pub alpha_count: usize,
    pub beta_count: usize,
    pub rows: RowCounts,
}

impl LpInstance {
    pub fn box_vars(&self) -> usize {
        self.alpha_count + self.beta_count
    }

    pub fn hinge_vars(&self) -> usize {
        self.alpha_count * self.beta_count
    }
}

/// Active hinge: `1 - alpha_j - beta_k` strictly positive at the optimum.
const ACTIVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverResult {
    pub value: f64,
    pub point: ExponentPoint,
    /// `active_pattern[j][k]`.
    pub active_pattern: Vec<Vec<bool>>,
}

pub fn build_lp(prog: &DiversityProgram) -> LpInstance {
    let (jc, kc) = prog.dims();
    let nv = jc + kc + jc * kc;
    let alpha = |j: usize| j;
    let beta = |k: usize| jc + k;
    let z = |j: usize, k: usize| jc + kc + j * kc + k;
    let m = prog.cfg.m as f64;
    let w = prog.relay_weight();

    let mut lp = LinearProgram::new(nv);
    for (j, c) in prog.alpha_coeffs().into_iter().enumerate() {
        lp.objective[alpha(j)] = c + m;
    }
    for (k, e) in prog.beta_coeffs().into_iter().enumerate() {
        lp.objective[beta(k)] = e;
    }
    for j in 0..jc {
        for k in 0..kc {
            lp.objective[z(j, k)] = 1.0;
        }
    }

    let unit = |entries: &[(usize, f64)]| {
        let mut row = vec![0.0; nv];
        for &(i, v) in entries {
            row[i] += v;
        }
        row
    };

    for j in 0..jc {
        for k in 0..kc {
            lp.push(unit(&[(alpha(j), 1.0), (beta(k), 1.0), (z(j, k), 1.0)]), Relation::Ge, 1.0);
        }
    }

    let mut rate = vec![0.0; nv];
    for j in 0..jc {
        rate[alpha(j)] = 1.0;
    }
    for k in 0..kc {
        rate[beta(k)] = w;
    }
    lp.push(rate, Relation::Ge, jc as f64 + w * kc as f64 - prog.r);

    for j in 1..jc {
        lp.push(unit(&[(alpha(j), 1.0), (alpha(j - 1), -1.0)]), Relation::Ge, 0.0);
    }
    for k in 1..kc {
        lp.push(unit(&[(beta(k), 1.0), (beta(k - 1), -1.0)]), Relation::Ge, 0.0);
    }

    let antidiagonal = prog.antidiagonal_pairs();
    for &(j, k) in &antidiagonal {
        lp.push(unit(&[(alpha(j), 1.0), (beta(k), 1.0)]), Relation::Ge, 1.0);
    }

    for i in 0..(jc + kc) {
        lp.push(unit(&[(i, 1.0)]), Relation::Le, 1.0);
    }

    LpInstance {
        program: *prog,
        lp,
        offset: -m * jc as f64,
        alpha_count: jc,
        beta_count: kc,
        rows: RowCounts {
            hinge: jc * kc,
            rate: 1,
            order: jc.saturating_sub(1) + kc.saturating_sub(1),
            antidiagonal: antidiagonal.len(),
            bounds: jc + kc,
        },
    }
}

pub fn solve_lp(instance: &LpInstance) -> Result<SolverResult, SolverError> {
    let sol = instance.lp.solve()?;
    let (jc, kc) = (instance.alpha_count, instance.beta_count);
    let clean = |x: f64| x.clamp(0.0, 1.0);
    let mut alphas: Vec<f64> = sol.x[..jc].iter().copied().map(clean).collect();
    let mut betas: Vec<f64> = sol.x[jc..jc + kc].iter().copied().map(clean).collect();
    // Remove round-off inversions of the ordering constraints.
    for j in 1..jc {
        alphas[j] = alphas[j].max(alphas[j - 1]);
    }
    for k in 1..kc {
        betas[k] = betas[k].max(betas[k - 1]);
    }
    let active_pattern = alphas
        .iter()
        .map(|a| betas.iter().map(|b| 1.0 - a - b > ACTIVE_TOL).collect())
        .collect();
    Ok(SolverResult {
        value: sol.value + instance.offset,
        point: ExponentPoint { alphas, betas },
        active_pattern,
    })
}

/// Minimum of the program, with its optimal vertex.
pub fn diversity_order(prog: &DiversityProgram) -> Result<SolverResult, SolverError> {
    let result = solve_lp(&build_lp(prog))?;
    let report = check_feasible(prog, &result.point)?;
    if !report.is_feasible() {
        return Err(SolverError::InfeasibleOptimum(report.violations));
    }
    Ok(result)
}
