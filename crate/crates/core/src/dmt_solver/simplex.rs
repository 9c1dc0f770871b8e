//! Dense two-phase simplex with Bland's rule.
//!
//! Problems here have at most a few dozen variables, so the whole tableau is
//! kept and reduced costs are recomputed from scratch at every pivot.

use serde::Serialize;

const PIVOT_TOL: f64 = 1e-11;
const FEASIBILITY_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `minimize c.x` subject to the rows and `x >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<LinearRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex exceeded the pivot limit")]
    PivotLimit,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.rows.push(LinearRow {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    /// `rows x (cols + 1)`, last column is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    num_vars: usize,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();
        let slack_count = lp.rows.iter().filter(|r| r.relation != Relation::Eq).count();
        let cols = n + slack_count + lp.rows.len();
        let first_artificial = n + slack_count;

        let mut a = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let mut next_slack = n;
        for (i, row) in lp.rows.iter().enumerate() {
            let flip = row.rhs < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            let relation = match (row.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (rel, _) => rel,
            };
            let mut t = vec![0.0; cols + 1];
            for (dst, &c) in t.iter_mut().zip(&row.coeffs) {
                *dst = sign * c;
            }
            t[cols] = sign * row.rhs;
            match relation {
                Relation::Le => {
                    t[next_slack] = 1.0;
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    t[next_slack] = -1.0;
                    next_slack += 1;
                    t[first_artificial + i] = 1.0;
                    basis.push(first_artificial + i);
                }
                Relation::Eq => {
                    t[first_artificial + i] = 1.0;
                    basis.push(first_artificial + i);
                }
            }
            a.push(t);
        }
        Self {
            a,
            basis,
            cols,
            num_vars: n,
            first_artificial,
        }
    }

    fn solve(mut self, objective: &[f64]) -> Result<LpSolution, LpError> {
        if self.basis.iter().any(|&b| b >= self.first_artificial) {
            let mut phase1 = vec![0.0; self.cols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = 1.0;
            }
            self.optimize(&phase1, self.cols)?;
            let infeasibility: f64 = self
                .basis
                .iter()
                .zip(&self.a)
                .filter(|(&b, _)| b >= self.first_artificial)
                .map(|(_, row)| row[self.cols])
                .sum();
            if infeasibility > FEASIBILITY_TOL {
                return Err(LpError::Infeasible);
            }
            self.evict_artificials();
        }

        let mut phase2 = vec![0.0; self.cols];
        phase2[..self.num_vars].copy_from_slice(objective);
        self.optimize(&phase2, self.first_artificial)?;

        let mut x = vec![0.0; self.num_vars];
        for (&b, row) in self.basis.iter().zip(&self.a) {
            if b < self.num_vars {
                x[b] = row[self.cols];
            }
        }
        let value = x.iter().zip(objective).map(|(xi, ci)| xi * ci).sum();
        Ok(LpSolution { x, value })
    }

    /// Pivots artificials (at zero level) out of the basis; rows where that
    /// is impossible are redundant and dropped.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.a.len() {
            if self.basis[i] >= self.first_artificial {
                let entering = (0..self.first_artificial).find(|&j| self.a[i][j].abs() > PIVOT_TOL);
                match entering {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.a.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    /// Primal simplex on columns `< col_limit`, Bland's rule for both the
    /// entering and the leaving variable.
    fn optimize(&mut self, cost: &[f64], col_limit: usize) -> Result<(), LpError> {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..col_limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.a)
                        .map(|(&b, row)| cost[b] * row[j])
                        .sum::<f64>();
                reduced < -PIVOT_TOL
            });
            let Some(j) = entering else {
                return Ok(());
            };

            let mut leaving: Option<(usize, f64)> = None;
            for (i, row) in self.a.iter().enumerate() {
                if row[j] > PIVOT_TOL {
                    let ratio = row[self.cols] / row[j];
                    leaving = match leaving {
                        None => Some((i, ratio)),
                        Some((best, best_ratio)) => {
                            if ratio < best_ratio - PIVOT_TOL
                                || (ratio <= best_ratio + PIVOT_TOL && self.basis[i] < self.basis[best])
                            {
                                Some((i, ratio))
                            } else {
                                Some((best, best_ratio))
                            }
                        }
                    };
                }
            }
            let Some((i, _)) = leaving else {
                return Err(LpError::Unbounded);
            };
            self.pivot(i, j);
        }
        Err(LpError::PivotLimit)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col];
        for v in self.a[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.a[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != 0.0 {
                for (v, &pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[col] = 0.0;
            }
        }
        self.basis[row] = col;
    }
}
