//! Exhaustive lattice search, used as an independent check on the LP.

use super::program::DiversityProgram;
use super::SolverError;

/// Largest `J + K` the oracle accepts.
pub const ORACLE_MAX_VARS: usize = 6;

/// Minimum of the raw objective over feasible points whose coordinates lie
/// in `{0, 1/res, ..., 1}`.
///
/// Rounding any feasible point up to the lattice keeps it feasible, so the
/// result upper-bounds the true minimum by at most
/// `coefficient_l1() / resolution`.
pub fn grid_oracle(prog: &DiversityProgram, resolution: u32) -> Result<f64, SolverError> {
    let (jc, kc) = prog.dims();
    if jc + kc > ORACLE_MAX_VARS {
        return Err(SolverError::OracleTooLarge { vars: jc + kc });
    }
    if resolution == 0 {
        return Err(SolverError::OracleResolution);
    }
    let step = 1.0 / resolution as f64;
    let alpha_seqs = nondecreasing_sequences(jc, resolution);
    let beta_seqs = nondecreasing_sequences(kc, resolution);
    let c = prog.alpha_coeffs();
    let e = prog.beta_coeffs();
    let m = prog.cfg.m as f64;
    let w = prog.relay_weight();
    let anti = prog.antidiagonal_pairs();
    let to_val = |i: u32| i as f64 * step;

    // Per-sequence linear and rate parts.
    let alpha_parts: Vec<(Vec<f64>, f64, f64)> = alpha_seqs
        .iter()
        .map(|s| {
            let vals: Vec<f64> = s.iter().map(|&i| to_val(i)).collect();
            let lin = vals.iter().zip(&c).map(|(a, c)| c * a - m * (1.0 - a)).sum();
            let rate = vals.iter().map(|a| 1.0 - a).sum();
            (vals, lin, rate)
        })
        .collect();
    let beta_parts: Vec<(Vec<f64>, f64, f64)> = beta_seqs
        .iter()
        .map(|s| {
            let vals: Vec<f64> = s.iter().map(|&i| to_val(i)).collect();
            let lin = vals.iter().zip(&e).map(|(b, e)| e * b).sum();
            let rate = vals.iter().map(|b| 1.0 - b).sum();
            (vals, lin, rate)
        })
        .collect();

    let mut best = f64::INFINITY;
    for (a, a_lin, a_rate) in &alpha_parts {
        for (b, b_lin, b_rate) in &beta_parts {
            if a_rate + w * b_rate > prog.r + 1e-12 {
                continue;
            }
            if anti.iter().any(|&(j, k)| a[j] + b[k] < 1.0 - 1e-12) {
                continue;
            }
            let hinge: f64 = a
                .iter()
                .flat_map(|x| b.iter().map(move |y| (1.0 - x - y).max(0.0)))
                .sum();
            let v = a_lin + b_lin + hinge;
            if v < best {
                best = v;
            }
        }
    }
    Ok(best)
}

/// All non-decreasing length-`len` sequences over `0..=res`.
fn nondecreasing_sequences(len: usize, res: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|seq: Vec<u32>| {
                let start = seq.last().copied().unwrap_or(0);
                (start..=res).map(move |i| {
                    let mut s = seq.clone();
                    s.push(i);
                    s
                })
            })
            .collect();
    }
    out
}
