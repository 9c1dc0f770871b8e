//! Outer optimisation over the listening fraction and curve assembly.

use serde::Serialize;

use super::lp::diversity_order;
use super::program::{Cut, DiversityProgram};
use super::SolverError;
use crate::dmt_analytic::{AntennaConfig, PiecewiseLinearCurve};

pub const DEFAULT_T_TOL: f64 = 1e-4;
pub const DEFAULT_R_STEP: f64 = 0.25;
/// Corners within this distance of the chord through their neighbours are dropped.
pub const COLLINEAR_TOL: f64 = 1e-7;
/// Sign threshold for `d_S - d_D`.
const GAP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TEvaluation {
    pub t: f64,
    pub d_source: f64,
    pub d_destination: f64,
}

impl TEvaluation {
    pub fn value(&self) -> f64 {
        self.d_source.min(self.d_destination)
    }

    fn gap(&self) -> f64 {
        self.d_source - self.d_destination
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TOptimum {
    pub t_star: f64,
    pub d_star: f64,
    pub d_source: f64,
    pub d_destination: f64,
    /// True when the monotonicity check failed and a uniform grid was used.
    pub used_grid_fallback: bool,
    pub evaluations: usize,
}

struct Evaluator {
    cfg: AntennaConfig,
    r: f64,
    cache: Vec<TEvaluation>,
}

impl Evaluator {
    fn eval(&mut self, t: f64) -> Result<TEvaluation, SolverError> {
        if let Some(e) = self.cache.iter().find(|e| e.t == t) {
            return Ok(*e);
        }
        let d = |cut| -> Result<f64, SolverError> {
            Ok(diversity_order(&DiversityProgram::new(self.cfg, cut, t, self.r)?)?.value)
        };
        let e = TEvaluation {
            t,
            d_source: d(Cut::Source)?,
            d_destination: d(Cut::Destination)?,
        };
        self.cache.push(e);
        Ok(e)
    }

    /// Bisection for the boundary of `pred` on `[0, 1]`, where `pred` holds
    /// on an initial segment.
    fn boundary(&mut self, tol: f64, pred: impl Fn(&TEvaluation) -> bool) -> Result<f64, SolverError> {
        if !pred(&self.eval(0.0)?) {
            return Ok(0.0);
        }
        if pred(&self.eval(1.0)?) {
            return Ok(1.0);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if pred(&self.eval(mid)?) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn monotone(&self) -> bool {
        let mut sorted = self.cache.clone();
        sorted.sort_by(|a, b| a.t.total_cmp(&b.t));
        sorted.windows(2).all(|w| {
            w[1].d_source >= w[0].d_source - GAP_EPS && w[1].d_destination <= w[0].d_destination + GAP_EPS
        })
    }
}

/// Maximises `min(d_S(r, t), d_D(r, t))` over `t` in `[0, 1]`.
///
/// `d_S - d_D` is non-decreasing in `t`, so the maximisers form the interval
/// where it vanishes (or the point where it changes sign). Both ends are
/// located by bisection and the midpoint is returned. If the sampled values
/// turn out not to be monotone the answer comes from a uniform grid of step
/// `tol` instead.
pub fn optimal_t(cfg: AntennaConfig, r: f64, tol: f64) -> Result<TOptimum, SolverError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(SolverError::InvalidTolerance { tol });
    }
    DiversityProgram::new(cfg, Cut::Destination, 0.5, r)?;
    let mut ev = Evaluator {
        cfg,
        r,
        cache: Vec::new(),
    };
    let t_lo = ev.boundary(tol, |e| e.gap() < -GAP_EPS)?;
    let t_hi = ev.boundary(tol, |e| e.gap() <= GAP_EPS)?;
    let mut best = ev.eval(0.5 * (t_lo + t_hi))?;
    for e in &ev.cache {
        if e.value() > best.value() + GAP_EPS {
            best = *e;
        }
    }

    let mut used_grid_fallback = false;
    if t_lo > t_hi + tol || !ev.monotone() {
        used_grid_fallback = true;
        let steps = (1.0 / tol).ceil() as usize;
        for i in 0..=steps {
            let e = ev.eval((i as f64 * tol).min(1.0))?;
            if e.value() > best.value() + GAP_EPS {
                best = e;
            }
        }
    }

    Ok(TOptimum {
        t_star: best.t,
        d_star: best.value(),
        d_source: best.d_source,
        d_destination: best.d_destination,
        used_grid_fallback,
        evaluations: ev.cache.len(),
    })
}

/// Half-duplex DMT upper bound sampled on `{0, r_step, ..., p ∧ n}`.
pub fn half_duplex_dmt(cfg: AntennaConfig, r_step: f64) -> Result<PiecewiseLinearCurve, SolverError> {
    half_duplex_dmt_with_tol(cfg, r_step, DEFAULT_T_TOL)
}

pub fn half_duplex_dmt_with_tol(cfg: AntennaConfig, r_step: f64, t_tol: f64) -> Result<PiecewiseLinearCurve, SolverError> {
    if ![0.5, 0.25, 0.125].contains(&r_step) {
        return Err(SolverError::InvalidStep { step: r_step });
    }
    let points = (cfg.max_multiplexing() as f64 / r_step).round() as usize;
    let mut corners = Vec::with_capacity(points + 1);
    let mut prev = f64::INFINITY;
    for i in 0..=points {
        let r = i as f64 * r_step;
        let d = optimal_t(cfg, r, t_tol)?.d_star;
        // LP round-off can leave values like -1e-15 or a 1e-12 uptick.
        let d = d.max(0.0).min(prev);
        let d = if d < GAP_EPS { 0.0 } else { d };
        corners.push((r, d));
        prev = d;
    }
    let curve = PiecewiseLinearCurve::new(corners)?.collapse_collinear(COLLINEAR_TOL);
    if cfg.p == cfg.n {
        curve.check_convex(COLLINEAR_TOL)?;
    }
    Ok(curve)
}
