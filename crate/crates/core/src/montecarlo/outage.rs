use std::thread;

use serde::Serialize;

use super::channel::{mutual_info_unchecked, ChannelSample};
use super::stats::{fit_line, wilson_interval};
use super::MonteCarloError;
use crate::dmt_analytic::AntennaConfig;
use crate::dmt_solver::Cut;
use crate::rand_matrix::{sample_complex_gaussian, RngStream};

/// Trials per random stream. Block `b`, counted across all SNR points in
/// order, always draws from stream `b`, whatever the worker count.
pub const BLOCK_TRIALS: usize = 10_000;
/// Points with fewer outage events are left out of slope fits.
pub const MIN_EVENTS: u64 = 50;
pub const DEFAULT_SNR_DB: [f64; 7] = [10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0];

pub fn snr_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageSpec {
    pub cfg: AntennaConfig,
    pub cut: Cut,
    pub t: f64,
    pub r: f64,
    pub snr_db: Vec<f64>,
    pub trials_per_point: usize,
    pub seed: u64,
    pub workers: usize,
}

impl OutageSpec {
    pub fn validate(&self) -> Result<(), MonteCarloError> {
        AntennaConfig::new(self.cfg.p, self.cfg.m, self.cfg.n)?;
        if !(0.0..=1.0).contains(&self.t) {
            return Err(MonteCarloError::ListeningFraction { t: self.t });
        }
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(MonteCarloError::Rate { r: self.r });
        }
        if self.snr_db.len() < 3
            || self.snr_db.iter().any(|x| !x.is_finite())
            || self.snr_db.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(MonteCarloError::SnrList);
        }
        if self.trials_per_point == 0 {
            return Err(MonteCarloError::Zero { what: "trials_per_point" });
        }
        if self.workers == 0 {
            return Err(MonteCarloError::Zero { what: "workers" });
        }
        Ok(())
    }

    fn blocks_per_point(&self) -> usize {
        self.trials_per_point.div_ceil(BLOCK_TRIALS)
    }
}

/// Outage frequencies per SNR point. `x` and `y` are `log10 P` and
/// `log10` of the estimate; `ci_low`/`ci_high` are the Wilson bounds on
/// the same scale. Points with no events have `y = -inf`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateSeries {
    pub snr_db: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
    pub count: Vec<u64>,
    pub trials: Vec<u64>,
}

/// One row of a series on the linear scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatePoint {
    pub snr_db: f64,
    pub p_linear: f64,
    pub outage: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub events: u64,
    pub trials: u64,
}

impl EstimateSeries {
    pub fn from_counts(snr_db: &[f64], count: Vec<u64>, trials: Vec<u64>) -> Self {
        let mut s = Self {
            snr_db: snr_db.to_vec(),
            x: snr_db.iter().map(|db| db / 10.0).collect(),
            y: Vec::new(),
            ci_low: Vec::new(),
            ci_high: Vec::new(),
            count,
            trials,
        };
        for (&k, &n) in s.count.iter().zip(&s.trials) {
            let (lo, hi) = wilson_interval(k, n);
            s.y.push((k as f64 / n as f64).log10());
            s.ci_low.push(lo.log10());
            s.ci_high.push(hi.log10());
        }
        s
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn point(&self, i: usize) -> EstimatePoint {
        let (k, n) = (self.count[i], self.trials[i]);
        let (ci_low, ci_high) = wilson_interval(k, n);
        EstimatePoint {
            snr_db: self.snr_db[i],
            p_linear: snr_linear(self.snr_db[i]),
            outage: k as f64 / n as f64,
            ci_low,
            ci_high,
            events: k,
            trials: n,
        }
    }

    pub fn points(&self) -> Vec<EstimatePoint> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Indices with at least [`MIN_EVENTS`] events.
    pub fn usable(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.count[i] >= MIN_EVENTS).collect()
    }
}

/// Empirical `P(I < r log2 P)` at each SNR point.
pub fn outage_probability(spec: &OutageSpec) -> Result<EstimateSeries, MonteCarloError> {
    spec.validate()?;
    let bpp = spec.blocks_per_point();
    let total_blocks = bpp * spec.snr_db.len();
    let workers = spec.workers.min(total_blocks);

    let run_block = |b: usize| -> u64 {
        let point = b / bpp;
        let within = b % bpp;
        let n_trials = BLOCK_TRIALS.min(spec.trials_per_point - within * BLOCK_TRIALS);
        outage_block(spec, snr_linear(spec.snr_db[point]), n_trials, RngStream::new(spec.seed, b as u64))
    };

    let mut block_counts = vec![0u64; total_blocks];
    if workers == 1 {
        for (b, c) in block_counts.iter_mut().enumerate() {
            *c = run_block(b);
        }
    } else {
        let results: Vec<Vec<(usize, u64)>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let run_block = &run_block;
                    scope.spawn(move || {
                        (w..total_blocks)
                            .step_by(workers)
                            .map(|b| (b, run_block(b)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });
        for (b, c) in results.into_iter().flatten() {
            block_counts[b] = c;
        }
    }

    let count: Vec<u64> = block_counts.chunks(bpp).map(|c| c.iter().sum()).collect();
    let trials = vec![spec.trials_per_point as u64; spec.snr_db.len()];
    Ok(EstimateSeries::from_counts(&spec.snr_db, count, trials))
}

fn outage_block(spec: &OutageSpec, snr: f64, n_trials: usize, stream: RngStream) -> u64 {
    let mut rng = stream.rng();
    let cfg = spec.cfg;
    let h_shape = match spec.cut {
        Cut::Destination => (cfg.n, cfg.m),
        Cut::Source => (cfg.m, cfg.p),
    };
    let threshold = spec.r * snr.log2();
    let mut events = 0;
    for _ in 0..n_trials {
        let sample = ChannelSample {
            g: sample_complex_gaussian(cfg.n, cfg.p, &mut rng),
            h: sample_complex_gaussian(h_shape.0, h_shape.1, &mut rng),
            snr,
        };
        if mutual_info_unchecked(spec.cut, spec.t, &sample) < threshold {
            events += 1;
        }
    }
    events
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityFit {
    /// Minus the fitted slope of `log10 P_out` against `log10 P`.
    pub diversity: f64,
    pub stderr: f64,
    pub intercept: f64,
    /// Indices of the points used in the fit.
    pub used: Vec<usize>,
}

/// Least-squares diversity estimate over the points with enough events.
pub fn diversity_slope(series: &EstimateSeries) -> Result<DiversityFit, MonteCarloError> {
    let used = series.usable();
    if used.len() < 3 {
        return Err(MonteCarloError::TooFewPoints {
            usable: used.len(),
            required: 3,
        });
    }
    let x: Vec<f64> = used.iter().map(|&i| series.x[i]).collect();
    let y: Vec<f64> = used.iter().map(|&i| series.y[i]).collect();
    let fit = fit_line(&x, &y).ok_or(MonteCarloError::TooFewPoints {
        usable: used.len(),
        required: 3,
    })?;
    Ok(DiversityFit {
        diversity: -fit.slope,
        stderr: fit.slope_stderr,
        intercept: fit.intercept,
        used,
    })
}
