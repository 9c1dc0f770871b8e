use serde::Serialize;

use super::stats::fit_line;
use super::MonteCarloError;
use crate::rand_matrix::{sample_haar_unitary, ComplexMatrix, RngStream};

pub const MIN_SPHERICAL_TRIALS: usize = 1_000;

/// Exponents of `I(P) = E_U exp(-Σ_jk P^(1 - α_j - β_k) |u_jk|²)`, with `U`
/// Haar on `U(n)`, `j <= n ∧ p`, `k <= n ∧ m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalSpec {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

fn ordered(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite() && *x >= 0.0) && v.windows(2).all(|w| w[1] >= w[0])
}

impl SphericalSpec {
    pub fn new(n: usize, p: usize, m: usize, alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self, MonteCarloError> {
        if n == 0 || p == 0 || m == 0 {
            return Err(MonteCarloError::Zero { what: "antenna count" });
        }
        let spec = Self { n, p, m, alphas, betas };
        let (jc, kc) = spec.dims();
        for (name, v, expected) in [("alphas", &spec.alphas, jc), ("betas", &spec.betas, kc)] {
            if v.len() != expected {
                return Err(MonteCarloError::Length {
                    name,
                    expected,
                    found: v.len(),
                });
            }
            if !ordered(v) {
                return Err(MonteCarloError::Ordering { name });
            }
        }
        Ok(spec)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n.min(self.p), self.n.min(self.m))
    }

    /// 0-based `(j, k)` with `j + k = n - 1`.
    fn antidiagonal(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (jc, kc) = self.dims();
        (0..jc).filter_map(move |j| {
            let k = (self.n - 1).checked_sub(j)?;
            (k < kc).then_some((j, k))
        })
    }

    /// `log` of the integrand.
    fn log_integrand(&self, u: &ComplexMatrix, weights: &[Vec<f64>]) -> f64 {
        let mut s = 0.0;
        for (j, row) in weights.iter().enumerate() {
            for (k, w) in row.iter().enumerate() {
                s += w * u[(j, k)].norm_sqr();
            }
        }
        -s
    }

    fn weights(&self, snr: f64) -> Vec<Vec<f64>> {
        self.alphas
            .iter()
            .map(|a| self.betas.iter().map(|b| snr.powf(1.0 - a - b)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SphericalExponent {
    Finite(f64),
    /// Decay faster than any power of `P`.
    MinusInfinity,
}

/// Limit of `log I(P) / log P`.
pub fn spherical_exponent(spec: &SphericalSpec) -> SphericalExponent {
    if spec.antidiagonal().any(|(j, k)| spec.alphas[j] + spec.betas[k] < 1.0) {
        return SphericalExponent::MinusInfinity;
    }
    let s: f64 = spec
        .alphas
        .iter()
        .flat_map(|a| spec.betas.iter().map(move |b| (1.0 - a - b).max(0.0)))
        .sum();
    SphericalExponent::Finite(-s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphericalEstimate {
    pub snr: f64,
    pub mean: f64,
    pub stderr: f64,
    pub min_integrand: f64,
    pub max_integrand: f64,
    /// Smallest `log` of the integrand. Finite even where the integrand
    /// itself underflows to zero.
    pub min_log_integrand: f64,
}

/// Sample mean of the integrand over `trials` Haar draws from stream
/// `(seed, 0)`.
pub fn spherical_integral_estimate(
    spec: &SphericalSpec,
    snr: f64,
    trials: usize,
    seed: u64,
) -> Result<SphericalEstimate, MonteCarloError> {
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(MonteCarloError::Snr { p: snr });
    }
    if trials < MIN_SPHERICAL_TRIALS {
        return Err(MonteCarloError::TooFewTrials {
            min: MIN_SPHERICAL_TRIALS,
            trials,
        });
    }
    let weights = spec.weights(snr);
    let mut rng = RngStream::new(seed, 0).rng();
    // Welford accumulation.
    let (mut mean, mut m2) = (0.0, 0.0);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut log_lo = f64::INFINITY;
    for i in 0..trials {
        let u = sample_haar_unitary(spec.n, &mut rng)?;
        let log_v = spec.log_integrand(&u, &weights);
        log_lo = log_lo.min(log_v);
        let v = log_v.exp();
        lo = lo.min(v);
        hi = hi.max(v);
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = if trials > 1 { m2 / (trials - 1) as f64 } else { 0.0 };
    Ok(SphericalEstimate {
        snr,
        mean,
        stderr: (var / trials as f64).sqrt(),
        min_integrand: lo,
        max_integrand: hi,
        min_log_integrand: log_lo,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalFit {
    pub estimates: Vec<SphericalEstimate>,
    pub predicted: SphericalExponent,
    /// Fitted slope of `log10 I` against `log10 P`, when every mean is positive.
    pub slope: Option<f64>,
    pub slope_stderr: Option<f64>,
}

/// Estimates at every `P` in `snr_list` (same seed, so common random
/// numbers across points) and the fitted log-log slope.
pub fn spherical_series(
    spec: &SphericalSpec,
    snr_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<SphericalFit, MonteCarloError> {
    let estimates = snr_list
        .iter()
        .map(|&snr| spherical_integral_estimate(spec, snr, trials, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let fit = if estimates.iter().all(|e| e.mean > 0.0) {
        let x: Vec<f64> = estimates.iter().map(|e| e.snr.log10()).collect();
        let y: Vec<f64> = estimates.iter().map(|e| e.mean.log10()).collect();
        fit_line(&x, &y)
    } else {
        None
    };
    Ok(SphericalFit {
        estimates,
        predicted: spherical_exponent(spec),
        slope: fit.map(|f| f.slope),
        slope_stderr: fit.map(|f| f.slope_stderr).filter(|s| s.is_finite()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperpolyPoint {
    pub snr: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperpolyCheck {
    /// `max (1 - α_j - β_k)` over the anti-diagonal.
    pub c: f64,
    pub points: Vec<SuperpolyPoint>,
    pub pass: bool,
}

/// Checks `I(P) <= exp(-P^c) + 3 stderr` at each `P`.
pub fn superpoly_decay_check(
    spec: &SphericalSpec,
    snr_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<SuperpolyCheck, MonteCarloError> {
    if spherical_exponent(spec) != SphericalExponent::MinusInfinity {
        return Err(MonteCarloError::NotSuperPolynomial);
    }
    let c = spec
        .antidiagonal()
        .map(|(j, k)| 1.0 - spec.alphas[j] - spec.betas[k])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut points = Vec::with_capacity(snr_list.len());
    for &snr in snr_list {
        let e = spherical_integral_estimate(spec, snr, trials, seed)?;
        let bound = (-snr.powf(c)).exp();
        // Relative slack for the unit-modulus round-off of normalised columns.
        let pass = e.mean <= bound * (1.0 + 1e-9) + 3.0 * e.stderr;
        points.push(SuperpolyPoint {
            snr,
            estimate: e.mean,
            stderr: e.stderr,
            bound,
            pass,
        });
    }
    let pass = points.iter().all(|p| p.pass);
    Ok(SuperpolyCheck { c, points, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntidiagonalCheck {
    /// `Σ λ_j μ_k` over `j + k = n + 1`.
    pub floor: f64,
    pub min_value: f64,
    pub violations: usize,
    pub trials: usize,
}

impl AntidiagonalCheck {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Draws Haar `U` and checks `Σ λ_j μ_k |u_jk|² >= floor - 1e-9` each time.
pub fn antidiagonal_min_check(
    lambdas: &[f64],
    mus: &[f64],
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<AntidiagonalCheck, MonteCarloError> {
    let decreasing = |v: &[f64]| v.iter().all(|x| x.is_finite() && *x >= 0.0) && v.windows(2).all(|w| w[0] >= w[1]);
    if !decreasing(lambdas) {
        return Err(MonteCarloError::Ordering { name: "lambdas" });
    }
    if !decreasing(mus) {
        return Err(MonteCarloError::Ordering { name: "mus" });
    }
    for (name, v) in [("lambdas", lambdas), ("mus", mus)] {
        if v.is_empty() || v.len() > n {
            return Err(MonteCarloError::Length {
                name,
                expected: n,
                found: v.len(),
            });
        }
    }
    let floor: f64 = (0..lambdas.len())
        .filter_map(|j| {
            let k = (n - 1).checked_sub(j)?;
            (k < mus.len()).then(|| lambdas[j] * mus[k])
        })
        .sum();
    let mut rng = RngStream::new(seed, 0).rng();
    let mut min_value = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..trials {
        let u = sample_haar_unitary(n, &mut rng)?;
        let mut v = 0.0;
        for (j, l) in lambdas.iter().enumerate() {
            for (k, mu) in mus.iter().enumerate() {
                v += l * mu * u[(j, k)].norm_sqr();
            }
        }
        min_value = min_value.min(v);
        if v < floor - 1e-9 {
            violations += 1;
        }
    }
    Ok(AntidiagonalCheck {
        floor,
        min_value,
        violations,
        trials,
    })
}
