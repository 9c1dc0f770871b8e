use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::MonteCarloError;
use crate::dmt_analytic::AntennaConfig;
use crate::rand_matrix::{
    hermitian_eigen, hermitian_eigenvalues, log2_det_hpd, log_det_shifted, sample_complex_gaussian, ComplexMatrix,
    MatrixError, RngStream,
};

fn check_snr(p: f64) -> Result<(), MonteCarloError> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(MonteCarloError::Snr { p })
    }
}

/// Count of per-draw failures of an inequality or identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceCheck {
    pub trials: usize,
    pub violations: usize,
    /// Smallest observed `rhs - lhs`.
    pub worst_margin: f64,
}

impl CovarianceCheck {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// `log2 det(I + P HH*) - log2 det(I + H Q H*)` for PSD `Q` with `tr Q <= P`.
pub fn covariance_gap(h: &ComplexMatrix, q: &ComplexMatrix, p: f64) -> Result<f64, MonteCarloError> {
    check_snr(p)?;
    if q.rows() != h.cols() || !q.is_square() {
        return Err(MonteCarloError::Shape {
            name: "Q",
            expected: (h.cols(), h.cols()),
            found: (q.rows(), q.cols()),
        });
    }
    let trace = q.trace().re;
    if trace > p * (1.0 + 1e-12) {
        return Err(MonteCarloError::Trace { trace, p });
    }
    let mut s = (&(h * q) * &h.adjoint()).symmetrized();
    for i in 0..s.rows() {
        s[(i, i)] += 1.0;
    }
    Ok(log_det_shifted(h, p) - log2_det_hpd(&s)?)
}

/// Draws Gaussian `H` (`n x m`) and `Q = u P W / tr W` with `W = XX*`,
/// `X` Gaussian `m x m` and `u` uniform on `(0, 1]`, and checks
/// `log det(I + HQH*) <= log det(I + P HH*)` within 1e-9.
pub fn covariance_bound_check(
    n: usize,
    m: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<CovarianceCheck, MonteCarloError> {
    check_snr(p)?;
    if n == 0 || m == 0 {
        return Err(MonteCarloError::Zero { what: "dimension" });
    }
    let mut rng = RngStream::new(seed, 0).rng();
    let mut worst_margin = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..trials {
        let h = sample_complex_gaussian(n, m, &mut rng);
        let x = sample_complex_gaussian(m, m, &mut rng);
        let u = 1.0 - rng.random::<f64>();
        let w = x.gram();
        let q = w.scale(u * p / w.trace().re);
        let margin = covariance_gap(&h, &q, p)?;
        worst_margin = worst_margin.min(margin);
        if margin < -1e-9 {
            violations += 1;
        }
    }
    Ok(CovarianceCheck {
        trials,
        violations,
        worst_margin,
    })
}

/// Below this smallest eigenvalue the lemma's constants are not claimed.
pub const LEMMA1_LAMBDA0: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma1Status {
    Pass,
    Fail,
    OutOfRegime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub m: usize,
    pub n: usize,
    pub lambda_min: f64,
    pub det: f64,
    /// Estimate of `P(y* A y <= |z|²)`.
    pub estimate: f64,
    pub stderr: f64,
    pub det_product: f64,
    pub lower: f64,
    pub upper: f64,
    pub status: Lemma1Status,
}

/// `(m + n - 1)! / (m! (n - 1)!)`.
fn upper_constant(m: usize, n: usize) -> f64 {
    (1..=m).map(|i| (n - 1 + i) as f64 / i as f64).product()
}

/// Monte Carlo estimate of `P(y* A y <= |z|²)` for `y ~ CN(0, I_m)`,
/// `z ~ CN(0, I_n)`, and the check
/// `C1 <= det(A) P <= C2` (each side widened by 3 standard errors), with
/// `C2 = (m+n-1)! / (m! (n-1)!)` and
/// `C1 = C2 (λmin / (1 + λmin))^(m+n)`.
pub fn lemma1_check(a: &ComplexMatrix, n: usize, trials: usize, seed: u64) -> Result<Lemma1Report, MonteCarloError> {
    if n == 0 {
        return Err(MonteCarloError::Zero { what: "n" });
    }
    if trials == 0 {
        return Err(MonteCarloError::Zero { what: "trials" });
    }
    let values = hermitian_eigenvalues(a)?;
    let m = values.len();
    let lambda_min = values[m - 1];
    if !(lambda_min > 0.0) {
        return Err(MatrixError::NotPositiveDefinite.into());
    }
    let det: f64 = values.iter().product();
    let a = a.symmetrized();

    let mut rng = RngStream::new(seed, 0).rng();
    let mut hits = 0u64;
    for _ in 0..trials {
        let y = sample_complex_gaussian(m, 1, &mut rng);
        let z = sample_complex_gaussian(n, 1, &mut rng);
        let mut quad = Complex64::new(0.0, 0.0);
        for i in 0..m {
            for j in 0..m {
                quad += y[(i, 0)].conj() * a[(i, j)] * y[(j, 0)];
            }
        }
        let znorm: f64 = z.data().iter().map(|c| c.norm_sqr()).sum();
        if quad.re <= znorm {
            hits += 1;
        }
    }
    let estimate = hits as f64 / trials as f64;
    let stderr = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    let upper = upper_constant(m, n);
    let lower = upper * (lambda_min / (1.0 + lambda_min)).powi((m + n) as i32);
    let det_product = estimate * det;
    let slack = 3.0 * stderr * det;
    let status = if lambda_min < LEMMA1_LAMBDA0 {
        Lemma1Status::OutOfRegime
    } else if det_product >= lower - slack && det_product <= upper + slack {
        Lemma1Status::Pass
    } else {
        Lemma1Status::Fail
    };
    Ok(Lemma1Report {
        m,
        n,
        lambda_min,
        det,
        estimate,
        stderr,
        det_product,
        lower,
        upper,
        status,
    })
}

/// `(t I(G) + (1-t) I([G H])) - (I(G) + (1-t) log2 det(I + P BB*))`, with
/// `I(M) = log2 det(I + P MM*)`, `GG* = V Λ V*` and
/// `B = (I + PΛ)^(-1/2) V* H`. Zero up to round-off.
pub fn combined_eigen_gap(g: &ComplexMatrix, h: &ComplexMatrix, p: f64, t: f64) -> Result<f64, MonteCarloError> {
    check_snr(p)?;
    if g.rows() != h.rows() {
        return Err(MonteCarloError::Shape {
            name: "H",
            expected: (g.rows(), h.cols()),
            found: (h.rows(), h.cols()),
        });
    }
    let eig = hermitian_eigen(&g.gram())?;
    let scale: Vec<f64> = eig.values.iter().map(|l| 1.0 / (1.0 + p * l.max(0.0)).sqrt()).collect();
    let vh = &eig.vectors.adjoint() * h;
    let b = ComplexMatrix::from_fn(vh.rows(), vh.cols(), |i, j| vh[(i, j)] * scale[i]);
    let direct = log_det_shifted(g, p);
    let lhs = t * direct + (1.0 - t) * log_det_shifted(&g.hstack(h), p);
    let rhs = direct + (1.0 - t) * log_det_shifted(&b, p);
    Ok(lhs - rhs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub trials: usize,
    pub violations: usize,
    pub max_error: f64,
}

impl IdentityCheck {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// [`combined_eigen_gap`] on Gaussian `G` (`n x p`), `H` (`n x m`) and
/// uniform `t`, within 1e-8 per draw.
pub fn combined_eigen_sanity(cfg: AntennaConfig, p: f64, trials: usize, seed: u64) -> Result<IdentityCheck, MonteCarloError> {
    check_snr(p)?;
    let mut rng = RngStream::new(seed, 0).rng();
    let mut max_error = 0.0f64;
    let mut violations = 0;
    for _ in 0..trials {
        let g = sample_complex_gaussian(cfg.n, cfg.p, &mut rng);
        let h = sample_complex_gaussian(cfg.n, cfg.m, &mut rng);
        let t = rng.random::<f64>();
        let err = combined_eigen_gap(&g, &h, p, t)?.abs();
        max_error = max_error.max(err);
        if !(err <= 1e-8) {
            violations += 1;
        }
    }
    Ok(IdentityCheck {
        trials,
        violations,
        max_error,
    })
}
