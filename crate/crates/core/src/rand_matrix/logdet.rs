use num_complex::Complex64;

use super::{hermitian_eigenvalues, ComplexMatrix, MatrixError};

/// `log2 det(I + P M M^*)`, via Cholesky of the shifted Gram matrix.
///
/// The shifted Gram matrix has all eigenvalues at least one, so the
/// factorisation cannot break down for finite input.
pub fn log_det_shifted(m: &ComplexMatrix, snr: f64) -> f64 {
    assert!(snr > 0.0, "SNR must be positive");
    let mut s = m.gram().scale(snr);
    for i in 0..s.rows() {
        s[(i, i)] += 1.0;
    }
    match log2_det_hpd(&s) {
        Ok(v) => v,
        // Only reachable for overflowed entries.
        Err(_) => hermitian_eigenvalues(&s)
            .map(|vals| vals.iter().map(|x| x.max(f64::MIN_POSITIVE).log2()).sum())
            .unwrap_or(f64::INFINITY),
    }
}

/// `log2 det(S)` for Hermitian positive definite `S` (Cholesky).
pub fn log2_det_hpd(s: &ComplexMatrix) -> Result<f64, MatrixError> {
    if !s.is_square() {
        return Err(MatrixError::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let n = s.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    let mut log_det = 0.0;
    for j in 0..n {
        let mut d = s[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(MatrixError::NotPositiveDefinite);
        }
        let ljj = d.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        log_det += d.log2();
        for i in (j + 1)..n {
            let mut acc = s[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / ljj;
        }
    }
    Ok(log_det)
}
