use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, MatrixError};

/// Matrix with i.i.d. circularly-symmetric complex Gaussian entries of unit
/// variance (real and imaginary parts each `N(0, 1/2)`).
pub fn sample_complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
}

/// Haar-distributed `n x n` unitary, obtained by Gram-Schmidt
/// orthonormalisation of the columns of a complex Gaussian matrix.
///
/// Modified Gram-Schmidt is run twice per column. A column that collapses
/// below `1e-12` of its original norm counts as rank deficient; the draw is
/// repeated once before giving up.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix, MatrixError> {
    for _ in 0..2 {
        let g = sample_complex_gaussian(n, n, rng);
        if let Some(u) = gram_schmidt(&g) {
            return Ok(u);
        }
    }
    Err(MatrixError::RankDeficient)
}

fn gram_schmidt(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = g.rows();
    let mut u = g.clone();
    for k in 0..g.cols() {
        let original = column_norm(&u, k);
        for _pass in 0..2 {
            for prev in 0..k {
                let mut proj = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    proj += u[(i, prev)].conj() * u[(i, k)];
                }
                for i in 0..n {
                    let v = u[(i, prev)];
                    u[(i, k)] -= proj * v;
                }
            }
        }
        let norm = column_norm(&u, k);
        if !(norm > 1e-12 * original) {
            return None;
        }
        for i in 0..n {
            u[(i, k)] /= norm;
        }
    }
    Some(u)
}

fn column_norm(m: &ComplexMatrix, k: usize) -> f64 {
    (0..m.rows()).map(|i| m[(i, k)].norm_sqr()).sum::<f64>().sqrt()
}
