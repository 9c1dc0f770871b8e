use num_complex::Complex64;

use super::{ComplexMatrix, MatrixError, HERMITIAN_TOL};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Eigen-decomposition `M = V diag(values) V^*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Non-increasing.
    pub values: Vec<f64>,
    /// Unitary; column `k` pairs with `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let scaled = ComplexMatrix::from_fn(self.vectors.rows(), self.vectors.cols(), |i, k| {
            self.vectors[(i, k)] * self.values[k]
        });
        &scaled * &self.vectors.adjoint()
    }
}

pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>, MatrixError> {
    hermitian_eigen(m).map(|e| e.values)
}

/// Cyclic complex Jacobi.
///
/// Each rotation first removes the phase of the pivot `a_pq`, which reduces
/// the 2x2 block to a real symmetric one, then applies the classical real
/// Jacobi rotation. Sweeps stop once the off-diagonal Frobenius mass drops
/// below `1e-13 * ||M||_F`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let scale = m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale.max(1.0) {
        return Err(MatrixError::NotHermitian { defect });
    }
    let mut a = m.symmetrized();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = scale == 0.0;
    for _sweep in 0..MAX_SWEEPS {
        if converged || off_diagonal_norm(&a) < OFF_DIAGONAL_TOL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) >= OFF_DIAGONAL_TOL * scale {
        return Err(MatrixError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Applies `A <- J^* A J`, `V <- V J` with `J` chosen to annihilate `a_pq`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J restricted to (p, q): [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.rows();
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * jpp + aiq * jqp;
        a[(i, q)] = aip * jpq + aiq * jqq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
        a[(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * jpp + viq * jqp;
        v[(i, q)] = vip * jpq + viq * jqq;
    }
}
