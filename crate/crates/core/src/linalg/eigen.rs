//! Cyclic Jacobi eigensolver for hermitian matrices.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{CovrepError, Result};

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unit eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> Option<(f64, Vec<C64>)> {
        self.values.first().map(|&v| (v, self.vectors.column(0)))
    }

    pub fn max(&self) -> Option<(f64, Vec<C64>)> {
        let n = self.values.len();
        self.values.last().map(|&v| (v, self.vectors.column(n - 1)))
    }
}

/// Eigen-decomposition of the hermitian part `(A + A^*)/2` of a square matrix.
pub fn hermitian_eigen(a: &ComplexMatrix, max_sweeps: usize) -> Result<HermitianEigen> {
    let n = a.rows();
    if a.cols() != n {
        return Err(CovrepError::shape("hermitian_eigen", "square matrix", format!("{}x{}", a.rows(), a.cols())));
    }
    if !a.is_finite() {
        return Err(CovrepError::FactorizationFailed("input contains non-finite entries".into()));
    }
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
        }
        h[(i, i)] = C64::new(h[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = h.frobenius_norm();
    let stop = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| h[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = h[(p, q)];
                let g = apq.norm();
                if g <= stop / (n as f64) || g < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let phase_conj = phase.conj();
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                let zeta = (aqq - app) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // columns: q *= conj(phase), then rotate (p, q)
                for i in 0..n {
                    let xp = h[(i, p)];
                    let xq = h[(i, q)] * phase_conj;
                    h[(i, p)] = xp * c - xq * s;
                    h[(i, q)] = xp * s + xq * c;
                }
                // rows: q *= phase, then rotate (p, q)
                for j in 0..n {
                    let xp = h[(p, j)];
                    let xq = h[(q, j)] * phase;
                    h[(p, j)] = xp * c - xq * s;
                    h[(q, j)] = xp * s + xq * c;
                }
                h[(p, q)] = ZERO;
                h[(q, p)] = ZERO;
                h[(p, p)] = C64::new(h[(p, p)].re, 0.0);
                h[(q, q)] = C64::new(h[(q, q)].re, 0.0);
                for i in 0..n {
                    let xp = v[(i, p)];
                    let xq = v[(i, q)] * phase_conj;
                    v[(i, p)] = xp * c - xq * s;
                    v[(i, q)] = xp * s + xq * c;
                }
            }
        }
    }
    if !converged {
        return Err(CovrepError::FactorizationFailed(format!(
            "hermitian Jacobi did not converge within {max_sweeps} sweeps ({n}x{n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.partial_cmp(&h[(j, j)].re).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
    let values = order.iter().map(|&i| h[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    Ok(HermitianEigen { values, vectors })
}
