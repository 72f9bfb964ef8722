//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! Deterministic: the sweep order is fixed and no randomization is used.
//! Singular values come out with high relative accuracy, which matters for
//! the rank decisions made on products of lifted operators.

use super::matrix::{dot, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{CovrepError, Result};

const DEFAULT_MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Left singular vectors as columns.
    pub left: ComplexMatrix,
    /// Nonincreasing, length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    /// Adjoint of the right singular vectors (rows are right vectors conjugated).
    pub right_adjoint: ComplexMatrix,
}

impl SvdResult {
    pub fn s_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values strictly above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.singular_values.iter().take_while(|&&s| s > cutoff).count()
    }

    /// `U · diag(s) · Vh` for the leading `min(rows, cols)` triplets.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let m = self.left.rows();
        let n = self.right_adjoint.cols();
        let mut out = ComplexMatrix::zeros(m, n);
        for (t, &s) in self.singular_values.iter().enumerate().take(k) {
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                let a = self.left[(i, t)] * s;
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * self.right_adjoint[(t, j)];
                }
            }
        }
        out
    }
}

/// Full SVD: `left` is rows×rows, `right_adjoint` is cols×cols.
pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    svd_with(m, true, DEFAULT_MAX_SWEEPS)
}

/// Thin SVD: `left` is rows×k, `right_adjoint` is k×cols with k = min(rows, cols).
pub fn svd_thin(m: &ComplexMatrix) -> Result<SvdResult> {
    svd_with(m, false, DEFAULT_MAX_SWEEPS)
}

pub fn svd_with(m: &ComplexMatrix, full: bool, max_sweeps: usize) -> Result<SvdResult> {
    if !m.is_finite() {
        return Err(CovrepError::FactorizationFailed("input contains non-finite entries".into()));
    }
    let (rows, cols) = m.shape();
    if rows >= cols {
        let (u_cols, s, v_cols) = jacobi_tall(m, max_sweeps)?;
        let left_cols = if full { complete_basis(rows, u_cols) } else { u_cols };
        let left = ComplexMatrix::from_columns(rows, &left_cols);
        let right_adjoint = ComplexMatrix::from_columns(cols, &v_cols).adjoint();
        Ok(SvdResult {
            left,
            singular_values: s,
            right_adjoint,
        })
    } else {
        // M* = U' S V'*  =>  M = V' S U'*
        let (u_cols, s, v_cols) = jacobi_tall(&m.adjoint(), max_sweeps)?;
        let right_cols = if full { complete_basis(cols, u_cols) } else { u_cols };
        let left = ComplexMatrix::from_columns(rows, &v_cols);
        let right_adjoint = ComplexMatrix::from_columns(cols, &right_cols).adjoint();
        Ok(SvdResult {
            left,
            singular_values: s,
            right_adjoint,
        })
    }
}

/// Jacobi on a tall matrix (rows ≥ cols). Returns the normalized left
/// columns (exact-zero columns completed), sorted singular values and the
/// full set of right vectors, all as column lists.
#[allow(clippy::type_complexity)]
fn jacobi_tall(m: &ComplexMatrix, max_sweeps: usize) -> Result<(Vec<Vec<C64>>, Vec<f64>, Vec<Vec<C64>>)> {
    let (rows, cols) = m.shape();
    debug_assert!(rows >= cols);
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = ONE;
            e
        })
        .collect();

    let threshold = f64::EPSILON * (rows.max(1) as f64);
    // columns below this squared norm are numerically zero relative to ‖A‖_F
    let negligible = (f64::EPSILON * f64::EPSILON) * a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    let mut converged = cols < 2;
    for _ in 0..max_sweeps {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if g <= threshold * (alpha * beta).sqrt() || g < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut a, p, q, phase_conj, c, s);
                rotate_pair(&mut v, p, q, phase_conj, c, s);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(CovrepError::FactorizationFailed(format!(
            "Jacobi SVD did not converge within {max_sweeps} sweeps ({rows}x{cols})"
        )));
    }

    let norms: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v_sorted: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(cols);
    let mut missing = 0;
    for &j in &order {
        if norms[j] * norms[j] > negligible && norms[j] > f64::MIN_POSITIVE * 1e10 {
            let inv = 1.0 / norms[j];
            u_cols.push(a[j].iter().map(|z| z * inv).collect());
        } else {
            missing += 1;
        }
    }
    if missing > 0 {
        u_cols = complete_basis_to(rows, u_cols, cols);
    }
    Ok((u_cols, s, v_sorted))
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, phase_conj: C64, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let yq = *y * phase_conj;
        let xp = *x;
        *x = xp * c - yq * s;
        *y = xp * s + yq * c;
    }
}

/// Extend orthonormal columns of length `dim` to a full orthonormal basis.
pub(crate) fn complete_basis(dim: usize, basis: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    complete_basis_to(dim, basis, dim)
}

/// Extend orthonormal columns of length `dim` to `total` orthonormal columns.
/// The new columns are `H_1⋯H_k e_t`, where the Householder reflectors
/// `H_j` triangularize the given basis.
pub(crate) fn complete_basis_to(dim: usize, mut basis: Vec<Vec<C64>>, total: usize) -> Vec<Vec<C64>> {
    let total = total.min(dim);
    if basis.len() >= total {
        basis.truncate(total);
        return basis;
    }
    let k = basis.len();
    let mut work = basis.clone();
    let mut reflectors: Vec<Option<Vec<C64>>> = Vec::with_capacity(k);
    for j in 0..k {
        let nx = work[j][j..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nx == 0.0 {
            reflectors.push(None);
            continue;
        }
        let xj = work[j][j];
        let phase = if xj.norm() > 0.0 { xj / xj.norm() } else { ONE };
        let mut v = vec![ZERO; dim];
        v[j..].copy_from_slice(&work[j][j..]);
        v[j] += phase * nx;
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= nv;
        }
        for col in work.iter_mut().skip(j + 1) {
            reflect(&v, col);
        }
        reflectors.push(Some(v));
    }
    for t in k..total {
        let mut e = vec![ZERO; dim];
        e[t] = ONE;
        for v in reflectors.iter().rev().flatten() {
            reflect(v, &mut e);
        }
        basis.push(e);
    }
    basis
}

fn reflect(v: &[C64], y: &mut [C64]) {
    let coef = dot(v, y) * 2.0;
    for (yi, &vi) in y.iter_mut().zip(v) {
        *yi -= vi * coef;
    }
}
