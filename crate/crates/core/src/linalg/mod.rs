//! Dense complex linear algebra: Jacobi SVD, hermitian eigensolver,
//! Moore-Penrose inverse and subspace algebra.

mod eigen;
mod matrix;
mod subspace;
mod svd;

pub use eigen::{hermitian_eigen, HermitianEigen};
pub use matrix::{ComplexMatrix, C64, ONE, ZERO};
pub use subspace::{kron_block_residual, kron_containment_defect, overlap, subspace_intersect, subspace_intersect_all, subspace_join, subspace_leq, Subspace};
pub use svd::{svd, svd_thin, svd_with, SvdResult};

use crate::error::Result;

/// Default cutoff `max(rows, cols)·ε·s_max`.
pub fn default_rank_tol(m: &ComplexMatrix, s_max: f64) -> f64 {
    m.rows().max(m.cols()) as f64 * f64::EPSILON * s_max
}

/// Moore-Penrose inverse. Singular values `<= rank_tol` are treated as zero;
/// `None` selects [`default_rank_tol`].
pub fn pinv(m: &ComplexMatrix, rank_tol: Option<f64>) -> Result<ComplexMatrix> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(ComplexMatrix::zeros(cols, rows));
    }
    let r = svd_thin(m)?;
    let cutoff = rank_tol.unwrap_or_else(|| default_rank_tol(m, r.s_max()));
    let k = r.rank(cutoff);
    // W = V_k · S_k^{-1} · U_k^*
    let mut out = ComplexMatrix::zeros(cols, rows);
    for t in 0..k {
        let inv = 1.0 / r.singular_values[t];
        for i in 0..cols {
            let v = r.right_adjoint[(t, i)].conj() * inv;
            if v == ZERO {
                continue;
            }
            for j in 0..rows {
                out[(i, j)] += v * r.left[(j, t)].conj();
            }
        }
    }
    Ok(out)
}

/// Numerical rank with cutoff `rel_tol·s_max`.
pub fn rank(m: &ComplexMatrix, rel_tol: f64) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    let r = svd_thin(m)?;
    Ok(r.rank(rel_tol * r.s_max()))
}

pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    Ok(svd_thin(m)?.s_max())
}

fn effective_cutoff(m: &ComplexMatrix, s_max: f64, rank_tol: Option<f64>) -> f64 {
    rank_tol.unwrap_or_else(|| default_rank_tol(m, s_max))
}

/// Orthonormal basis of `R(M)`.
pub fn onb_range(m: &ComplexMatrix, rank_tol: Option<f64>) -> Result<Subspace> {
    let tol = rank_tol.unwrap_or(0.0);
    if m.is_empty() {
        return Ok(Subspace::zero(m.rows(), tol));
    }
    let r = svd_thin(m)?;
    let k = r.rank(effective_cutoff(m, r.s_max(), rank_tol));
    let idx: Vec<usize> = (0..k).collect();
    Ok(Subspace::from_orthonormal_unchecked(r.left.select_columns(&idx), tol))
}

/// Orthonormal basis of `N(M)`.
pub fn onb_kernel(m: &ComplexMatrix, rank_tol: Option<f64>) -> Result<Subspace> {
    let tol = rank_tol.unwrap_or(0.0);
    let cols = m.cols();
    if m.rows() == 0 || cols == 0 {
        return Ok(Subspace::full(cols, tol));
    }
    let r = svd(m)?;
    let k = r.rank(effective_cutoff(m, r.s_max(), rank_tol));
    let idx: Vec<usize> = (k..cols).collect();
    Ok(Subspace::from_orthonormal_unchecked(r.right_adjoint.adjoint().select_columns(&idx), tol))
}

/// Orthonormal basis of `R(M^*) = N(M)^⊥`, from a thin factorization.
pub fn onb_corange(m: &ComplexMatrix, rank_tol: Option<f64>) -> Result<Subspace> {
    let tol = rank_tol.unwrap_or(0.0);
    if m.is_empty() {
        return Ok(Subspace::zero(m.cols(), tol));
    }
    let r = svd_thin(m)?;
    let k = r.rank(effective_cutoff(m, r.s_max(), rank_tol));
    let idx: Vec<usize> = (0..k).collect();
    Ok(Subspace::from_orthonormal_unchecked(r.right_adjoint.select_rows(&idx).adjoint(), tol))
}

/// Frobenius norms of the four Penrose residuals for `W ≈ M^†`:
/// `MWM − M`, `WMW − W`, `(MW)^* − MW`, `(WM)^* − WM`.
pub fn penrose_residuals(m: &ComplexMatrix, w: &ComplexMatrix) -> Result<[f64; 4]> {
    if w.shape() != (m.cols(), m.rows()) {
        return Err(crate::error::CovrepError::shape(
            "penrose_residuals",
            format!("{}x{}", m.cols(), m.rows()),
            format!("{}x{}", w.rows(), w.cols()),
        ));
    }
    let mw = m.mul_unchecked(w);
    let wm = w.mul_unchecked(m);
    Ok([
        mw.mul_unchecked(m).dist(m),
        wm.mul_unchecked(w).dist(w),
        mw.hermitian_defect(),
        wm.hermitian_defect(),
    ])
}

/// [`pinv`] with cutoff `rel_tol·s_max`.
pub fn pinv_relative(m: &ComplexMatrix, rel_tol: f64) -> Result<ComplexMatrix> {
    if m.is_empty() {
        return Ok(ComplexMatrix::zeros(m.cols(), m.rows()));
    }
    let s_max = spectral_norm(m)?;
    pinv(m, Some(rel_tol * s_max))
}

/// `R(M)` with cutoff `rel_tol·s_max`; the subspace carries `rel_tol`.
pub fn range_relative(m: &ComplexMatrix, rel_tol: f64) -> Result<Subspace> {
    Subspace::span(m, rel_tol)
}

/// `R(M^*) = N(M)^⊥` with cutoff `rel_tol·s_max`.
pub fn corange_relative(m: &ComplexMatrix, rel_tol: f64) -> Result<Subspace> {
    if m.is_empty() {
        return Ok(Subspace::zero(m.cols(), rel_tol));
    }
    let r = svd_thin(m)?;
    let k = r.rank(rel_tol * r.s_max());
    let idx: Vec<usize> = (0..k).collect();
    Ok(Subspace::from_orthonormal_unchecked(r.right_adjoint.select_rows(&idx).adjoint(), rel_tol))
}

/// [`pinv`] keeping exactly the `r` largest singular values.
pub fn pinv_with_rank(m: &ComplexMatrix, r: usize) -> Result<ComplexMatrix> {
    if m.is_empty() || r == 0 {
        return Ok(ComplexMatrix::zeros(m.cols(), m.rows()));
    }
    let f = svd_thin(m)?;
    let r = r.min(f.singular_values.len());
    if r == 0 {
        return Ok(ComplexMatrix::zeros(m.cols(), m.rows()));
    }
    let cutoff = if r < f.singular_values.len() {
        0.5 * (f.singular_values[r - 1] + f.singular_values[r])
    } else {
        0.0
    };
    pinv(m, Some(cutoff))
}

/// `N(M)` with cutoff `rel_tol·s_max`.
pub fn kernel_relative(m: &ComplexMatrix, rel_tol: f64) -> Result<Subspace> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Subspace::full(m.cols(), rel_tol));
    }
    let r = svd_thin(m)?;
    let k = r.rank(rel_tol * r.s_max());
    let idx: Vec<usize> = (0..k).collect();
    let corange = Subspace::from_orthonormal_unchecked(r.right_adjoint.select_rows(&idx).adjoint(), rel_tol);
    Ok(corange.orthogonal_complement())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinv_scalar_and_zero() {
        let w = pinv(&ComplexMatrix::from_real_rows(&[&[2.0]]).unwrap(), None).unwrap();
        assert!((w[(0, 0)].re - 0.5).abs() < 1e-15);
        let z = pinv(&ComplexMatrix::zeros(2, 3), None).unwrap();
        assert_eq!(z.shape(), (3, 2));
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn pinv_block_example() {
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]]).unwrap();
        let w = pinv(&m, None).unwrap();
        let expect = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(w.dist(&expect) < 1e-15);
        let res = penrose_residuals(&m, &w).unwrap();
        assert!(res.iter().all(|&r| r < 1e-14));
        let id = ComplexMatrix::identity(2);
        assert_eq!(penrose_residuals(&id, &id).unwrap(), [0.0; 4]);
        let zero = ComplexMatrix::zeros(4, 2);
        let r0 = penrose_residuals(&m, &zero).unwrap();
        assert!((r0[0] - m.frobenius_norm()).abs() < 1e-15 && r0[1..] == [0.0; 3]);
    }

    #[test]
    fn range_kernel_examples() {
        let id = ComplexMatrix::identity(2);
        assert!(onb_range(&id, None).unwrap().is_full());
        assert!(onb_kernel(&id, None).unwrap().is_zero());
        let z = ComplexMatrix::zeros(2, 3);
        assert!(onb_range(&z, None).unwrap().is_zero());
        assert_eq!(onb_kernel(&z, None).unwrap().dim(), 3);
        let shift = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        let e1 = Subspace::coordinate(2, &[1], 0.0);
        assert!(onb_range(&shift, None).unwrap().approx_eq(&e1, 1e-12).unwrap());
        assert!(onb_kernel(&shift, None).unwrap().approx_eq(&e1, 1e-12).unwrap());
        assert_eq!(onb_corange(&shift, None).unwrap().dim(), 1);
    }
}
