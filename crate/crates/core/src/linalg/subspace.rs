//! Subspaces of C^d carried by orthonormal column bases.

use super::matrix::{ComplexMatrix, C64};
use super::svd::{complete_basis, svd_thin};
use crate::error::{CovrepError, Result};

#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: ComplexMatrix,
    tol: f64,
}

impl Subspace {
    /// Wrap a basis that is already orthonormal. Checked against `10·tol`.
    pub fn from_orthonormal(basis: ComplexMatrix, tol: f64) -> Result<Self> {
        let r = basis.cols();
        if r > basis.rows() {
            return Err(CovrepError::shape("Subspace", format!("rank <= {}", basis.rows()), r));
        }
        let defect = basis.adjoint_mul(&basis).dist(&ComplexMatrix::identity(r));
        if defect > 10.0 * tol.max(1e-13) {
            return Err(CovrepError::InvalidInput(format!("basis is not orthonormal (defect {defect:.3e})")));
        }
        Ok(Subspace {
            ambient: basis.rows(),
            basis,
            tol,
        })
    }

    pub(crate) fn from_orthonormal_unchecked(basis: ComplexMatrix, tol: f64) -> Self {
        Subspace {
            ambient: basis.rows(),
            basis,
            tol,
        }
    }

    /// Span of arbitrary columns; singular values of the column matrix at
    /// most `max(tol, max(rows, cols)·ε)·s_max` are dropped.
    pub fn span(columns: &ComplexMatrix, tol: f64) -> Result<Self> {
        if columns.cols() == 0 {
            return Ok(Subspace::zero(columns.rows(), tol));
        }
        let r = svd_thin(columns)?;
        let floor = f64::EPSILON * columns.rows().max(columns.cols()) as f64;
        let k = r.rank(tol.max(floor) * r.s_max());
        let idx: Vec<usize> = (0..k).collect();
        Ok(Subspace::from_orthonormal_unchecked(r.left.select_columns(&idx), tol))
    }

    pub fn zero(ambient: usize, tol: f64) -> Self {
        Subspace::from_orthonormal_unchecked(ComplexMatrix::zeros(ambient, 0), tol)
    }

    pub fn full(ambient: usize, tol: f64) -> Self {
        Subspace::from_orthonormal_unchecked(ComplexMatrix::identity(ambient), tol)
    }

    /// Span of standard basis vectors `e_i`, `i ∈ indices`.
    pub fn coordinate(ambient: usize, indices: &[usize], tol: f64) -> Self {
        let mut b = ComplexMatrix::zeros(ambient, indices.len());
        for (k, &i) in indices.iter().enumerate() {
            b[(i, k)] = C64::new(1.0, 0.0);
        }
        Subspace::from_orthonormal_unchecked(b, tol)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Orthogonal projector `Q·Q^*`.
    pub fn projector(&self) -> ComplexMatrix {
        self.basis.mul_unchecked(&self.basis.adjoint())
    }

    /// `(I − P)·X` without forming `P`.
    pub fn residual_of(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let coeffs = self.basis.adjoint_mul(x);
        let proj = self.basis.mul_unchecked(&coeffs);
        x - &proj
    }

    /// Norm of the component of `x` orthogonal to the subspace.
    pub fn distance_of(&self, x: &[C64]) -> f64 {
        let col = ComplexMatrix::from_columns(x.len(), &[x.to_vec()]);
        self.residual_of(&col).frobenius_norm()
    }

    pub fn orthogonal_complement(&self) -> Subspace {
        let cols: Vec<Vec<C64>> = (0..self.dim()).map(|j| self.basis.column(j)).collect();
        let full = complete_basis(self.ambient, cols);
        let rest: Vec<Vec<C64>> = full.into_iter().skip(self.dim()).collect();
        Subspace::from_orthonormal_unchecked(ComplexMatrix::from_columns(self.ambient, &rest), self.tol)
    }

    /// `E^{⊗k} ⊗ M` for `copies = n^k`: block-diagonal basis `kron(I_copies, Q)`.
    pub fn kron_identity_left(&self, copies: usize) -> Subspace {
        Subspace::from_orthonormal_unchecked(self.basis.kron_identity_left(copies), self.tol)
    }

    /// Image `A(M)`.
    pub fn image_under(&self, a: &ComplexMatrix) -> Result<Subspace> {
        if a.cols() != self.ambient {
            return Err(CovrepError::AmbientMismatch {
                left: a.cols(),
                right: self.ambient,
            });
        }
        if self.is_zero() {
            return Ok(Subspace::zero(a.rows(), self.tol));
        }
        Subspace::span(&a.mul_unchecked(&self.basis), self.tol)
    }

    /// `‖(I − P_other)·Q_self‖_F`.
    pub fn containment_defect(&self, other: &Subspace) -> Result<f64> {
        check_ambient(self, other)?;
        if self.is_zero() {
            return Ok(0.0);
        }
        Ok(other.residual_of(&self.basis).frobenius_norm())
    }

    /// Largest principal-angle sine between two subspaces of equal dimension,
    /// or `1` when the dimensions differ.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        check_ambient(self, other)?;
        if self.dim() != other.dim() {
            return Ok(1.0);
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let r = svd_thin(&other.residual_of(&self.basis))?;
        Ok(r.s_max())
    }

    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> Result<bool> {
        Ok(subspace_leq(self, other, tol)? && subspace_leq(other, self, tol)?)
    }
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.ambient != b.ambient {
        return Err(CovrepError::AmbientMismatch {
            left: a.ambient,
            right: b.ambient,
        });
    }
    Ok(())
}

/// `A ⊆ B` iff `‖(I − P_B)·Q_A‖_F ≤ tol·(1 + dim A)`.
pub fn subspace_leq(a: &Subspace, b: &Subspace, tol: f64) -> Result<bool> {
    let d = a.containment_defect(b)?;
    Ok(d <= tol * (1.0 + a.dim() as f64))
}

/// `A ∩ B` as the kernel of the stacked complement projections. Vectors in
/// the kernel lie in `A`, so it is computed on `A`'s coordinates: the kernel of
/// `(I − P_B)·Q_A`, with singular values at most `tol` counted as zero.
pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_ambient(a, b)?;
    let tol = a.tol.max(b.tol);
    if a.is_zero() || b.is_zero() {
        return Ok(Subspace::zero(a.ambient, tol));
    }
    if b.is_full() {
        return Ok(a.clone().with_tol(tol));
    }
    if a.is_full() {
        return Ok(b.clone().with_tol(tol));
    }
    let (small, large) = if a.dim() <= b.dim() { (a, b) } else { (b, a) };
    let m = large.residual_of(&small.basis);
    // full right factor of an ambient×r matrix: r×r
    let r = super::svd::svd(&m)?;
    let k = r.singular_values.iter().filter(|&&s| s > tol).count();
    let rest: Vec<usize> = (k..small.dim()).collect();
    if rest.is_empty() {
        return Ok(Subspace::zero(a.ambient, tol));
    }
    let y = r.right_adjoint.adjoint().select_columns(&rest);
    let basis = small.basis.mul_unchecked(&y);
    Ok(Subspace::from_orthonormal_unchecked(basis, tol))
}

pub fn subspace_intersect_all(spaces: &[Subspace]) -> Result<Subspace> {
    let mut it = spaces.iter();
    let first = it
        .next()
        .ok_or_else(|| CovrepError::InvalidInput("intersection of an empty family".into()))?;
    let mut acc = first.clone();
    for s in it {
        acc = subspace_intersect(&acc, s)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// Span of every argument's basis columns.
pub fn subspace_join(spaces: &[Subspace]) -> Result<Subspace> {
    let first = spaces
        .first()
        .ok_or_else(|| CovrepError::InvalidInput("join of an empty family".into()))?;
    let ambient = first.ambient;
    let tol = spaces.iter().map(|s| s.tol).fold(0.0, f64::max);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for s in spaces {
        check_ambient(first, s)?;
        cols.extend((0..s.dim()).map(|j| s.basis.column(j)));
    }
    if cols.is_empty() {
        return Ok(Subspace::zero(ambient, tol));
    }
    let stacked = ComplexMatrix::from_columns(ambient, &cols);
    let r = svd_thin(&stacked)?;
    // columns are unit vectors, so the cutoff is absolute
    let k = r.rank(tol.max(f64::EPSILON * ambient as f64));
    let idx: Vec<usize> = (0..k).collect();
    Ok(Subspace::from_orthonormal_unchecked(r.left.select_columns(&idx), tol))
}

/// Orthogonal sum check helper: `‖Q_A^*·Q_B‖_F`.
pub fn overlap(a: &Subspace, b: &Subspace) -> Result<f64> {
    check_ambient(a, b)?;
    if a.is_zero() || b.is_zero() {
        return Ok(0.0);
    }
    Ok(a.basis.adjoint_mul(&b.basis).frobenius_norm())
}

/// `‖(I − I_{copies_b} ⊗ P_Y)·(I_{copies_a} ⊗ X)‖_F` for coordinate-aligned
/// block subspaces, computed block by block. Requires the inner dimension of
/// `Y` to be a multiple of that of `X` and equal total ambient dimensions.
pub fn kron_containment_defect(copies_a: usize, x: &Subspace, copies_b: usize, y: &Subspace) -> Result<f64> {
    let (dx, dy) = (x.ambient, y.ambient);
    if copies_a * dx != copies_b * dy {
        return Err(CovrepError::AmbientMismatch {
            left: copies_a * dx,
            right: copies_b * dy,
        });
    }
    if x.is_zero() || copies_a == 0 {
        return Ok(0.0);
    }
    if dy % dx != 0 {
        return Err(CovrepError::InvalidInput(format!(
            "block size {dy} is not a multiple of {dx}"
        )));
    }
    let ratio = dy / dx;
    // every Y-block sees the same `ratio` copies of X
    let inner = x.basis.kron_identity_left(ratio);
    let per_block = y.residual_of(&inner).frobenius_norm();
    Ok(per_block * (copies_b as f64).sqrt())
}

/// `‖(I − I_copies ⊗ P_Y)·X‖_F`, block by block, for `X` with
/// `copies·dim(ambient Y)` rows.
pub fn kron_block_residual(copies: usize, y: &Subspace, x: &ComplexMatrix) -> Result<f64> {
    let d = y.ambient;
    if x.rows() != copies * d {
        return Err(CovrepError::AmbientMismatch {
            left: x.rows(),
            right: copies * d,
        });
    }
    if x.cols() == 0 || copies == 0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for b in 0..copies {
        let idx: Vec<usize> = (b * d..(b + 1) * d).collect();
        let block = x.select_rows(&idx);
        total += y.residual_of(&block).frobenius_norm().powi(2);
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: f64 = 1e-10;

    fn span_of(ambient: usize, vecs: &[&[f64]]) -> Subspace {
        let cols: Vec<Vec<C64>> = vecs.iter().map(|v| v.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Subspace::span(&ComplexMatrix::from_columns(ambient, &cols), T).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let e0 = Subspace::coordinate(2, &[0], T);
        let e1 = Subspace::coordinate(2, &[1], T);
        assert_eq!(subspace_intersect(&e0, &e0).unwrap().dim(), 1);
        assert!(subspace_intersect(&e0, &e1).unwrap().is_zero());

        let a = Subspace::coordinate(3, &[0, 1], T);
        let b = Subspace::coordinate(3, &[1, 2], T);
        let c = subspace_intersect(&a, &b).unwrap();
        // projector-product oracle: P_A P_B = diag(0,1,0) = P_{A∩B}
        let pp = &a.projector() * &b.projector();
        assert!(c.projector().dist(&pp) < 1e-12);
        assert!(subspace_leq(&c, &a, T).unwrap() && subspace_leq(&c, &b, T).unwrap());
    }

    #[test]
    fn oblique_intersection() {
        let a = span_of(3, &[&[1.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let b = span_of(3, &[&[1.0, 1.0, 1.0], &[1.0, -1.0, 0.0]]);
        let c = subspace_intersect(&a, &b).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.distance_of(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)]) < 1e-12);
    }

    #[test]
    fn join_examples() {
        let e0 = Subspace::coordinate(2, &[0], T);
        let e1 = Subspace::coordinate(2, &[1], T);
        assert_eq!(subspace_join(&[e0.clone(), e0.clone()]).unwrap().dim(), 1);
        assert!(subspace_join(&[e0, e1]).unwrap().is_full());
    }

    #[test]
    fn leq_examples() {
        let zero = Subspace::zero(3, T);
        let line = Subspace::coordinate(3, &[2], T);
        assert!(subspace_leq(&zero, &line, T).unwrap());
        assert!(!subspace_leq(&Subspace::full(3, T), &line, T).unwrap());
        let diag = span_of(3, &[&[1.0, 1.0, 0.0]]);
        assert!(subspace_leq(&diag, &Subspace::coordinate(3, &[0, 1], T), T).unwrap());
    }

    #[test]
    fn projector_of_full_space() {
        assert!(Subspace::full(2, T).projector().dist(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn kron_containment_matches_dense() {
        let x = span_of(2, &[&[1.0, 1.0]]);
        let y = span_of(4, &[&[1.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]]);
        let fast = kron_containment_defect(6, &x, 3, &y).unwrap();
        let dense = x.kron_identity_left(6).containment_defect(&y.kron_identity_left(3)).unwrap();
        assert!((fast - dense).abs() < 1e-12);
        assert!(dense > 0.5);
    }

    #[test]
    fn complement_and_mismatch() {
        let a = span_of(3, &[&[1.0, 1.0, 0.0]]);
        let c = a.orthogonal_complement();
        assert_eq!(c.dim(), 2);
        assert!(overlap(&a, &c).unwrap() < 1e-14);
        let other = Subspace::zero(2, T);
        assert!(matches!(subspace_intersect(&a, &other), Err(CovrepError::AmbientMismatch { .. })));
    }
}
