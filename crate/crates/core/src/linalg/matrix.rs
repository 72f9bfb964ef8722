use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{CovrepError, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Validated constructor: length must be `rows * cols`, entries finite.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CovrepError::shape(
                "ComplexMatrix::new",
                format!("{} entries ({rows}x{cols})", rows * cols),
                format!("{} entries", data.len()),
            ));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(CovrepError::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(rows, cols, values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Build from nested rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(CovrepError::shape("ComplexMatrix::from_rows", format!("{c} columns"), bad.len()));
        }
        Self::new(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(CovrepError::shape("ComplexMatrix::from_real_rows", format!("{c} columns"), bad.len()));
        }
        Self::new(r, c, rows.iter().flat_map(|row| row.iter().map(|&x| C64::new(x, 0.0))).collect())
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = C64::new(v, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, &z) in col.iter().enumerate() {
                m.data[i * cols + j] = z;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + k] = self.data[i * self.cols + j];
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self::from_vec_unchecked(idx.len(), self.cols, data)
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|&z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).sum()
    }

    /// Checked product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(CovrepError::shape(
                "matmul",
                format!("{} rows on the right", self.cols),
                format!("{}x{}", rhs.rows, rhs.cols),
            ));
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (m, k, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; m * n];
        for i in 0..m {
            let out_row = &mut out[i * n..(i + 1) * n];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[p * n..(p + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self::from_vec_unchecked(m, n, out)
    }

    /// `self^* · rhs` without forming the adjoint.
    pub fn adjoint_mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "adjoint_mul shape");
        let (k, m, n) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; m * n];
        for p in 0..k {
            let lhs_row = &self.data[p * m..(p + 1) * m];
            let rhs_row = &rhs.data[p * n..(p + 1) * n];
            for (i, a) in lhs_row.iter().enumerate() {
                let a = a.conj();
                if a == ZERO {
                    continue;
                }
                let out_row = &mut out[i * n..(i + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self::from_vec_unchecked(m, n, out)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "mul_vec shape");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Kronecker product with the standard ordering:
    /// `(A⊗B)[i·rb + k, j·cb + l] = A[i,j]·B[k,l]`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (ra, ca, rb, cb) = (self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Self::zeros(ra * rb, ca * cb);
        let oc = ca * cb;
        for i in 0..ra {
            for j in 0..ca {
                let a = self.data[i * ca + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        out.data[(i * rb + k) * oc + j * cb + l] = a * rhs.data[k * cb + l];
                    }
                }
            }
        }
        out
    }

    /// `kron(I_copies, self)`, block diagonal.
    pub fn kron_identity_left(&self, copies: usize) -> Self {
        let (r, c) = (self.rows, self.cols);
        let oc = copies * c;
        let mut out = Self::zeros(copies * r, oc);
        for b in 0..copies {
            for i in 0..r {
                let dst = (b * r + i) * oc + b * c;
                out.data[dst..dst + c].copy_from_slice(self.row(i));
            }
        }
        out
    }

    /// `self · kron(I_copies, block)` computed blockwise.
    ///
    /// `self` must have `copies * block.rows()` columns.
    pub fn mul_kron_identity(&self, copies: usize, block: &Self) -> Self {
        let (br, bc) = (block.rows, block.cols);
        assert_eq!(self.cols, copies * br, "mul_kron_identity shape");
        let m = self.rows;
        let oc = copies * bc;
        let mut out = Self::zeros(m, oc);
        for i in 0..m {
            for b in 0..copies {
                for p in 0..br {
                    let a = self.data[i * self.cols + b * br + p];
                    if a == ZERO {
                        continue;
                    }
                    let brow = block.row(p);
                    let dst = &mut out.data[i * oc + b * bc..i * oc + (b + 1) * bc];
                    for (o, &v) in dst.iter_mut().zip(brow) {
                        *o += a * v;
                    }
                }
            }
        }
        out
    }

    /// `kron(I_copies, block) · self` computed blockwise.
    ///
    /// `self` must have `copies * block.cols()` rows.
    pub fn kron_identity_mul(copies: usize, block: &Self, rhs: &Self) -> Self {
        let (br, bc) = (block.rows, block.cols);
        assert_eq!(rhs.rows, copies * bc, "kron_identity_mul shape");
        let n = rhs.cols;
        let mut out = Self::zeros(copies * br, n);
        for b in 0..copies {
            for i in 0..br {
                let dst_start = (b * br + i) * n;
                for p in 0..bc {
                    let a = block.data[i * bc + p];
                    if a == ZERO {
                        continue;
                    }
                    let src = rhs.row(b * bc + p);
                    let dst = &mut out.data[dst_start..dst_start + n];
                    for (o, &v) in dst.iter_mut().zip(src) {
                        *o += a * v;
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(CovrepError::shape("hstack", self.rows, rhs.rows));
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Ok(Self::from_vec_unchecked(self.rows, cols, data))
    }

    pub fn vstack(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(CovrepError::shape("vstack", self.cols, rhs.cols));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Self::from_vec_unchecked(self.rows + rhs.rows, self.cols, data))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out[(self.rows + i, self.cols + j)] = rhs[(i, j)];
            }
        }
        out
    }

    /// Frobenius norm of `self^* − self`.
    pub fn hermitian_defect(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Frobenius distance, panicking on shape mismatch.
    pub fn dist(&self, rhs: &Self) -> f64 {
        assert_eq!(self.shape(), rhs.shape(), "dist shape");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on shape mismatch; use [`ComplexMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape {}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        self.mul_unchecked(rhs)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                if z.im == 0.0 {
                    write!(f, "{:>10.4} ", z.re)?;
                } else {
                    write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn rejects_bad_length_and_nan() {
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        let err = ComplexMatrix::new(1, 2, vec![ZERO, c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, CovrepError::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn kron_identity_one_is_noop() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, -1.0)]]).unwrap();
        assert_eq!(ComplexMatrix::identity(1).kron(&m), m);
    }

    #[test]
    fn kron_identity_two_scalar() {
        let two = ComplexMatrix::from_real(1, 1, &[2.0]).unwrap();
        assert_eq!(ComplexMatrix::identity(2).kron(&two), ComplexMatrix::diag_real(&[2.0, 2.0]));
    }

    #[test]
    fn blockwise_kron_products_match_dense() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(2.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)],
            vec![c(0.0, 0.0), c(3.0, -1.0), c(1.0, 1.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 2.0), c(1.0, -1.0)],
            vec![c(-2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let dense = &a * &ComplexMatrix::identity(2).kron(&b);
        assert!(a.mul_kron_identity(2, &b).dist(&dense) < 1e-14);
        assert_eq!(b.kron_identity_left(3), ComplexMatrix::identity(3).kron(&b));

        let x = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0)],
            vec![c(2.0, 1.0)],
            vec![c(0.0, 1.0)],
            vec![c(-1.0, 0.0)],
            vec![c(0.5, 0.5)],
            vec![c(3.0, 0.0)],
        ])
        .unwrap();
        let dense = &ComplexMatrix::identity(2).kron(&b) * &x;
        assert!(ComplexMatrix::kron_identity_mul(2, &b, &x).dist(&dense) < 1e-14);
    }

    #[test]
    fn adjoint_mul_matches_explicit() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(1.0, 3.0)]]).unwrap();
        let b = ComplexMatrix::from_rows(&[vec![c(0.5, 0.0)], vec![c(1.0, -2.0)]]).unwrap();
        assert!(a.adjoint_mul(&b).dist(&(&a.adjoint() * &b)) < 1e-15);
    }
}
