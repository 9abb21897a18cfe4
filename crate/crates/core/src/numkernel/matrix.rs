use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar field a [`Matrix`] is defined over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Smallest field containing both operands.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

pub(crate) type CMat = DMatrix<Complex64>;

/// Dense matrix over ℝ or ℂ with finite entries.
///
/// Storage is always complex; a [`Field::Real`] matrix has identically zero
/// imaginary parts. Binary operators require both operands to carry the same
/// field tag and panic otherwise, like dimension mismatches do.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    inner: CMat,
    field: Field,
}

impl Matrix {
    /// Wraps `inner`, rejecting non-finite entries. A real-tagged matrix has
    /// its imaginary parts cleared.
    pub fn from_inner(mut inner: CMat, field: Field) -> Result<Self> {
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let z = inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if field == Field::Real {
                    inner[(i, j)].im = 0.0;
                }
            }
        }
        Ok(Self { inner, field })
    }

    pub fn from_real_row_major(nrows: usize, ncols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {nrows}x{ncols} matrix", data.len())));
        }
        let inner = CMat::from_fn(nrows, ncols, |i, j| Complex64::new(data[i * ncols + j], 0.0));
        Self::from_inner(inner, Field::Real)
    }

    pub fn from_complex_row_major(nrows: usize, ncols: usize, data: &[Complex64]) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {nrows}x{ncols} matrix", data.len())));
        }
        let inner = CMat::from_fn(nrows, ncols, |i, j| data[i * ncols + j]);
        Self::from_inner(inner, Field::Complex)
    }

    /// Builds a real matrix from rows; all rows must have equal length.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_real_row_major(nrows, ncols, &flat)
    }

    pub fn from_real_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let inner = CMat::from_fn(nrows, ncols, |i, j| Complex64::new(f(i, j), 0.0));
        Self::from_inner(inner, Field::Real)
    }

    /// Wraps a matrix produced by internal arithmetic. Entries are not
    /// re-validated; callers that can overflow use [`Matrix::from_inner`].
    pub(crate) fn wrap(inner: CMat, field: Field) -> Self {
        let mut m = Self { inner, field };
        if field == Field::Real {
            m.inner.iter_mut().for_each(|z| z.im = 0.0);
        }
        m
    }

    /// Largest imaginary part in absolute value.
    pub fn max_imag(&self) -> f64 {
        self.inner.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Retags the matrix; going to [`Field::Real`] drops imaginary parts.
    pub fn with_field(&self, field: Field) -> Self {
        Self::wrap(self.inner.clone(), field)
    }

    pub fn negate_column(&mut self, j: usize) {
        self.inner.column_mut(j).iter_mut().for_each(|z| *z = -*z);
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Self::wrap(CMat::identity(n, n), field)
    }

    pub fn zeros(nrows: usize, ncols: usize, field: Field) -> Self {
        Self::wrap(CMat::zeros(nrows, ncols), field)
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64], field: Field) -> Self {
        let n = values.len();
        let mut m = CMat::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(*v, 0.0);
        }
        Self::wrap(m, field)
    }

    pub fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    /// Real part of entry `(i, j)`.
    pub fn re(&self, i: usize, j: usize) -> f64 {
        self.inner[(i, j)].re
    }

    pub fn inner(&self) -> &CMat {
        &self.inner
    }

    pub fn into_inner(self) -> CMat {
        self.inner
    }

    /// Same entries, tagged complex.
    pub fn to_complex(&self) -> Self {
        Self { inner: self.inner.clone(), field: Field::Complex }
    }

    /// Conjugate transpose (plain transpose for real matrices).
    pub fn adjoint(&self) -> Self {
        Self::wrap(self.inner.adjoint(), self.field)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::wrap(self.inner.map(|z| z * s), self.field)
    }

    pub fn norm_fro(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.ncols()).map(|j| self.inner.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Copy of the `nr x nc` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::wrap(self.inner.view((r0, c0), (nr, nc)).into_owned(), self.field)
    }

    /// Overwrites the block starting at `(r0, c0)` with `b`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        assert_eq!(self.field, b.field, "field mismatch in set_block");
        self.inner.view_mut((r0, c0), b.shape()).copy_from(&b.inner);
    }

    /// Columns `c0..c0+nc`.
    pub fn columns(&self, c0: usize, nc: usize) -> Self {
        self.block(0, c0, self.nrows(), nc)
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diag(a: &Matrix, b: &Matrix) -> Self {
        let field = a.field.join(b.field);
        let (ra, ca) = a.shape();
        let (rb, cb) = b.shape();
        let mut m = CMat::zeros(ra + rb, ca + cb);
        m.view_mut((0, 0), (ra, ca)).copy_from(&a.inner);
        m.view_mut((ra, ca), (rb, cb)).copy_from(&b.inner);
        Self::wrap(m, field)
    }

    /// Determinant via LU.
    pub fn determinant(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        Ok(self.inner.clone().lu().determinant())
    }

    pub fn try_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let inv = self.inner.clone().try_inverse().ok_or(Error::Singular { column: 0, residual: 0.0 })?;
        Matrix::from_inner(inv, self.field)
    }

    /// `‖A − B‖_F`.
    pub fn distance(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in distance");
        (&self.inner - &other.inner).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Checked product: errors on dimension or field mismatch.
    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.ncols() != rhs.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows(),
                self.ncols(),
                rhs.nrows(),
                rhs.ncols()
            )));
        }
        Ok(Self::wrap(&self.inner * &rhs.inner, self.field))
    }

    /// Row-major real parts, convenient for serialization of real matrices.
    pub fn to_real_rows(&self) -> Vec<Vec<f64>> {
        (0..self.nrows()).map(|i| (0..self.ncols()).map(|j| self.inner[(i, j)].re).collect()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{:?}> {}x{}", self.field, self.nrows(), self.ncols())?;
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols())
                .map(|j| {
                    let z = self.inner[(i, j)];
                    match self.field {
                        Field::Real => format!("{:>12.6}", z.re),
                        Field::Complex => format!("{:>10.5}{:+.5}i", z.re, z.im),
                    }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn check_field(a: &Matrix, b: &Matrix, op: &str) {
    assert_eq!(a.field, b.field, "field mismatch in {op}");
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        check_field(self, rhs, "mul");
        Matrix::wrap(&self.inner * &rhs.inner, self.field)
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        check_field(self, rhs, "add");
        Matrix::wrap(&self.inner + &rhs.inner, self.field)
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        check_field(self, rhs, "sub");
        Matrix::wrap(&self.inner - &rhs.inner, self.field)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::wrap(-&self.inner, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let err = Matrix::from_real_row_major(1, 2, &[1.0, f64::NAN]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        let err = Matrix::from_real_row_major(1, 1, &[f64::INFINITY]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn rejects_wrong_entry_count() {
        assert!(matches!(Matrix::from_real_row_major(2, 2, &[1.0, 2.0, 3.0]), Err(Error::DimensionMismatch(_))));
        assert!(Matrix::from_real_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn try_mul_checks_field_and_shape() {
        let a = Matrix::identity(2, Field::Real);
        let b = Matrix::identity(2, Field::Complex);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::FieldMismatch);
        let c = Matrix::zeros(3, 1, Field::Real);
        assert!(matches!(a.try_mul(&c), Err(Error::DimensionMismatch(_))));
        assert_eq!(a.try_mul(&a).unwrap(), a);
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn operator_panics_on_field_mismatch() {
        let _ = &Matrix::identity(2, Field::Real) * &Matrix::identity(2, Field::Complex);
    }

    #[test]
    fn block_diag_and_blocks() {
        let a = Matrix::diag(&[1.0, 2.0], Field::Real);
        let b = Matrix::diag(&[3.0], Field::Real);
        let d = Matrix::block_diag(&a, &b);
        assert_eq!(d, Matrix::diag(&[1.0, 2.0, 3.0], Field::Real));
        assert_eq!(d.block(2, 2, 1, 1), b);
    }
}
