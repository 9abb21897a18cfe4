use num_complex::Complex64;
use serde::Serialize;

use super::matrix::{CMat, Matrix};
use crate::error::{Error, Result};

/// Block partition of a square matrix together with the blocks forced to zero.
///
/// Only strictly lower block-triangular zero patterns are accepted, so the
/// matrices conforming to a shape form a parabolic subgroup of `GL`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockShape {
    row_blocks: Vec<usize>,
    col_blocks: Vec<usize>,
    zero_pattern: Vec<(usize, usize)>,
}

impl BlockShape {
    pub fn new(row_blocks: Vec<usize>, col_blocks: Vec<usize>, zero_pattern: Vec<(usize, usize)>) -> Result<Self> {
        if row_blocks.iter().sum::<usize>() != col_blocks.iter().sum::<usize>() {
            return Err(Error::DimensionMismatch("block sizes of rows and columns differ".into()));
        }
        if row_blocks.iter().chain(&col_blocks).any(|&b| b == 0) {
            return Err(Error::DimensionMismatch("empty block".into()));
        }
        for &(bi, bj) in &zero_pattern {
            if bi >= row_blocks.len() || bj >= col_blocks.len() || bi <= bj {
                return Err(Error::DimensionMismatch(format!(
                    "zero block ({bi}, {bj}) is not strictly lower block-triangular"
                )));
            }
        }
        Ok(Self { row_blocks, col_blocks, zero_pattern })
    }

    /// Block upper-triangular shape with the same partition on both sides:
    /// every block below the diagonal is zero.
    pub fn parabolic(blocks: &[usize]) -> Result<Self> {
        let k = blocks.len();
        let zeros = (0..k).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        Self::new(blocks.to_vec(), blocks.to_vec(), zeros)
    }

    pub fn dim(&self) -> usize {
        self.row_blocks.iter().sum()
    }

    pub fn row_blocks(&self) -> &[usize] {
        &self.row_blocks
    }

    pub fn col_blocks(&self) -> &[usize] {
        &self.col_blocks
    }

    pub fn zero_pattern(&self) -> &[(usize, usize)] {
        &self.zero_pattern
    }

    fn offsets(sizes: &[usize]) -> Vec<usize> {
        let mut acc = 0;
        sizes
            .iter()
            .map(|s| {
                let o = acc;
                acc += s;
                o
            })
            .collect()
    }

    /// Largest entry of `b` inside a forced-zero block.
    pub fn zero_pattern_defect(&self, b: &Matrix) -> f64 {
        let ro = Self::offsets(&self.row_blocks);
        let co = Self::offsets(&self.col_blocks);
        self.zero_pattern
            .iter()
            .map(|&(bi, bj)| b.block(ro[bi], co[bj], self.row_blocks[bi], self.col_blocks[bj]).max_abs())
            .fold(0.0, f64::max)
    }

    pub fn conforms(&self, b: &Matrix, tol: f64) -> bool {
        b.shape() == (self.dim(), self.dim()) && self.zero_pattern_defect(b) <= tol
    }
}

/// Result of [`block_qr`]: `Q = A · Rinv` with `Q` unitary and `R = Rinv⁻¹`
/// block upper-triangular.
#[derive(Debug, Clone)]
pub struct BlockQr {
    pub q: Matrix,
    pub r_inv: Matrix,
    pub r: Matrix,
}

/// Relative Gram–Schmidt residual below which a column counts as dependent.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Factors `A = Q · R` by modified Gram–Schmidt with one re-orthogonalization
/// pass, columns taken left to right. `R` is upper triangular with a positive
/// real diagonal, hence conforms to any parabolic `shape`; `Rinv = R⁻¹` is the
/// parabolic element carrying `A` into the compact group.
pub fn block_qr(a: &Matrix, shape: &BlockShape) -> Result<BlockQr> {
    if !a.is_square() || a.nrows() != shape.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for a block shape of size {}",
            a.nrows(),
            a.ncols(),
            shape.dim()
        )));
    }
    let (q, r) = mgs(a.inner())?;
    let r_inv = upper_triangular_inverse(&r);
    Ok(BlockQr {
        q: Matrix::from_inner(q, a.field())?,
        r_inv: Matrix::from_inner(r_inv, a.field())?,
        r: Matrix::from_inner(r, a.field())?,
    })
}

/// Thin factorization of an `n × k` matrix with `k ≤ n`: orthonormal `Q`
/// (`n × k`) and `R` (`k × k`) upper triangular with positive diagonal.
pub fn thin_qr(a: &Matrix) -> Result<(Matrix, Matrix)> {
    if a.ncols() > a.nrows() {
        return Err(Error::DimensionMismatch(format!("thin QR of a {}x{} matrix", a.nrows(), a.ncols())));
    }
    let (q, r) = mgs(a.inner())?;
    Ok((Matrix::from_inner(q, a.field())?, Matrix::from_inner(r, a.field())?))
}

fn mgs(src: &CMat) -> Result<(CMat, CMat)> {
    let (n, k) = src.shape();
    let mut q = CMat::zeros(n, k);
    let mut r = CMat::zeros(k, k);
    for j in 0..k {
        let mut v = src.column(j).into_owned();
        let col_norm = v.norm();
        for _ in 0..2 {
            for i in 0..j {
                let qi = q.column(i);
                let c = qi.dotc(&v);
                r[(i, j)] += c;
                v -= qi * c;
            }
        }
        let norm = v.norm();
        if col_norm == 0.0 || norm <= SINGULAR_TOL * col_norm {
            return Err(Error::Singular { column: j, residual: if col_norm == 0.0 { 0.0 } else { norm / col_norm } });
        }
        r[(j, j)] = Complex64::new(norm, 0.0);
        q.set_column(j, &(v / Complex64::new(norm, 0.0)));
    }
    Ok((q, r))
}

fn upper_triangular_inverse(r: &CMat) -> CMat {
    let n = r.nrows();
    let mut inv = CMat::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = Complex64::new(1.0, 0.0) / r[(j, j)];
        for i in (0..j).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in i + 1..=j {
                s += r[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / r[(i, i)];
        }
    }
    inv
}
