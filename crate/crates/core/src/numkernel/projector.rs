use super::decomp::svd;
use super::matrix::Matrix;
use super::qr::thin_qr;
use crate::error::{Error, Result};

/// Column rank is declared deficient below this ratio of extreme singular values.
pub const RANK_TOL: f64 = 1e-10;

pub fn ensure_full_column_rank(l: &Matrix) -> Result<()> {
    if l.ncols() == 0 || l.ncols() > l.nrows() {
        return Err(Error::RankDeficient(0.0));
    }
    let ratio = svd(l)?.condition_ratio();
    if ratio <= RANK_TOL {
        return Err(Error::RankDeficient(ratio));
    }
    Ok(())
}

/// Orthonormal basis `Q = L R⁻¹` of the column span; `det(QᴴL) > 0`, so the
/// orientation of `L` is kept.
pub fn orthonormal_frame(l: &Matrix) -> Result<Matrix> {
    ensure_full_column_rank(l)?;
    thin_qr(l).map(|(q, _)| q).map_err(|e| match e {
        Error::Singular { residual, .. } => Error::RankDeficient(residual),
        other => other,
    })
}

/// Orthogonal projector onto the column span.
pub fn projector(l: &Matrix) -> Result<Matrix> {
    let q = orthonormal_frame(l)?;
    Ok(&q * &q.adjoint())
}

/// `‖P₁ − P₂‖_F` for the orthogonal projectors onto the column spans.
pub fn projector_distance(l1: &Matrix, l2: &Matrix) -> Result<f64> {
    if l1.shape() != l2.shape() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", l1.shape(), l2.shape())));
    }
    if l1.field() != l2.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(projector(l1)?.distance(&projector(l2)?))
}
