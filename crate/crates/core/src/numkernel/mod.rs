//! Dense linear algebra over ℝ and ℂ: the matrix type, exponential,
//! SVD and Hermitian eigen, block QR and subspace projectors.

mod decomp;
mod expm;
mod matrix;
mod projector;
mod qr;

pub use decomp::{hermitian_defect, hermitian_eigen, is_positive_definite, svd, HermitianEigen, Svd};
pub use expm::expm;
pub(crate) use matrix::CMat;
pub use matrix::{Field, Matrix};
pub use projector::{ensure_full_column_rank, orthonormal_frame, projector, projector_distance, RANK_TOL};
pub use qr::{block_qr, thin_qr, BlockQr, BlockShape, SINGULAR_TOL};
