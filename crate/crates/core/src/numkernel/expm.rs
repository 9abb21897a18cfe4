//! Matrix exponential by scaling and squaring with a degree-13 Padé
//! approximant (Higham 2005 parameters).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{CMat, Matrix};
use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// One-norm threshold below which the [13/13] Padé approximant is accurate
/// to unit roundoff.
const THETA_13: f64 = 5.371920351148152;

/// `e^X` for a square matrix.
pub fn expm(x: &Matrix) -> Result<Matrix> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!("expm of a {}x{} matrix", x.nrows(), x.ncols())));
    }
    let n = x.nrows();
    if n == 0 {
        return Ok(x.clone());
    }
    let norm = x.norm_one();
    let squarings = if norm > THETA_13 { (norm / THETA_13).log2().ceil() as i32 } else { 0 };
    let a: CMat = x.inner().map(|z| z * 2f64.powi(-squarings));

    let ident = CMat::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let c = |k: usize| Complex64::new(PADE13[k], 0.0);

    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9)) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &ident * c(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8)) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &ident * c(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r: DMatrix<Complex64> =
        q.lu().solve(&p).ok_or(Error::NoConvergence("singular Padé denominator in expm"))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Matrix::from_inner(r, x.field())
}
