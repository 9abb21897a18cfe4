//! SVD and Hermitian eigendecomposition. The SVD is a one-sided Jacobi
//! iteration; the eigendecomposition comes from nalgebra. Factors are sorted,
//! completed to full unitary matrices and real inputs stay real.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{CMat, Field, Matrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 10_000;
const JACOBI_SWEEPS: usize = 100;

/// Full singular value decomposition `Y = U · Σ · Vᴴ`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m × m` unitary.
    pub u: Matrix,
    /// `min(m, n)` values, descending and nonnegative.
    pub singular_values: Vec<f64>,
    /// `n × n` unitary.
    pub v: Matrix,
}

impl Svd {
    /// The `m × n` matrix `Σ`.
    pub fn sigma(&self) -> Matrix {
        let (m, n) = (self.u.nrows(), self.v.nrows());
        let mut s = CMat::zeros(m, n);
        for (i, v) in self.singular_values.iter().enumerate() {
            s[(i, i)] = Complex64::new(*v, 0.0);
        }
        Matrix::wrap(s, self.u.field())
    }

    pub fn reconstruct(&self) -> Matrix {
        &(&self.u * &self.sigma()) * &self.v.adjoint()
    }

    /// Ratio of smallest to largest singular value (0 for the zero matrix).
    pub fn condition_ratio(&self) -> f64 {
        match (self.singular_values.first(), self.singular_values.last()) {
            (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
            _ => 0.0,
        }
    }
}

pub fn svd(y: &Matrix) -> Result<Svd> {
    let (m, n) = y.shape();
    let k = m.min(n);
    if k == 0 {
        return Ok(Svd {
            u: Matrix::identity(m, y.field()),
            singular_values: Vec::new(),
            v: Matrix::identity(n, y.field()),
        });
    }
    let (u_thin, values, v_thin) = if m >= n {
        jacobi_svd(y.inner().clone())?
    } else {
        let (v, s, u) = jacobi_svd(y.inner().adjoint())?;
        (u, s, v)
    };
    if values.iter().any(|s| !s.is_finite()) {
        return Err(Error::NoConvergence("svd produced non-finite values"));
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut u_sorted = CMat::zeros(m, k);
    let mut v_sorted = CMat::zeros(n, k);
    let mut sorted = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        u_sorted.set_column(dst, &u_thin.column(src));
        v_sorted.set_column(dst, &v_thin.column(src));
        sorted.push(values[src].max(0.0));
    }
    let nonzero = sorted.iter().take_while(|&&v| v > 0.0).count();
    Ok(Svd {
        u: Matrix::wrap(complete_orthonormal(&u_sorted.columns(0, nonzero).into_owned()), y.field()),
        singular_values: sorted,
        v: Matrix::wrap(complete_orthonormal(&v_sorted.columns(0, nonzero).into_owned()), y.field()),
    })
}

/// One-sided Jacobi SVD of a tall `m × n` matrix: returns thin `U`
/// (`m × n`), unsorted singular values and `V` (`n × n`). Columns of `U`
/// belonging to zero singular values are left zero.
fn jacobi_svd(mut a: CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let (m, n) = a.shape();
    let mut v = CMat::identity(n, n);
    let tol = (m as f64).sqrt() * f64::EPSILON;
    let mut converged = false;
    for _ in 0..JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g <= tol * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                if phase != Complex64::new(1.0, 0.0) {
                    a.column_mut(q).iter_mut().for_each(|z| *z *= phase);
                    v.column_mut(q).iter_mut().for_each(|z| *z *= phase);
                }
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let (xp, xq) = (mat[(i, p)], mat[(i, q)]);
                        mat[(i, p)] = xp * c - xq * s;
                        mat[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("svd"));
    }
    let mut u = CMat::zeros(m, n);
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let s = a.column(j).norm();
        if s > 0.0 {
            u.set_column(j, &(a.column(j) / Complex64::new(s, 0.0)));
        }
        values.push(s);
    }
    Ok((u, values, v))
}

/// Extends orthonormal columns `q` (`m × k`) to an `m × m` unitary matrix,
/// greedily adding the standard basis vector with the largest residual.
fn complete_orthonormal(q: &CMat) -> CMat {
    let (m, k) = q.shape();
    let mut cols: Vec<nalgebra::DVector<Complex64>> = (0..k).map(|j| q.column(j).into_owned()).collect();
    while cols.len() < m {
        let mut best: Option<(f64, nalgebra::DVector<Complex64>)> = None;
        for e in 0..m {
            let mut r = nalgebra::DVector::<Complex64>::zeros(m);
            r[e] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in &cols {
                    let proj = c.dotc(&r);
                    r -= c * proj;
                }
            }
            let norm = r.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b + 1e-12) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("m > 0");
        cols.push(r / Complex64::new(norm, 0.0));
    }
    CMat::from_columns(&cols)
}

/// Eigendecomposition `S = W · diag(λ) · Wᴴ` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl HermitianEigen {
    /// `W · diag(f(λ)) · Wᴴ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let d: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let field = self.eigenvectors.field();
        &(&self.eigenvectors * &Matrix::diag(&d, field)) * &self.eigenvectors.adjoint()
    }
}

/// Deviation `max |S − Sᴴ|`.
pub fn hermitian_defect(s: &Matrix) -> f64 {
    (s.inner() - s.inner().adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermitian_eigen(s: &Matrix, tol: f64) -> Result<HermitianEigen> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch("eigen of a non-square matrix".into()));
    }
    let defect = hermitian_defect(s);
    if defect > tol * s.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = s.nrows();
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym: CMat = (s.inner() + s.inner().adjoint()).map(|z| z * 0.5);
    let (values, vectors): (Vec<f64>, CMat) = match s.field() {
        Field::Real => {
            let re: DMatrix<f64> = sym.map(|z| z.re);
            let e = re.try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence("symmetric eigen"))?;
            (e.eigenvalues.iter().copied().collect(), e.eigenvectors.map(|x| Complex64::new(x, 0.0)))
        }
        Field::Complex => {
            let e = sym.try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence("hermitian eigen"))?;
            (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut w = CMat::zeros(n, n);
    let mut sorted = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        w.set_column(dst, &vectors.column(src));
        sorted.push(values[src]);
    }
    Ok(HermitianEigen { eigenvalues: sorted, eigenvectors: Matrix::wrap(w, s.field()) })
}

/// True iff `S` is Hermitian within `tol` and its smallest eigenvalue exceeds `tol`.
pub fn is_positive_definite(s: &Matrix, tol: f64) -> Result<bool> {
    let e = hermitian_eigen(s, tol)?;
    Ok(e.eigenvalues.first().is_none_or(|&l| l > tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unitary_defect(q: &Matrix) -> f64 {
        (&q.adjoint() * q).distance(&Matrix::identity(q.ncols(), q.field()))
    }

    #[test]
    fn clustered_singular_values_reconstruct() {
        let y = Matrix::from_real_rows(&[
            vec![0.61, -0.27, 0.33, 0.05],
            vec![0.12, 0.58, -0.21, 0.40],
            vec![-0.30, 0.19, 0.52, -0.08],
        ])
        .unwrap();
        let d = svd(&y).unwrap();
        assert!(d.reconstruct().distance(&y) < 1e-14);
        let w = d.singular_values[0] * 0.999_999;
        let close = Matrix::diag(&[d.singular_values[0], w, 0.2], Field::Real);
        let y2 = &(&d.u.columns(0, 3) * &close) * &d.v.columns(0, 3).adjoint();
        let d2 = svd(&y2).unwrap();
        assert!(d2.reconstruct().distance(&y2) < 1e-14);
        assert!(unitary_defect(&d2.u) < 1e-14 && unitary_defect(&d2.v) < 1e-14);
    }

    #[test]
    fn complex_svd_reconstructs() {
        let data: Vec<Complex64> =
            (0..6).map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos())).collect();
        let y = Matrix::from_complex_row_major(2, 3, &data).unwrap();
        let d = svd(&y).unwrap();
        assert!(d.reconstruct().distance(&y) < 1e-14);
        assert!(unitary_defect(&d.u) < 1e-14 && unitary_defect(&d.v) < 1e-14);
    }

    #[test]
    fn zero_matrix() {
        let d = svd(&Matrix::zeros(2, 3, Field::Real)).unwrap();
        assert_eq!(d.singular_values, vec![0.0, 0.0]);
        assert!(unitary_defect(&d.u) < 1e-12 && unitary_defect(&d.v) < 1e-12);
    }

    #[test]
    fn diagonal_matrix() {
        let d = svd(&Matrix::diag(&[3.0, 1.0], Field::Real)).unwrap();
        assert_eq!(d.singular_values.len(), 2);
        assert!((d.singular_values[0] - 3.0).abs() < 1e-15);
        assert!((d.singular_values[1] - 1.0).abs() < 1e-15);
        for i in 0..2 {
            assert!((d.u.re(i, i).abs() - 1.0).abs() < 1e-15);
            assert!((d.v.re(i, i).abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tall_matrix_matches_gram_eigenvalues() {
        // YᵀY = diag(0.36, 0.04): characteristic polynomial λ² − 0.4λ + 0.0144
        let y = Matrix::from_real_rows(&[vec![0.6, 0.0], vec![0.0, 0.2], vec![0.0, 0.0]]).unwrap();
        let (b, c) = (-0.4f64, 0.0144f64);
        let disc = (b * b - 4.0 * c).sqrt();
        let want = [((-b + disc) / 2.0).sqrt(), ((-b - disc) / 2.0).sqrt()];
        let d = svd(&y).unwrap();
        assert!((d.singular_values[0] - want[0]).abs() < 1e-15);
        assert!((d.singular_values[1] - want[1]).abs() < 1e-15);
        assert_eq!(d.u.shape(), (3, 3));
        assert!(unitary_defect(&d.u) < 1e-12);
        assert!(d.reconstruct().distance(&y) <= 1e-11 * y.norm_fro());
    }

    #[test]
    fn complex_reconstruction() {
        let data: Vec<Complex64> = (0..6).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos())).collect();
        let y = Matrix::from_complex_row_major(2, 3, &data).unwrap();
        let d = svd(&y).unwrap();
        assert!(unitary_defect(&d.u) < 1e-12);
        assert!(unitary_defect(&d.v) < 1e-12);
        assert!(d.reconstruct().distance(&y) <= 1e-11 * y.norm_fro());
        assert!(d.singular_values[0] >= d.singular_values[1]);
    }

    #[test]
    fn positive_definite_cases() {
        assert!(is_positive_definite(&Matrix::identity(3, Field::Real), 1e-10).unwrap());
        assert!(!is_positive_definite(&Matrix::diag(&[1.0, -0.1], Field::Real), 1e-10).unwrap());
        let s = Matrix::from_real_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(is_positive_definite(&s, 1e-10), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn positive_definite_near_unit_singular_value() {
        // eigenvalues of I − YᵀY are 1 − σᵢ²
        for (sigma, expect) in [(0.999, true), (1.001, false)] {
            let y = Matrix::from_real_rows(&[vec![sigma, 0.0], vec![0.0, 0.3]]).unwrap();
            let s = &Matrix::identity(2, Field::Real) - &(&y.adjoint() * &y);
            assert_eq!(is_positive_definite(&s, 1e-10).unwrap(), expect);
        }
    }
}
