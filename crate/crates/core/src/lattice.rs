//! Unit lattices of maximal flats and the cut radius they determine.
//!
//! A lattice is stored as generator vectors in an orthonormal coordinate
//! system of the flat together with their Gram matrix. Points of the flat are
//! usually handled in lattice coordinates: `X = Σ xᵢ Aᵢ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{Field, Matrix};

/// Relative tolerance for the orthonormality verdict of the supplied generators.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeBasis {
    generators: Vec<Vec<f64>>,
    gram: Vec<Vec<f64>>,
}

/// Outcome of a cut-radius query for a unit direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutRadiusResult {
    /// Distance to the tangent cut locus, in metric units.
    pub radius: f64,
    /// Lattice vector `Σ mᵢAᵢ` attaining the minimum.
    pub minimizer: Vec<i64>,
    pub used_closed_form: bool,
}

impl LatticeBasis {
    /// Generators given in orthonormal flat coordinates; there must be as many
    /// as the dimension of the flat and they must be linearly independent.
    pub fn new(generators: Vec<Vec<f64>>) -> Result<Self> {
        let r = generators.len();
        if r == 0 {
            return Err(Error::InvalidLattice("no generators".into()));
        }
        if generators.iter().any(|g| g.len() != r) {
            return Err(Error::InvalidLattice(format!("expected {r} generators of length {r}")));
        }
        if generators.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidLattice("non-finite generator entry".into()));
        }
        let gram: Vec<Vec<f64>> = generators.iter().map(|a| generators.iter().map(|b| dot(a, b)).collect()).collect();
        let basis = Self { generators, gram };
        let eig = basis.gram_matrix().symmetric_eigen();
        let (lo, hi) = eig.eigenvalues.iter().fold((f64::INFINITY, 0f64), |(lo, hi), &l| (lo.min(l), hi.max(l)));
        if lo <= 1e-12 * hi {
            return Err(Error::InvalidLattice("generators are linearly dependent".into()));
        }
        Ok(basis)
    }

    /// Integral lattice of `SU(3)`: `2π·diag(i, −i, 0)` and `2π·diag(0, i, −i)`
    /// under `⟨X, Y⟩ = −½ tr(XY)`, a scaled `A₂` root lattice.
    pub fn su3() -> Self {
        let tau = 2.0 * std::f64::consts::PI;
        let diag = |d: [f64; 3]| {
            let mut m = DMatrix::<Complex64>::zeros(3, 3);
            for (i, v) in d.iter().enumerate() {
                m[(i, i)] = Complex64::new(0.0, *v);
            }
            Matrix::from_inner(m, Field::Complex).expect("finite entries")
        };
        let inner = |x: &Matrix, y: &Matrix| -0.5 * (x * y).inner().trace().re;
        let s3 = 3f64.sqrt();
        let frame = [diag([1.0, -1.0, 0.0]), diag([1.0 / s3, 1.0 / s3, -2.0 / s3])];
        let gens = [diag([tau, -tau, 0.0]), diag([0.0, tau, -tau])];
        let vectors = gens.iter().map(|g| frame.iter().map(|e| inner(g, e)).collect()).collect();
        Self::new(vectors).expect("independent generators")
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    pub fn generator_norms(&self) -> Vec<f64> {
        (0..self.rank()).map(|i| self.gram[i][i].sqrt()).collect()
    }

    fn gram_matrix(&self) -> DMatrix<f64> {
        let r = self.rank();
        DMatrix::from_fn(r, r, |i, j| self.gram[i][j])
    }

    /// Orthonormal flat coordinates of `Σ xᵢAᵢ`.
    pub fn to_metric(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x)?;
        let r = self.rank();
        Ok((0..r).map(|j| (0..r).map(|i| x[i] * self.generators[i][j]).sum()).collect())
    }

    /// Lattice coordinates of the flat vector with orthonormal coordinates `u`.
    pub fn to_lattice(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        let r = self.rank();
        let g = DMatrix::from_fn(r, r, |j, i| self.generators[i][j]);
        let x = g
            .lu()
            .solve(&DVector::from_column_slice(u))
            .ok_or_else(|| Error::InvalidLattice("singular generator matrix".into()))?;
        Ok(x.iter().copied().collect())
    }

    /// `‖Σ xᵢAᵢ‖`.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x)?;
        Ok(self.quadratic(x).max(0.0).sqrt())
    }

    fn quadratic(&self, x: &[f64]) -> f64 {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|j| x[i] * self.gram[i][j] * x[j]).sum::<f64>()).sum()
    }

    /// `cᵢ = ⟨X, Aᵢ⟩` for `X = Σ xⱼAⱼ`.
    fn pairings(&self, x: &[f64]) -> Vec<f64> {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|j| self.gram[i][j] * x[j]).sum()).collect()
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a rank {} lattice",
                x.len(),
                self.rank()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::DimensionMismatch("non-finite coordinate".into()));
        }
        Ok(())
    }

    /// Unit-norm copy of `x`, in lattice coordinates.
    fn normalized(&self, x: &[f64]) -> Result<Vec<f64>> {
        let norm = self.norm(x)?;
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(x.iter().map(|v| v / norm).collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// True iff the Gram matrix is `α²·I` within relative tolerance `tol`.
pub fn is_orthonormal(basis: &LatticeBasis, tol: f64) -> bool {
    let r = basis.rank();
    let alpha2 = (0..r).map(|i| basis.gram[i][i]).sum::<f64>() / r as f64;
    (0..r).all(|i| {
        (0..r).all(|j| {
            let want = if i == j { alpha2 } else { 0.0 };
            (basis.gram[i][j] - want).abs() <= tol * alpha2
        })
    })
}

/// Cut radius `α² / (2 max|⟨X, Aᵢ⟩|)` of an orthonormal lattice; the input is
/// normalized first. In lattice coordinates this is `1 / (2 max|x̂ᵢ|)`.
pub fn cut_radius_closed(basis: &LatticeBasis, x: &[f64]) -> Result<f64> {
    if !is_orthonormal(basis, ORTHONORMAL_TOL) {
        return Err(Error::NonOrthonormalLattice);
    }
    let unit = basis.normalized(x)?;
    let alpha2 = basis.gram[0][0];
    let cmax = basis.pairings(&unit).iter().fold(0f64, |m, c| m.max(c.abs()));
    Ok(alpha2 / (2.0 * cmax))
}

/// Naive `1 / (2 max|x̂ᵢ|)` in generator coordinates, valid only for
/// orthonormal lattices; kept to expose the failure on the others.
pub fn cut_radius_naive(basis: &LatticeBasis, x: &[f64]) -> Result<f64> {
    let unit = basis.normalized(x)?;
    let xmax = unit.iter().fold(0f64, |m, v| m.max(v.abs()));
    Ok(1.0 / (2.0 * xmax))
}

/// Exact `min ⟨A, A⟩ / (2|⟨X, A⟩|)` over nonzero lattice vectors `A`.
///
/// Enumerates integer vectors by increasing `|m|₁`, keeping one of each
/// `±m` pair. Since `‖X‖ = 1`, a vector can only improve on `best` if
/// `|A| ≤ 2·best`, and the shell `s` is skipped entirely once
/// `√λ_min · s / √r > 2·best`.
pub fn cut_radius_brute(basis: &LatticeBasis, x: &[f64]) -> Result<CutRadiusResult> {
    let unit = basis.normalized(x)?;
    let r = basis.rank();
    let c = basis.pairings(&unit);
    let scale = basis.generator_norms().iter().fold(0f64, |m, v| m.max(*v));
    if c.iter().all(|ci| ci.abs() <= 1e-14 * scale) {
        return Err(Error::DegenerateDirection);
    }

    let mut best: Option<(f64, Vec<i64>)> = None;
    let consider = |m: &[i64], best: &mut Option<(f64, Vec<i64>)>| {
        let mf: Vec<f64> = m.iter().map(|&v| v as f64).collect();
        let pair = dot(&mf, &c).abs();
        if pair <= 1e-14 * scale {
            return;
        }
        let radius = basis.quadratic(&mf) / (2.0 * pair);
        let better = match best {
            None => true,
            Some((b, bm)) => {
                let tie = (radius - *b).abs() <= 1e-12 * b.abs();
                (!tie && radius < *b) || (tie && m < bm.as_slice())
            }
        };
        if better {
            *best = Some((radius, m.to_vec()));
        }
    };

    let lambda_min = basis.gram_matrix().symmetric_eigen().eigenvalues.iter().fold(f64::INFINITY, |m, &l| m.min(l));
    let mut shell = 1i64;
    loop {
        if let Some((b, _)) = &best {
            if lambda_min.sqrt() * shell as f64 / (r as f64).sqrt() > 2.0 * b {
                break;
            }
        }
        let bound = best.as_ref().map(|(b, _)| 4.0 * b * b);
        for_each_shell_vector(r, shell, &mut |m| {
            if let Some(bound) = bound {
                let mf: Vec<f64> = m.iter().map(|&v| v as f64).collect();
                if basis.quadratic(&mf) > bound * (1.0 + 1e-12) {
                    return;
                }
            }
            consider(m, &mut best);
        });
        shell += 1;
    }
    let (radius, minimizer) = best.expect("a generator pairs nontrivially with X");
    Ok(CutRadiusResult { radius, minimizer, used_closed_form: false })
}

/// Integer vectors with `|m|₁ = s` whose first nonzero entry is positive.
fn for_each_shell_vector(r: usize, s: i64, f: &mut dyn FnMut(&[i64])) {
    fn signed(a: i64) -> Vec<i64> {
        if a == 0 {
            vec![0]
        } else {
            vec![a, -a]
        }
    }
    fn rec(m: &mut [i64], idx: usize, left: i64, f: &mut dyn FnMut(&[i64])) {
        if idx + 1 == m.len() {
            for v in signed(left) {
                m[idx] = v;
                if m.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
                    f(m);
                }
            }
            return;
        }
        for a in 0..=left {
            for v in signed(a) {
                m[idx] = v;
                rec(m, idx + 1, left - a, f);
            }
        }
    }
    let mut m = vec![0; r];
    rec(&mut m, 0, s, f);
}

/// Closed form when the lattice is orthonormal, enumeration otherwise.
pub fn cut_radius(basis: &LatticeBasis, x: &[f64]) -> Result<CutRadiusResult> {
    if !is_orthonormal(basis, ORTHONORMAL_TOL) {
        return cut_radius_brute(basis, x);
    }
    let radius = cut_radius_closed(basis, x)?;
    let c = basis.pairings(&basis.normalized(x)?);
    let (i, ci) =
        c.iter().enumerate().fold((0, 0f64), |(bi, bc), (i, &v)| if v.abs() > bc.abs() { (i, v) } else { (bi, bc) });
    let mut minimizer = vec![0; basis.rank()];
    minimizer[i] = if ci < 0.0 { -1 } else { 1 };
    Ok(CutRadiusResult { radius, minimizer, used_closed_form: true })
}

/// Whether `X = Σ xᵢAᵢ` lies in `fraction · R`, where `R` is the open
/// region bounded by the tangent cut locus. The zero vector always does.
pub fn in_half_region(basis: &LatticeBasis, x: &[f64], fraction: f64) -> Result<bool> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Unsupported(format!("region fraction {fraction} outside (0, 1]")));
    }
    let norm = basis.norm(x)?;
    if norm == 0.0 {
        return Ok(true);
    }
    Ok(norm < fraction * cut_radius(basis, x)?.radius)
}

/// Signed margin `fraction · t̄₀ − ‖X‖`; positive inside the region.
pub fn region_margin(basis: &LatticeBasis, x: &[f64], fraction: f64) -> Result<f64> {
    let norm = basis.norm(x)?;
    if norm == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(fraction * cut_radius(basis, x)?.radius - norm)
}
