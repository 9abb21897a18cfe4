//! Catalog of the classical symmetric spaces handled by the crate.
//!
//! Every space is realized inside `ℝ^{n+m}` or `ℂ^{n+m}` with base point
//! `L_o = span(e₁, …, eₙ)`. The compact side is a Grassmannian-type quotient
//! of `O(n+m)`, `U(n+m)` or `SO(n+m)`; the noncompact dual is the space of
//! subspaces on which the form `J = diag(I_n, −I_m)` is positive definite.
//! Both sides share the tangent blocks
//!
//! ```text
//!   compact      X = [[0, B], [−Bᴴ, 0]]
//!   noncompact   X = [[0, B], [ Bᴴ, 0]]
//! ```
//!
//! and the maximal flat spanned by `R_{i,n+i}` (resp. `R̃_{i,n+i}`).

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::numkernel::{
    expm, hermitian_eigen, orthonormal_frame, projector_distance, svd, BlockShape, CMat, Field, Matrix,
};

/// Tolerance of group and isotropy membership tests.
pub const GROUP_TOL: f64 = 1e-10;
/// Tolerance of the tangent-block structure check.
pub const TANGENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `O(n+m)/O(n)×O(m)`, dual `O(n,m)/O(n)×O(m)`.
    RealGrassmannian,
    /// `U(n+m)/U(n)×U(m)`, dual `U(n,m)/U(n)×U(m)`.
    ComplexGrassmannian,
    /// Oriented 2-planes `SO(2+m)/SO(2)×SO(m)`; `n` is always 2.
    OrientedTwoPlane,
    /// `S^m = SO(1+m)/SO(m)` as oriented lines; `n` is always 1.
    CircleSphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Compact,
    Noncompact,
}

/// `(family, n, m)` triple naming a space; cheap to copy into the values
/// that belong to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceId {
    pub family: Family,
    pub n: usize,
    pub m: usize,
}

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::RealGrassmannian => "gr-real",
            Family::ComplexGrassmannian => "gr-complex",
            Family::OrientedTwoPlane => "oriented-plane",
            Family::CircleSphere => "sphere",
        };
        write!(f, "{name}:{}:{}", self.n, self.m)
    }
}

/// Fully populated description of one space.
#[derive(Debug, Clone)]
pub struct SpaceDescriptor {
    id: SpaceId,
    rank: usize,
    field: Field,
    metric_factor: f64,
    form_j: Matrix,
    base_point: Matrix,
    cartan_basis: Vec<Matrix>,
    noncompact_basis: Vec<Matrix>,
    lattice: LatticeBasis,
    parabolic: BlockShape,
}

/// `+1` at `(i, j)` and `lower` at `(j, i)`: `lower = −1` gives the compact
/// generator `R_{i,j}`, `lower = 1` the noncompact `R̃_{i,j}`.
fn elementary(dim: usize, i: usize, j: usize, lower: f64, field: Field) -> Matrix {
    let mut m = CMat::zeros(dim, dim);
    m[(i, j)] = Complex64::new(1.0, 0.0);
    m[(j, i)] = Complex64::new(lower, 0.0);
    Matrix::from_inner(m, field).expect("finite entries")
}

/// Builds the descriptor of `family` with parameters `(n, m)`.
pub fn make_space(family: Family, n: usize, m: usize) -> Result<SpaceDescriptor> {
    use std::f64::consts::PI;
    match family {
        Family::RealGrassmannian | Family::ComplexGrassmannian => {
            if n == 0 || m < n {
                return Err(Error::Unsupported(format!("Grassmannian needs 1 <= n <= m, got n={n}, m={m}")));
            }
        }
        Family::OrientedTwoPlane => {
            if n != 2 || m == 0 {
                return Err(Error::Unsupported(format!("oriented 2-planes need n = 2, m >= 1, got n={n}, m={m}")));
            }
        }
        Family::CircleSphere => {
            if n != 1 || m == 0 {
                return Err(Error::Unsupported(format!("spheres need n = 1, m >= 1, got n={n}, m={m}")));
            }
        }
    }
    let id = SpaceId { family, n, m };
    let dim = n + m;
    let rank = n.min(m);
    let field = match family {
        Family::ComplexGrassmannian => Field::Complex,
        _ => Field::Real,
    };
    let metric_factor: f64 = if family == Family::CircleSphere { 2.0 } else { 0.5 };
    let unit = 1.0 / (2.0 * metric_factor).sqrt();

    let mut j_diag = vec![1.0; n];
    j_diag.extend(std::iter::repeat_n(-1.0, m));
    let form_j = Matrix::diag(&j_diag, field);
    let base_point = Matrix::identity(dim, field).columns(0, n);
    let cartan_basis = (0..rank).map(|i| elementary(dim, i, n + i, -1.0, field).scale(unit)).collect();
    let noncompact_basis = (0..rank).map(|i| elementary(dim, i, n + i, 1.0, field).scale(unit)).collect();

    let generators = match (family, rank) {
        (Family::OrientedTwoPlane, 2) => vec![vec![PI, PI], vec![PI, -PI]],
        (Family::OrientedTwoPlane, _) => vec![vec![2.0 * PI]],
        (Family::CircleSphere, _) => vec![vec![4.0 * PI]],
        _ => (0..rank).map(|i| (0..rank).map(|j| if i == j { PI } else { 0.0 }).collect()).collect(),
    };
    Ok(SpaceDescriptor {
        id,
        rank,
        field,
        metric_factor,
        form_j,
        base_point,
        cartan_basis,
        noncompact_basis,
        lattice: LatticeBasis::new(generators)?,
        parabolic: BlockShape::parabolic(&[n, m])?,
    })
}

impl SpaceDescriptor {
    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn family(&self) -> Family {
        self.id.family
    }

    pub fn n(&self) -> usize {
        self.id.n
    }

    pub fn m(&self) -> usize {
        self.id.m
    }

    /// Size `n + m` of the ambient matrices.
    pub fn dim(&self) -> usize {
        self.id.n + self.id.m
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Whether compact points carry an orientation.
    pub fn is_oriented(&self) -> bool {
        matches!(self.id.family, Family::OrientedTwoPlane | Family::CircleSphere)
    }

    /// `c` in `⟨X, Y⟩ = −c·Re tr(XY)` on the compact side.
    pub fn metric_factor(&self) -> f64 {
        self.metric_factor
    }

    pub fn form_j(&self) -> &Matrix {
        &self.form_j
    }

    /// `L_o = [I_n; 0]`.
    pub fn base_point(&self) -> &Matrix {
        &self.base_point
    }

    /// Orthonormal basis of the compact flat.
    pub fn cartan_basis(&self) -> &[Matrix] {
        &self.cartan_basis
    }

    /// Orthonormal basis of the noncompact flat, dual to [`Self::cartan_basis`].
    pub fn noncompact_basis(&self) -> &[Matrix] {
        &self.noncompact_basis
    }

    pub fn flat_basis(&self, side: Side) -> &[Matrix] {
        match side {
            Side::Compact => &self.cartan_basis,
            Side::Noncompact => &self.noncompact_basis,
        }
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn parabolic(&self) -> &BlockShape {
        &self.parabolic
    }

    /// Name of the isotropy group.
    pub fn isotropy_name(&self) -> String {
        let (n, m) = (self.id.n, self.id.m);
        match self.id.family {
            Family::RealGrassmannian => format!("O({n})xO({m})"),
            Family::ComplexGrassmannian => format!("U({n})xU({m})"),
            Family::OrientedTwoPlane => format!("SO(2)xSO({m})"),
            Family::CircleSphere => format!("SO({m})"),
        }
    }

    /// `⟨X, Y⟩` on the given side: `∓c·Re tr(XY)`.
    pub fn inner(&self, side: Side, x: &Matrix, y: &Matrix) -> f64 {
        let t = (x * y).inner().trace().re;
        match side {
            Side::Compact => -self.metric_factor * t,
            Side::Noncompact => self.metric_factor * t,
        }
    }

    /// Ratio between metric flat coordinates and the raw parameters `sᵢ`
    /// of the block `B = diag(sᵢ)`.
    pub fn metric_scale(&self) -> f64 {
        (2.0 * self.metric_factor).sqrt()
    }

    /// `Σ uᵢEᵢ` for orthonormal flat coordinates `u`.
    pub fn flat_matrix(&self, side: Side, u: &[f64]) -> Result<Matrix> {
        if u.len() != self.rank {
            return Err(Error::DimensionMismatch(format!("{} flat coordinates for rank {}", u.len(), self.rank)));
        }
        let mut acc = Matrix::zeros(self.dim(), self.dim(), self.field);
        for (e, &ui) in self.flat_basis(side).iter().zip(u) {
            acc = &acc + &e.scale(ui);
        }
        Ok(acc)
    }

    /// Lattice generator `Aᵢ` as a matrix on the given side.
    pub fn lattice_generator(&self, side: Side, i: usize) -> Matrix {
        self.flat_matrix(side, &self.lattice.generators()[i]).expect("generator length equals rank")
    }

    fn check_square(&self, a: &Matrix, what: &str) -> Result<()> {
        if a.shape() != (self.dim(), self.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "{what}: expected {d}x{d}, got {}x{}",
                a.nrows(),
                a.ncols(),
                d = self.dim()
            )));
        }
        Ok(())
    }

    /// `a` in this space's field, or `None` if a real space is handed a
    /// matrix with genuinely complex entries.
    fn coerce(&self, a: &Matrix) -> Option<Matrix> {
        match (self.field, a.field()) {
            (Field::Real, Field::Complex) if a.max_imag() > GROUP_TOL * a.max_abs().max(1.0) => None,
            (f, g) if f == g => Some(a.clone()),
            (f, _) => Some(a.with_field(f)),
        }
    }

    fn check_point_shape(&self, rep: &Matrix) -> Result<()> {
        if rep.shape() != (self.dim(), self.n()) {
            return Err(Error::DimensionMismatch(format!(
                "subspace representative must be {}x{}, got {}x{}",
                self.dim(),
                self.n(),
                rep.nrows(),
                rep.ncols()
            )));
        }
        Ok(())
    }
}

/// Element of `𝔪` on one side.
#[derive(Debug, Clone)]
pub struct TangentVector {
    space: SpaceId,
    side: Side,
    x: Matrix,
}

impl TangentVector {
    /// Checks the off-diagonal block structure of `x`.
    pub fn new(space: &SpaceDescriptor, side: Side, x: Matrix) -> Result<Self> {
        space.check_square(&x, "tangent vector")?;
        let x = space.coerce(&x).ok_or_else(|| Error::MalformedTangent("complex entries for a real space".into()))?;
        let (n, m) = (space.n(), space.m());
        let tol = TANGENT_TOL * x.max_abs().max(1.0);
        let diag_defect = x.block(0, 0, n, n).max_abs().max(x.block(n, n, m, m).max_abs());
        if diag_defect > tol {
            return Err(Error::MalformedTangent(format!("diagonal blocks are not zero ({diag_defect:e})")));
        }
        let b = x.block(0, n, n, m);
        let c = x.block(n, 0, m, n);
        let want = match side {
            Side::Compact => -&b.adjoint(),
            Side::Noncompact => b.adjoint(),
        };
        let defect = c.distance(&want);
        if defect > tol {
            return Err(Error::MalformedTangent(format!("off-diagonal blocks do not match ({defect:e})")));
        }
        Ok(Self { space: space.id(), side, x })
    }

    /// Tangent vector with upper-right block `b` (`n × m`).
    pub fn from_block(space: &SpaceDescriptor, side: Side, b: &Matrix) -> Result<Self> {
        let (n, m) = (space.n(), space.m());
        if b.shape() != (n, m) {
            return Err(Error::DimensionMismatch(format!("block must be {n}x{m}, got {}x{}", b.nrows(), b.ncols())));
        }
        let b = space.coerce(b).ok_or_else(|| Error::MalformedTangent("complex entries for a real space".into()))?;
        let mut x = Matrix::zeros(n + m, n + m, space.field());
        x.set_block(0, n, &b);
        let lower = match side {
            Side::Compact => -&b.adjoint(),
            Side::Noncompact => b.adjoint(),
        };
        x.set_block(n, 0, &lower);
        Ok(Self { space: space.id(), side, x })
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn matrix(&self) -> &Matrix {
        &self.x
    }

    /// The `n × m` block `B`.
    pub fn block(&self) -> Matrix {
        let n = self.space.n;
        self.x.block(0, n, n, self.space.m)
    }

    /// `‖X‖` in the space's metric.
    pub fn norm(&self, space: &SpaceDescriptor) -> f64 {
        space.inner(self.side, &self.x, &self.x).max(0.0).sqrt()
    }

    /// `k X kᴴ`.
    pub fn conjugate(&self, k: &Matrix) -> TangentVector {
        let x = &(k * &self.x) * &k.adjoint();
        Self { space: self.space, side: self.side, x }
    }
}

/// Point of a maximal flat, in lattice coordinates `X = Σ xᵢAᵢ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatCoordinates {
    pub space: SpaceId,
    pub side: Side,
    pub coords: Vec<f64>,
}

impl FlatCoordinates {
    /// From orthonormal (metric) flat coordinates.
    pub fn from_metric(space: &SpaceDescriptor, side: Side, u: &[f64]) -> Result<Self> {
        Ok(Self { space: space.id(), side, coords: space.lattice().to_lattice(u)? })
    }

    /// Orthonormal flat coordinates.
    pub fn metric(&self, space: &SpaceDescriptor) -> Result<Vec<f64>> {
        space.lattice().to_metric(&self.coords)
    }

    /// `Σ xᵢAᵢ` as a tangent matrix.
    pub fn to_tangent(&self, space: &SpaceDescriptor) -> Result<TangentVector> {
        let x = space.flat_matrix(self.side, &self.metric(space)?)?;
        Ok(TangentVector { space: space.id(), side: self.side, x })
    }
}

/// Subspace of dimension `n`, represented by a full-rank `(n+m) × n` frame.
/// For oriented families the frame's orientation is part of the point.
#[derive(Debug, Clone)]
pub struct SubspacePoint {
    space: SpaceId,
    rep: Matrix,
    oriented: bool,
}

/// Extra distance charged when two oriented points span the same subspace
/// with opposite orientations.
pub const ORIENTATION_PENALTY: f64 = 2.0;

impl SubspacePoint {
    pub fn new(space: &SpaceDescriptor, rep: Matrix) -> Result<Self> {
        space.check_point_shape(&rep)?;
        let rep = space
            .coerce(&rep)
            .ok_or_else(|| Error::DimensionMismatch("complex representative for a real space".into()))?;
        crate::numkernel::ensure_full_column_rank(&rep)?;
        Ok(Self { space: space.id(), rep, oriented: space.is_oriented() })
    }

    pub fn base(space: &SpaceDescriptor) -> Self {
        Self { space: space.id(), rep: space.base_point().clone(), oriented: space.is_oriented() }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    /// Orthonormal frame with the orientation of the representative.
    pub fn frame(&self) -> Result<Matrix> {
        orthonormal_frame(&self.rep)
    }

    /// Top `n × n` block of the representative.
    pub fn top_block(&self) -> Matrix {
        self.rep.block(0, 0, self.space.n, self.space.n)
    }

    /// `k · L`.
    pub fn act(&self, k: &Matrix) -> Result<Self> {
        let rep = k.try_mul(&self.rep)?;
        Ok(Self { space: self.space, rep, oriented: self.oriented })
    }

    /// Projector distance, plus [`ORIENTATION_PENALTY`] for oriented points
    /// whose frames have opposite orientation.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.space.n != other.space.n || self.space.m != other.space.m {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.space, other.space)));
        }
        let (a, b) = match (self.rep.field(), other.rep.field()) {
            (f, g) if f == g => (self.rep.clone(), other.rep.clone()),
            _ => (self.rep.to_complex(), other.rep.to_complex()),
        };
        let d = projector_distance(&a, &b)?;
        if self.oriented && other.oriented {
            let qa = orthonormal_frame(&a)?;
            let qb = orthonormal_frame(&b)?;
            if (&qa.adjoint() * &qb).determinant()?.re < 0.0 {
                return Ok(d + ORIENTATION_PENALTY);
            }
        }
        Ok(d)
    }
}

/// Whether `a` lies in the group acting on the given side: `AᴴJA = J` with
/// `J = I` (compact) or the form `J` (noncompact). Oriented families
/// additionally need `det A = 1`, and on the noncompact side a top-left
/// block of positive determinant (the identity component).
pub fn in_group(space: &SpaceDescriptor, a: &Matrix, side: Side) -> Result<bool> {
    space.check_square(a, "group element")?;
    let Some(a) = space.coerce(a) else {
        return Ok(false);
    };
    let j = match side {
        Side::Compact => Matrix::identity(space.dim(), space.field()),
        Side::Noncompact => space.form_j().clone(),
    };
    let scale = a.max_abs().powi(2).max(1.0);
    if (&(&a.adjoint() * &j) * &a).distance(&j) > GROUP_TOL * scale {
        return Ok(false);
    }
    if space.is_oriented() {
        if (a.determinant()? - Complex64::new(1.0, 0.0)).norm() > GROUP_TOL * scale {
            return Ok(false);
        }
        if side == Side::Noncompact {
            let n = space.n();
            if a.block(0, 0, n, n).determinant()?.re <= 0.0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `k` lies in the isotropy group of the base point: block diagonal
/// `(n | m)` with unitary blocks, of determinant one for oriented families.
pub fn in_isotropy(space: &SpaceDescriptor, k: &Matrix) -> Result<bool> {
    space.check_square(k, "isotropy element")?;
    let Some(k) = space.coerce(k) else {
        return Ok(false);
    };
    let (n, m) = (space.n(), space.m());
    let off = k.block(0, n, n, m).max_abs().max(k.block(n, 0, m, n).max_abs());
    if off > GROUP_TOL {
        return Ok(false);
    }
    for (blk, size) in [(k.block(0, 0, n, n), n), (k.block(n, n, m, m), m)] {
        let id = Matrix::identity(size, space.field());
        if (&blk.adjoint() * &blk).distance(&id) > GROUP_TOL {
            return Ok(false);
        }
        if space.is_oriented() && (blk.determinant()? - Complex64::new(1.0, 0.0)).norm() > GROUP_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A = [[P, YᴴQ], [YP, Q]]` with `P = (I − YᴴY)^{−1/2}`,
/// `Q = (I − YYᴴ)^{−1/2}`: the symmetric element of the noncompact group
/// carrying `L_o` to `span [I; Y]`.
pub fn transitivity_element(space: &SpaceDescriptor, y: &Matrix) -> Result<Matrix> {
    let (n, m) = (space.n(), space.m());
    if y.shape() != (m, n) {
        return Err(Error::DimensionMismatch(format!("Y must be {m}x{n}, got {}x{}", y.nrows(), y.ncols())));
    }
    let y = space.coerce(y).ok_or_else(|| Error::DimensionMismatch("complex Y for a real space".into()))?;
    let inv_sqrt = |s: Matrix| -> Result<Matrix> {
        let e = hermitian_eigen(&s, GROUP_TOL)?;
        let lmin = e.eigenvalues.first().copied().unwrap_or(1.0);
        if lmin <= GROUP_TOL {
            return Err(Error::NotSpaceLike(lmin));
        }
        Ok(e.map(|l| 1.0 / l.sqrt()))
    };
    let p = inv_sqrt(&Matrix::identity(n, space.field()) - &(&y.adjoint() * &y))?;
    let q = inv_sqrt(&Matrix::identity(m, space.field()) - &(&y * &y.adjoint()))?;
    let mut a = Matrix::zeros(n + m, n + m, space.field());
    a.set_block(0, 0, &p);
    a.set_block(0, n, &(&y.adjoint() * &q));
    a.set_block(n, 0, &(&y * &p));
    a.set_block(n, n, &q);
    Ok(a)
}

/// `X = Ad k (H)` with `H` in the flat and `k` in the isotropy group.
#[derive(Debug, Clone)]
pub struct FlatDecomposition {
    pub k: Matrix,
    /// Lattice coordinates of `H`; the underlying metric coordinates have
    /// descending absolute values.
    pub h: FlatCoordinates,
}

impl FlatDecomposition {
    /// `k H kᴴ`.
    pub fn reconstruct(&self, space: &SpaceDescriptor) -> Result<TangentVector> {
        Ok(self.h.to_tangent(space)?.conjugate(&self.k))
    }
}

/// Writes `X` as `Ad k (H)`.
///
/// The block `B` of `X` has singular value decomposition `U S Vᴴ`; then
/// `k = diag(U, V)` and `H` is the flat element with block `S`. For oriented
/// families columns of `U`, `V` are flipped so that both have determinant
/// one, which may leave the last coordinate of `H` negative.
pub fn flat_decompose(space: &SpaceDescriptor, x: &TangentVector) -> Result<FlatDecomposition> {
    if x.space() != space.id() {
        return Err(Error::DimensionMismatch(format!("tangent vector of {} used with {}", x.space(), space.id())));
    }
    let (n, m) = (space.n(), space.m());
    let r = space.rank();
    let d = svd(&x.block())?;
    let (mut u, mut v) = (d.u, d.v);
    let mut s = d.singular_values;
    if space.is_oriented() {
        if u.determinant()?.re < 0.0 {
            if n > r {
                u.negate_column(n - 1);
            } else {
                u.negate_column(r - 1);
                v.negate_column(r - 1);
            }
        }
        if v.determinant()?.re < 0.0 {
            if m > r {
                v.negate_column(m - 1);
            } else {
                v.negate_column(r - 1);
                s[r - 1] = -s[r - 1];
            }
        }
    }
    let scale = space.metric_scale();
    let u_metric: Vec<f64> = s.iter().map(|si| si * scale).collect();
    let k = Matrix::block_diag(&u, &v);
    let h = FlatCoordinates::from_metric(space, x.side(), &u_metric)?;
    Ok(FlatDecomposition { k, h })
}

/// `exp(X) · L_o`.
pub fn exp_point(space: &SpaceDescriptor, x: &TangentVector) -> Result<SubspacePoint> {
    if x.space() != space.id() {
        return Err(Error::DimensionMismatch(format!("tangent vector of {} used with {}", x.space(), space.id())));
    }
    let e = expm(x.matrix())?;
    Ok(SubspacePoint { space: space.id(), rep: e.columns(0, space.n()), oriented: space.is_oriented() })
}

/// `span [I; Y]`.
pub fn graph_point(space: &SpaceDescriptor, y: &Matrix) -> Result<SubspacePoint> {
    let (n, m) = (space.n(), space.m());
    if y.shape() != (m, n) {
        return Err(Error::DimensionMismatch(format!("Y must be {m}x{n}, got {}x{}", y.nrows(), y.ncols())));
    }
    let y = space.coerce(y).ok_or_else(|| Error::DimensionMismatch("complex Y for a real space".into()))?;
    let mut rep = Matrix::zeros(n + m, n, space.field());
    rep.set_block(0, 0, &Matrix::identity(n, space.field()));
    rep.set_block(n, 0, &y);
    SubspacePoint::new(space, rep)
}

/// All spaces exercised by the property suites.
pub fn catalog() -> Vec<SpaceDescriptor> {
    let mut out = Vec::new();
    for (n, m) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 4)] {
        out.push(make_space(Family::RealGrassmannian, n, m).expect("valid parameters"));
    }
    for (n, m) in [(1, 1), (1, 2), (2, 2)] {
        out.push(make_space(Family::ComplexGrassmannian, n, m).expect("valid parameters"));
    }
    for m in [1, 2, 3] {
        out.push(make_space(Family::OrientedTwoPlane, 2, m).expect("valid parameters"));
    }
    for m in [1, 2] {
        out.push(make_space(Family::CircleSphere, 1, m).expect("valid parameters"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{is_orthonormal, ORTHONORMAL_TOL};
    use std::f64::consts::PI;

    fn boost(t: f64) -> Matrix {
        Matrix::from_real_rows(&[vec![t.cosh(), t.sinh()], vec![t.sinh(), t.cosh()]]).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(make_space(Family::RealGrassmannian, 3, 2).is_err());
        assert!(make_space(Family::RealGrassmannian, 0, 2).is_err());
        assert!(make_space(Family::OrientedTwoPlane, 3, 3).is_err());
        assert!(make_space(Family::CircleSphere, 2, 3).is_err());
        assert!(make_space(Family::CircleSphere, 1, 1).is_ok());
    }

    #[test]
    fn gr11_lattice_is_pi_r12() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        assert_eq!(s.rank(), 1);
        let a = s.lattice_generator(Side::Compact, 0);
        let want = Matrix::from_real_rows(&[vec![0.0, PI], vec![-PI, 0.0]]).unwrap();
        assert!(a.distance(&want) < 1e-15);
    }

    #[test]
    fn flat_bases_commute_and_are_orthonormal() {
        for s in catalog() {
            for side in [Side::Compact, Side::Noncompact] {
                let basis = s.flat_basis(side);
                for (i, a) in basis.iter().enumerate() {
                    for (j, b) in basis.iter().enumerate() {
                        let comm = &(a * b) - &(b * a);
                        assert!(comm.max_abs() <= 1e-12, "{}", s.id());
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((s.inner(side, a, b) - want).abs() < 1e-14, "{} {side:?}", s.id());
                    }
                }
            }
        }
    }

    #[test]
    fn lattice_generators_exponentiate_into_isotropy() {
        for s in catalog() {
            for i in 0..s.rank() {
                let e = expm(&s.lattice_generator(Side::Compact, i)).unwrap();
                assert!(in_isotropy(&s, &e).unwrap(), "{} generator {i}", s.id());
            }
            if s.family() == Family::OrientedTwoPlane {
                let half = expm(&s.cartan_basis()[0].scale(PI)).unwrap();
                assert!(!in_isotropy(&s, &half).unwrap());
            }
        }
    }

    #[test]
    fn grassmannian_lattices_are_orthonormal_with_norm_pi() {
        for s in catalog() {
            if matches!(s.family(), Family::RealGrassmannian | Family::ComplexGrassmannian) {
                assert!(is_orthonormal(s.lattice(), ORTHONORMAL_TOL));
                for g in s.lattice().generator_norms() {
                    assert!((g - PI).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn group_membership() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        let id = Matrix::identity(2, Field::Real);
        assert!(in_group(&s, &id, Side::Compact).unwrap());
        assert!(in_group(&s, &id, Side::Noncompact).unwrap());
        assert!(in_group(&s, &boost(1.0), Side::Noncompact).unwrap());
        assert!(!in_group(&s, &boost(1.0), Side::Compact).unwrap());
        assert!(in_group(&s, &Matrix::identity(3, Field::Real), Side::Compact).is_err());

        let o = make_space(Family::OrientedTwoPlane, 2, 1).unwrap();
        let flip = Matrix::diag(&[-1.0, 1.0, -1.0], Field::Real);
        assert!(!in_group(&o, &flip, Side::Noncompact).unwrap());
        assert!(in_group(&o, &flip, Side::Compact).unwrap());
    }

    #[test]
    fn isotropy_membership() {
        let s = make_space(Family::RealGrassmannian, 2, 3).unwrap();
        assert!(in_isotropy(&s, &Matrix::identity(5, Field::Real)).unwrap());
        let (c, sn) = (0.3f64.cos(), 0.3f64.sin());
        let mut k = Matrix::identity(5, Field::Real);
        k.set_block(0, 0, &Matrix::from_real_rows(&[vec![c, -sn], vec![sn, c]]).unwrap());
        assert!(in_isotropy(&s, &k).unwrap());
        let mut w = Matrix::identity(5, Field::Real);
        w.set_block(0, 2, &Matrix::from_real_rows(&[vec![0.1, 0.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap());
        assert!(!in_isotropy(&s, &w).unwrap());

        let sphere = make_space(Family::CircleSphere, 1, 2).unwrap();
        assert!(!in_isotropy(&sphere, &Matrix::diag(&[-1.0, -1.0, 1.0], Field::Real)).unwrap());
        assert!(in_isotropy(&sphere, &Matrix::diag(&[1.0, -1.0, -1.0], Field::Real)).unwrap());
    }

    #[test]
    fn transitivity_element_examples() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        let a0 = transitivity_element(&s, &Matrix::zeros(1, 1, Field::Real)).unwrap();
        assert!(a0.distance(&Matrix::identity(2, Field::Real)) < 1e-15);
        let y = Matrix::from_real_rows(&[vec![1f64.tanh()]]).unwrap();
        let a = transitivity_element(&s, &y).unwrap();
        assert!(a.distance(&boost(1.0)) < 1e-14);
        let bad = Matrix::from_real_rows(&[vec![1.0]]).unwrap();
        assert!(matches!(transitivity_element(&s, &bad), Err(Error::NotSpaceLike(_))));
    }

    #[test]
    fn transitivity_element_reaches_graph() {
        let s = make_space(Family::RealGrassmannian, 2, 3).unwrap();
        let y = Matrix::from_real_rows(&[vec![0.5, 0.1], vec![-0.2, 0.3], vec![0.0, 0.4]]).unwrap();
        let a = transitivity_element(&s, &y).unwrap();
        assert!(in_group(&s, &a, Side::Noncompact).unwrap());
        let p = SubspacePoint::new(&s, a.columns(0, 2)).unwrap();
        assert!(p.distance(&graph_point(&s, &y).unwrap()).unwrap() <= 1e-10);
    }

    #[test]
    fn flat_decompose_of_flat_element() {
        let s = make_space(Family::RealGrassmannian, 2, 3).unwrap();
        let x = FlatCoordinates { space: s.id(), side: Side::Noncompact, coords: vec![0.7, 0.2] };
        let t = x.to_tangent(&s).unwrap();
        let d = flat_decompose(&s, &t).unwrap();
        assert!(in_isotropy(&s, &d.k).unwrap());
        for (a, b) in d.h.coords.iter().zip(&x.coords) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(d.reconstruct(&s).unwrap().matrix().distance(t.matrix()) < 1e-13);
    }

    #[test]
    fn flat_decompose_matches_svd_of_block() {
        let s = make_space(Family::ComplexGrassmannian, 2, 2).unwrap();
        let data: Vec<Complex64> = (0..4).map(|k| Complex64::new((k as f64 + 1.0).sin(), (k as f64).cos())).collect();
        let b = Matrix::from_complex_row_major(2, 2, &data).unwrap();
        let t = TangentVector::from_block(&s, Side::Noncompact, &b).unwrap();
        let d = flat_decompose(&s, &t).unwrap();
        let sv = svd(&b).unwrap().singular_values;
        for (h, sigma) in d.h.coords.iter().zip(&sv) {
            assert!((h * PI - sigma).abs() < 1e-12);
        }
        assert!(d.reconstruct(&s).unwrap().matrix().distance(t.matrix()) < 1e-12);
    }

    #[test]
    fn oriented_flat_decompose_keeps_k_in_isotropy() {
        for m in [1, 2, 3] {
            let s = make_space(Family::OrientedTwoPlane, 2, m).unwrap();
            let b = Matrix::from_real_fn(2, m, |i, j| ((i * 3 + j) as f64 * 1.3).sin() - 0.2).unwrap();
            for sign in [1.0, -1.0] {
                let mut bb = b.clone();
                if sign < 0.0 {
                    bb.negate_column(0);
                }
                let t = TangentVector::from_block(&s, Side::Compact, &bb).unwrap();
                let d = flat_decompose(&s, &t).unwrap();
                assert!(in_isotropy(&s, &d.k).unwrap(), "m = {m}");
                assert!(d.reconstruct(&s).unwrap().matrix().distance(t.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn malformed_tangent_rejected() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        let x = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert!(TangentVector::new(&s, Side::Compact, x.clone()).is_ok());
        assert!(matches!(TangentVector::new(&s, Side::Noncompact, x), Err(Error::MalformedTangent(_))));
        let d = Matrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(TangentVector::new(&s, Side::Compact, d).is_err());
    }

    #[test]
    fn oriented_distance_sees_orientation() {
        let s = make_space(Family::CircleSphere, 1, 1).unwrap();
        let up = SubspacePoint::new(&s, Matrix::from_real_rows(&[vec![1.0], vec![0.0]]).unwrap()).unwrap();
        let down = SubspacePoint::new(&s, Matrix::from_real_rows(&[vec![-1.0], vec![0.0]]).unwrap()).unwrap();
        assert!((up.distance(&down).unwrap() - ORIENTATION_PENALTY).abs() < 1e-15);
        let g = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        let a = SubspacePoint::new(&g, Matrix::from_real_rows(&[vec![1.0], vec![0.0]]).unwrap()).unwrap();
        let b = SubspacePoint::new(&g, Matrix::from_real_rows(&[vec![-1.0], vec![0.0]]).unwrap()).unwrap();
        assert!(a.distance(&b).unwrap() < 1e-15);
    }

    #[test]
    fn compact_flat_exp_is_cos_minus_sin() {
        let s = make_space(Family::RealGrassmannian, 2, 2).unwrap();
        let th = [0.4, -0.9];
        let x = TangentVector::new(&s, Side::Compact, s.flat_matrix(Side::Compact, &th).unwrap()).unwrap();
        let p = exp_point(&s, &x).unwrap();
        for (i, t) in th.iter().enumerate() {
            assert!((p.rep().re(i, i) - t.cos()).abs() < 1e-15);
            assert!((p.rep().re(2 + i, i) + t.sin()).abs() < 1e-15);
        }
    }
}
