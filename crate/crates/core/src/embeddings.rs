//! Embeddings of a noncompact space into its compact dual.
//!
//! * `p`: a noncompact point is a space-like subspace, hence already a
//!   point of the compact Grassmannian.
//! * `g`: factor `A = Q·R` with `R` in the parabolic subgroup; the coset
//!   `AK` goes to `QK`.
//! * `f`: take the noncompact logarithm, move it into the flat, apply the
//!   coordinate map `h`, move back and exponentiate on the compact side.
//! * `b`: the rank-one stereographic map `t ↦ 2·atan(tanh(t/2))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{block_qr, hermitian_eigen, orthonormal_frame, svd, Matrix};
use crate::spaces::{
    exp_point, flat_decompose, in_group, Family, FlatCoordinates, Side, SpaceDescriptor, SpaceId, SubspacePoint,
    TangentVector,
};

/// Largest singular value of the graph block `Y` accepted by the logarithm.
pub const BOUNDARY_CUTOFF: f64 = 1.0 - 1e-13;
/// Positivity threshold for the form restricted to a subspace.
pub const SPACE_LIKE_TOL: f64 = 1e-10;
/// Relative threshold below which the top block counts as singular.
const CHART_TOL: f64 = 1e-12;

/// Group element acting on one side.
#[derive(Debug, Clone)]
pub struct GroupElement {
    space: SpaceId,
    side: Side,
    a: Matrix,
}

impl GroupElement {
    pub fn new(space: &SpaceDescriptor, side: Side, a: Matrix) -> Result<Self> {
        if !in_group(space, &a, side)? {
            return Err(Error::NotInGroup(format!("{side:?} group of {}", space.id())));
        }
        let a = if a.field() == space.field() { a } else { a.with_field(space.field()) };
        Ok(Self { space: space.id(), side, a })
    }

    pub fn identity(space: &SpaceDescriptor, side: Side) -> Self {
        Self { space: space.id(), side, a: Matrix::identity(space.dim(), space.field()) }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    /// `A · L_o`.
    pub fn base_image(&self, space: &SpaceDescriptor) -> Result<SubspacePoint> {
        SubspacePoint::new(space, self.a.columns(0, space.n()))
    }

    /// `k · A`.
    pub fn left_mul(&self, k: &Matrix) -> Result<Self> {
        Ok(Self { space: self.space, side: self.side, a: k.try_mul(&self.a)? })
    }
}

/// Output of [`h_flat`]: compact flat coordinates, each in `(−¼, ¼)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HMapImage {
    pub coords: FlatCoordinates,
}

/// `a(x) = atan(tanh πx)/π`, increasing and odd with limits `±¼`.
///
/// For `x > 0` it is evaluated as `¼ − atan(e^{−2πx})/π`, which keeps full
/// relative accuracy of the gap to `¼`. The result is kept strictly inside
/// `(−¼, ¼)`.
pub fn a_coordinate(x: f64) -> f64 {
    let mag = x.abs();
    let v = 0.25 - (-2.0 * std::f64::consts::PI * mag).exp().atan() / std::f64::consts::PI;
    let v = v.min(0.25f64.next_down());
    if x < 0.0 {
        -v
    } else if x > 0.0 {
        v
    } else {
        0.0
    }
}

/// Coordinate-wise `x ↦ −a(x)` from noncompact to compact lattice coordinates.
pub fn h_flat(x: &FlatCoordinates) -> HMapImage {
    HMapImage {
        coords: FlatCoordinates {
            space: x.space,
            side: Side::Compact,
            coords: x.coords.iter().map(|&v| -a_coordinate(v)).collect(),
        },
    }
}

/// `h` on a tangent vector: `Ad k (H) ↦ Ad k (h(H))`.
pub fn h_tangent(space: &SpaceDescriptor, x: &TangentVector) -> Result<TangentVector> {
    let d = flat_decompose(space, x)?;
    let image = h_flat(&d.h);
    Ok(image.coords.to_tangent(space)?.conjugate(&d.k))
}

/// `2·atan(tanh(t/2))`, the stereographic map on a rank-one flat; values lie
/// in `(−π/2, π/2)`.
pub fn b_embed_rank1(t: f64) -> f64 {
    2.0 * (t / 2.0).tanh().atan()
}

/// Point of the sphere reached by [`b_embed_rank1`]: the compact geodesic of
/// metric length `b(t)` from the base point.
pub fn b_embed_point(space: &SpaceDescriptor, t: f64) -> Result<SubspacePoint> {
    if space.family() != Family::CircleSphere {
        return Err(Error::Unsupported(format!("b is only realized on spheres, not {}", space.id())));
    }
    let x = TangentVector::new(space, Side::Compact, space.cartan_basis()[0].scale(b_embed_rank1(t)))?;
    exp_point(space, &x)
}

/// Smallest eigenvalue of `QᴴJQ` for an orthonormal frame `Q` of `L`.
pub fn form_min_eigenvalue(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<f64> {
    let q = orthonormal_frame(l.rep())?;
    let s = &(&q.adjoint() * space.form_j()) * &q;
    Ok(hermitian_eigen(&s, SPACE_LIKE_TOL)?.eigenvalues[0])
}

/// Whether the form `J` is positive definite on `L`.
pub fn space_like(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<bool> {
    Ok(form_min_eigenvalue(space, l)? > SPACE_LIKE_TOL)
}

fn check_space(space: &SpaceDescriptor, id: SpaceId) -> Result<()> {
    if id != space.id() {
        return Err(Error::DimensionMismatch(format!("value of {id} used with {}", space.id())));
    }
    Ok(())
}

/// Graph block `Y = bottom · top⁻¹` and its singular value decomposition,
/// returned as `(W, σ, Z)` with `Y = W Σ Zᴴ`.
fn graph_svd(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<(Matrix, Vec<f64>, Matrix)> {
    let n = space.n();
    let top = l.top_block();
    let top_svd = svd(&top)?;
    if top_svd.condition_ratio() <= CHART_TOL {
        return Err(Error::OutsideChart);
    }
    let y = &l.rep().block(n, 0, space.m(), n) * &top.try_inverse()?;
    let d = svd(&y)?;
    Ok((d.u, d.singular_values, d.v))
}

/// Tangent vector with block `B = Z · diag(s) · Wᴴ`.
fn block_from_svd(space: &SpaceDescriptor, side: Side, w: &Matrix, s: &[f64], z: &Matrix) -> Result<TangentVector> {
    let (n, m) = (space.n(), space.m());
    let mut sd = Matrix::zeros(n, m, space.field());
    for (i, v) in s.iter().enumerate() {
        sd.set_block(i, i, &Matrix::diag(&[*v], space.field()));
    }
    let b = &(z * &sd) * &w.adjoint();
    TangentVector::from_block(space, side, &b)
}

/// Inverse of the noncompact exponential at the base point.
///
/// Writes `L = span [I; Y]`, `Y = W Σ Zᴴ`, and returns the tangent vector
/// with block `Z · artanh(Σ) · Wᴴ`.
pub fn log_noncompact(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<TangentVector> {
    check_space(space, l.space())?;
    let (w, sigma, z) = match graph_svd(space, l) {
        Err(Error::OutsideChart) => return Err(Error::NotSpaceLike(form_min_eigenvalue(space, l)?)),
        other => other?,
    };
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax >= 1.0 {
        return Err(Error::NotSpaceLike(1.0 - smax * smax));
    }
    if smax >= BOUNDARY_CUTOFF {
        return Err(Error::NearBoundary(smax));
    }
    let s: Vec<f64> = sigma.iter().map(|v| v.atanh()).collect();
    block_from_svd(space, Side::Noncompact, &w, &s, &z)
}

/// Inverse of the compact exponential on the chart of points with an
/// invertible top block (of positive determinant for oriented families).
pub fn log_compact(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<TangentVector> {
    check_space(space, l.space())?;
    if space.is_oriented() && l.top_block().determinant()?.re <= 0.0 {
        return Err(Error::OutsideChart);
    }
    let (w, sigma, z) = graph_svd(space, l)?;
    let theta: Vec<f64> = sigma.iter().map(|v| -v.atan()).collect();
    block_from_svd(space, Side::Compact, &w, &theta, &z)
}

/// Lattice coordinates of a compact point in the flat, via [`log_compact`].
pub fn compact_flat_coordinates(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<FlatCoordinates> {
    Ok(flat_decompose(space, &log_compact(space, l)?)?.h)
}

/// Intermediate values of the `f` pipeline.
#[derive(Debug, Clone)]
pub struct FEmbedding {
    pub log: TangentVector,
    pub k: Matrix,
    pub noncompact: FlatCoordinates,
    pub compact: HMapImage,
    pub point: SubspacePoint,
}

/// `f = exp_c ∘ h ∘ log_n` on a space-like subspace.
pub fn f_embed_detailed(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<FEmbedding> {
    let log = log_noncompact(space, l)?;
    let d = flat_decompose(space, &log)?;
    let compact = h_flat(&d.h);
    let xc = compact.coords.to_tangent(space)?.conjugate(&d.k);
    let point = exp_point(space, &xc)?;
    Ok(FEmbedding { log, k: d.k, noncompact: d.h, compact, point })
}

pub fn f_embed(space: &SpaceDescriptor, l: &SubspacePoint) -> Result<SubspacePoint> {
    Ok(f_embed_detailed(space, l)?.point)
}

/// `f` on the coset `A·K`.
pub fn f_embed_group(space: &SpaceDescriptor, a: &GroupElement) -> Result<SubspacePoint> {
    f_embed(space, &p_embed(space, a)?)
}

fn check_noncompact(space: &SpaceDescriptor, a: &GroupElement) -> Result<()> {
    check_space(space, a.space())?;
    if a.side() != Side::Noncompact {
        return Err(Error::NotInGroup("expected a noncompact group element".into()));
    }
    Ok(())
}

/// Compact factor `Q` of `A = Q·R`, `R` in the parabolic subgroup.
pub fn g_embed(space: &SpaceDescriptor, a: &GroupElement) -> Result<GroupElement> {
    check_noncompact(space, a)?;
    let q = block_qr(a.matrix(), space.parabolic())?.q;
    GroupElement::new(space, Side::Compact, q)
}

/// The space-like subspace `A · L_o`.
pub fn p_embed(space: &SpaceDescriptor, a: &GroupElement) -> Result<SubspacePoint> {
    check_noncompact(space, a)?;
    a.base_image(space)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    P,
    G,
    F,
    B,
}

impl Embedding {
    pub const ALL: [Embedding; 4] = [Embedding::P, Embedding::G, Embedding::F, Embedding::B];
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Embedding::P => "p",
            Embedding::G => "g",
            Embedding::F => "f",
            Embedding::B => "b",
        })
    }
}

impl FromStr for Embedding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "p" => Ok(Embedding::P),
            "g" => Ok(Embedding::G),
            "f" => Ok(Embedding::F),
            "b" => Ok(Embedding::B),
            other => Err(Error::Unsupported(format!("unknown embedding '{other}'"))),
        }
    }
}

/// Image of the coset `A·K` under the chosen embedding. On spheres `b`
/// coincides with `g`; elsewhere it is not realized.
pub fn embed(space: &SpaceDescriptor, which: Embedding, a: &GroupElement) -> Result<SubspacePoint> {
    match which {
        Embedding::P => p_embed(space, a),
        Embedding::G => g_embed(space, a)?.base_image(space),
        Embedding::F => f_embed_group(space, a),
        Embedding::B if space.family() == Family::CircleSphere => g_embed(space, a)?.base_image(space),
        Embedding::B => Err(Error::Unsupported(format!("b is only realized on spheres, not {}", space.id()))),
    }
}

/// Fraction `c` with `Im = exp(c·R)` (or `⊂` for `p`, `g` on oriented
/// planes with `m ≥ 2`), `R` the region inside the tangent cut locus.
pub fn image_fraction(space: &SpaceDescriptor, which: Embedding) -> f64 {
    match (which, space.family()) {
        (Embedding::F, _) => 0.5,
        (_, Family::CircleSphere) => 0.25,
        (_, Family::OrientedTwoPlane) if space.m() == 1 => 0.25,
        _ => 0.5,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::Field;
    use crate::spaces::{graph_point, make_space, transitivity_element};
    use std::f64::consts::PI;

    fn boost(t: f64) -> Matrix {
        Matrix::from_real_rows(&[vec![t.cosh(), t.sinh()], vec![t.sinh(), t.cosh()]]).unwrap()
    }

    fn rotation_point(theta: f64) -> Matrix {
        Matrix::from_real_rows(&[vec![theta.cos()], vec![-theta.sin()]]).unwrap()
    }

    #[test]
    fn a_coordinate_values() {
        assert_eq!(a_coordinate(0.0), 0.0);
        // mpmath: atan(tanh(pi/2))/pi
        assert!((a_coordinate(0.5) - 0.23625313549946276).abs() < 1e-15);
        assert!((a_coordinate(-0.5) + 0.23625313549946276).abs() < 1e-15);
        for x in [3.0, 10.0, 1e3, f64::MAX] {
            assert!(a_coordinate(x) < 0.25 && a_coordinate(-x) > -0.25);
        }
        assert!(0.25 - a_coordinate(3.0) > 0.0);
    }

    #[test]
    fn h_flat_negates() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        let x = FlatCoordinates { space: s.id(), side: Side::Noncompact, coords: vec![0.5] };
        let h = h_flat(&x);
        assert_eq!(h.coords.side, Side::Compact);
        assert!((h.coords.coords[0] + 0.23625313549946276).abs() < 1e-15);
    }

    #[test]
    fn b_values() {
        assert_eq!(b_embed_rank1(0.0), 0.0);
        assert!((b_embed_rank1(1.0) - 0.8657694832396586).abs() < 1e-15);
        let b20 = b_embed_rank1(20.0);
        assert!((b20 - 1.5707963226725894).abs() < 1e-15 && b20 < PI / 2.0);
    }

    #[test]
    fn o11_all_three_maps() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        for t in [-3.0f64, -0.4, 0.0, 1.0, 2.5] {
            let a = GroupElement::new(&s, Side::Noncompact, boost(t)).unwrap();
            let theta = -t.tanh().atan();
            let want = SubspacePoint::new(&s, rotation_point(theta)).unwrap();
            for which in [Embedding::P, Embedding::G, Embedding::F] {
                let got = embed(&s, which, &a).unwrap();
                assert!(got.distance(&want).unwrap() < 1e-12, "{which} at t = {t}");
            }
            let q = g_embed(&s, &a).unwrap();
            let rot =
                Matrix::from_real_rows(&[vec![theta.cos(), theta.sin()], vec![-theta.sin(), theta.cos()]]).unwrap();
            assert!(q.matrix().distance(&rot) < 1e-12);
        }
    }

    #[test]
    fn f_on_the_flat_of_a_real_grassmannian() {
        let s = make_space(Family::RealGrassmannian, 2, 3).unwrap();
        let y = [0.8, -0.3];
        let xn = TangentVector::new(&s, Side::Noncompact, s.flat_matrix(Side::Noncompact, &y).unwrap()).unwrap();
        let l = exp_point(&s, &xn).unwrap();
        let x: Vec<f64> = y.iter().map(|v: &f64| -v.tanh().atan()).collect();
        let xc = TangentVector::new(&s, Side::Compact, s.flat_matrix(Side::Compact, &x).unwrap()).unwrap();
        let want = exp_point(&s, &xc).unwrap();
        assert!(f_embed(&s, &l).unwrap().distance(&want).unwrap() < 1e-12);
    }

    #[test]
    fn identity_maps_to_base_point() {
        for s in crate::spaces::catalog() {
            let id = GroupElement::identity(&s, Side::Noncompact);
            let base = SubspacePoint::base(&s);
            for which in [Embedding::P, Embedding::G, Embedding::F] {
                assert!(embed(&s, which, &id).unwrap().distance(&base).unwrap() < 1e-15, "{}", s.id());
            }
            assert!(log_noncompact(&s, &base).unwrap().matrix().max_abs() == 0.0);
        }
    }

    #[test]
    fn log_of_tanh_slope() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        let l = graph_point(&s, &Matrix::from_real_rows(&[vec![1f64.tanh()]]).unwrap()).unwrap();
        let x = log_noncompact(&s, &l).unwrap();
        assert!((x.block().re(0, 0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn log_rejections() {
        let s = make_space(Family::RealGrassmannian, 1, 1).unwrap();
        let timelike = graph_point(&s, &Matrix::from_real_rows(&[vec![1.5]]).unwrap()).unwrap();
        assert!(matches!(log_noncompact(&s, &timelike), Err(Error::NotSpaceLike(_))));
        let edge = graph_point(&s, &Matrix::from_real_rows(&[vec![1.0 - 1e-14]]).unwrap()).unwrap();
        assert!(matches!(log_noncompact(&s, &edge), Err(Error::NearBoundary(_))));
        let vertical = SubspacePoint::new(&s, Matrix::from_real_rows(&[vec![0.0], vec![1.0]]).unwrap()).unwrap();
        assert!(matches!(log_compact(&s, &vertical), Err(Error::OutsideChart)));
    }

    #[test]
    fn space_like_examples() {
        let s = make_space(Family::RealGrassmannian, 2, 2).unwrap();
        assert!(space_like(&s, &SubspacePoint::base(&s)).unwrap());
        let mut rep = Matrix::zeros(4, 2, Field::Real);
        rep.set_block(2, 0, &Matrix::identity(2, Field::Real));
        assert!(!space_like(&s, &SubspacePoint::new(&s, rep).unwrap()).unwrap());
        let u = [0.6, 0.8];
        for (t, expect) in [(PI / 4.0 / 0.8 - 1e-3, true), (PI / 4.0 / 0.8 + 1e-3, false)] {
            let x: Vec<f64> = u.iter().map(|v| v * t).collect();
            let xc = TangentVector::new(&s, Side::Compact, s.flat_matrix(Side::Compact, &x).unwrap()).unwrap();
            assert_eq!(space_like(&s, &exp_point(&s, &xc).unwrap()).unwrap(), expect);
        }
    }

    #[test]
    fn sphere_b_is_opposite_flat_coordinate_of_g() {
        let s = make_space(Family::CircleSphere, 1, 2).unwrap();
        for t in [0.3, 1.0, 4.0] {
            let xn = TangentVector::new(&s, Side::Noncompact, s.noncompact_basis()[0].scale(t)).unwrap();
            let l = exp_point(&s, &xn).unwrap();
            // SO(2) reverses the flat, so only magnitudes are invariant
            let coords = compact_flat_coordinates(&s, &l).unwrap().metric(&s).unwrap();
            assert!((coords[0].abs() - b_embed_rank1(t)).abs() < 1e-12);
            let f = f_embed(&s, &l).unwrap();
            let fc = compact_flat_coordinates(&s, &f).unwrap().metric(&s).unwrap();
            assert!((fc[0].abs() - 4.0 * (t / 4.0).tanh().atan()).abs() < 1e-12);
        }
        let b1 = b_embed_point(&s, 1.0).unwrap();
        let c = compact_flat_coordinates(&s, &b1).unwrap().metric(&s).unwrap();
        assert!((c[0].abs() - 0.8657694832396586).abs() < 1e-12);

        let circle = make_space(Family::CircleSphere, 1, 1).unwrap();
        let xn = TangentVector::new(&circle, Side::Noncompact, circle.noncompact_basis()[0].scale(1.0)).unwrap();
        let l = exp_point(&circle, &xn).unwrap();
        let c = compact_flat_coordinates(&circle, &l).unwrap().metric(&circle).unwrap();
        assert!((c[0] + 0.8657694832396586).abs() < 1e-12);
    }

    #[test]
    fn g_is_well_defined_on_cosets() {
        let s = make_space(Family::RealGrassmannian, 2, 3).unwrap();
        let y = Matrix::from_real_rows(&[vec![0.3, 0.1], vec![-0.2, 0.5], vec![0.1, 0.0]]).unwrap();
        let a = GroupElement::new(&s, Side::Noncompact, transitivity_element(&s, &y).unwrap()).unwrap();
        let (c, sn) = (0.7f64.cos(), 0.7f64.sin());
        let mut k = Matrix::identity(5, Field::Real);
        k.set_block(0, 0, &Matrix::from_real_rows(&[vec![c, -sn], vec![sn, c]]).unwrap());
        let ak = GroupElement::new(&s, Side::Noncompact, a.matrix() * &k).unwrap();
        let p1 = g_embed(&s, &a).unwrap().base_image(&s).unwrap();
        let p2 = g_embed(&s, &ak).unwrap().base_image(&s).unwrap();
        assert!(p1.distance(&p2).unwrap() < 1e-12);
        assert!(p1.distance(&p_embed(&s, &a).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn embedding_names_round_trip() {
        for e in Embedding::ALL {
            assert_eq!(e.to_string().parse::<Embedding>().unwrap(), e);
        }
        assert!("q".parse::<Embedding>().is_err());
    }
}
