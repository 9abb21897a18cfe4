//! Randomized property checks with reproducible seeds.
//!
//! Sample `i` of a check draws from a ChaCha stream keyed by `(seed, i)`, so
//! every report can be regenerated from its seed alone. Residuals are
//! aggregated by their maximum.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::embeddings::{
    b_embed_point, compact_flat_coordinates, embed, f_embed, h_tangent, image_fraction, log_noncompact, space_like,
    Embedding, GroupElement,
};
use crate::error::{Error, Result};
use crate::lattice::{cut_radius_closed, region_margin};
use crate::numkernel::{block_qr, svd, BlockShape, CMat, Field, Matrix};
use crate::spaces::{
    exp_point, graph_point, make_space, transitivity_element, Family, FlatCoordinates, Side, SpaceDescriptor,
    SubspacePoint, TangentVector,
};

pub const DEFAULT_SEED: u64 = 0x5EED;
/// Upper end of the singular values of sampled graph blocks.
pub const SIGMA_MAX: f64 = 0.95;
/// Largest singular value of near-boundary samples.
pub const NEAR_BOUNDARY_SIGMA: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property_name: String,
    pub samples: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub seed: u64,
    pub tolerance: f64,
}

impl PropertyReport {
    pub fn new(property_name: impl Into<String>, seed: u64, tolerance: f64) -> Self {
        Self { property_name: property_name.into(), samples: 0, failures: 0, worst_residual: 0.0, seed, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Records one sample that fails iff `residual > tolerance` or is not finite.
    pub fn record(&mut self, residual: f64) {
        self.record_with(residual, residual.is_finite() && residual <= self.tolerance);
    }

    /// Records one sample with an explicit verdict.
    pub fn record_with(&mut self, residual: f64, ok: bool) {
        self.samples += 1;
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.worst_residual = self.worst_residual.max(residual);
        if !ok {
            self.failures += 1;
        }
    }

    /// A sample whose computation itself failed.
    pub fn record_error(&mut self) {
        self.record_with(f64::INFINITY, false);
    }

    fn record_result(&mut self, r: Result<f64>) {
        match r {
            Ok(v) => self.record(v),
            Err(_) => self.record_error(),
        }
    }

    fn merge(&mut self, other: &PropertyReport) {
        self.samples += other.samples;
        self.failures += other.failures;
        self.worst_residual = self.worst_residual.max(other.worst_residual);
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}/{} failed, worst residual {:.3e} (tol {:.1e}, seed {:#x})",
            self.property_name, self.failures, self.samples, self.worst_residual, self.tolerance, self.seed
        )
    }
}

/// RNG for sample `index` of a run with `seed`.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn gaussian_matrix(rows: usize, cols: usize, field: Field, rng: &mut impl Rng) -> Matrix {
    let m = CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        match field {
            Field::Real => Complex64::new(re, 0.0),
            Field::Complex => Complex64::new(re, rng.sample(StandardNormal)) / 2f64.sqrt(),
        }
    });
    Matrix::from_inner(m, field).expect("finite samples")
}

/// Haar-distributed orthogonal or unitary matrix.
pub fn haar_unitary(size: usize, field: Field, rng: &mut impl Rng) -> Matrix {
    let shape = BlockShape::parabolic(&[size]).expect("nonzero size");
    loop {
        if let Ok(f) = block_qr(&gaussian_matrix(size, size, field, rng), &shape) {
            return f.q;
        }
    }
}

/// Random element of the isotropy group of the base point.
pub fn random_isotropy(space: &SpaceDescriptor, rng: &mut impl Rng) -> Matrix {
    let mut u = haar_unitary(space.n(), space.field(), rng);
    let mut v = haar_unitary(space.m(), space.field(), rng);
    if space.is_oriented() {
        for b in [&mut u, &mut v] {
            if b.determinant().expect("square").re < 0.0 {
                b.negate_column(0);
            }
        }
    }
    Matrix::block_diag(&u, &v)
}

/// `Y = W·diag(σ)·Zᴴ` with Haar `W`, `Z` and `σᵢ` uniform in `[0, sigma_max]`.
pub fn random_graph_block(space: &SpaceDescriptor, sigma_max: f64, rng: &mut impl Rng) -> Matrix {
    let sigma: Vec<f64> = (0..space.rank()).map(|_| rng.random_range(0.0..=sigma_max)).collect();
    graph_block_with(space, &sigma, rng)
}

fn graph_block_with(space: &SpaceDescriptor, sigma: &[f64], rng: &mut impl Rng) -> Matrix {
    let (n, m) = (space.n(), space.m());
    let w = haar_unitary(m, space.field(), rng);
    let z = haar_unitary(n, space.field(), rng);
    let mut s = Matrix::zeros(m, n, space.field());
    for (i, v) in sigma.iter().enumerate() {
        s.set_block(i, i, &Matrix::diag(&[*v], space.field()));
    }
    &(&w * &s) * &z.adjoint()
}

/// Random coset representative `T(Y)·k₀` of the noncompact space.
pub fn random_noncompact(space: &SpaceDescriptor, rng: &mut impl Rng) -> Result<GroupElement> {
    let y = random_graph_block(space, SIGMA_MAX, rng);
    let k0 = random_isotropy(space, rng);
    let a = &transitivity_element(space, &y)? * &k0;
    GroupElement::new(space, Side::Noncompact, a)
}

/// Uniform unit vector in orthonormal flat coordinates.
pub fn random_flat_direction(rank: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..rank).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Default tolerance of the embedding identities.
pub const EMBED_TOL: f64 = 1e-9;

/// `p = g = f` on random cosets; residual is the largest pairwise distance.
pub fn check_triple_equality(space: &SpaceDescriptor, samples: usize, seed: u64, tol: f64) -> PropertyReport {
    let mut report = PropertyReport::new(format!("triple-equality[{}]", space.id()), seed, tol);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        report.record_result((|| {
            let a = random_noncompact(space, &mut rng)?;
            let p = embed(space, Embedding::P, &a)?;
            let g = embed(space, Embedding::G, &a)?;
            let f = embed(space, Embedding::F, &a)?;
            Ok(p.distance(&g)?.max(p.distance(&f)?).max(g.distance(&f)?))
        })());
    }
    report
}

/// `embed(k·x) = k·embed(x)` for random `k` in the isotropy group.
pub fn check_equivariance(
    space: &SpaceDescriptor,
    which: Embedding,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    if which == Embedding::B {
        return Err(Error::Unsupported("equivariance is checked for p, g and f".into()));
    }
    let mut report = PropertyReport::new(format!("equivariance-{which}[{}]", space.id()), seed, tol);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        report.record_result((|| {
            let a = random_noncompact(space, &mut rng)?;
            let k = random_isotropy(space, &mut rng);
            let lhs = embed(space, which, &a.left_mul(&k)?)?;
            let rhs = embed(space, which, &a)?.act(&k)?;
            lhs.distance(&rhs)
        })());
    }
    Ok(report)
}

fn requires_space_like(space: &SpaceDescriptor, which: Embedding) -> bool {
    which != Embedding::F || matches!(space.family(), Family::RealGrassmannian | Family::ComplexGrassmannian)
}

/// Every image point lies strictly inside `c·R` for the embedding's image
/// fraction `c`; images of `p`, `g`, `b` (and of `f` on Grassmannians) are
/// space-like. The residual is `‖X‖ / (c·t̄₀)` of the compact logarithm, so
/// the tolerance is 1 and attaining it fails.
pub fn check_image_region(
    space: &SpaceDescriptor,
    which: Embedding,
    samples: usize,
    seed: u64,
) -> Result<PropertyReport> {
    if which == Embedding::B && space.family() != Family::CircleSphere {
        return Err(Error::Unsupported(format!("b is only realized on spheres, not {}", space.id())));
    }
    let fraction = image_fraction(space, which);
    let mut report = PropertyReport::new(format!("image-region-{which}[{}]", space.id()), seed, 1.0);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        let sample = (|| {
            let point = if which == Embedding::B {
                b_embed_point(space, rng.random_range(-20.0..=20.0))?
            } else {
                embed(space, which, &random_noncompact(space, &mut rng)?)?
            };
            image_ratio(space, &point, fraction, requires_space_like(space, which))
        })();
        match sample {
            Ok((ratio, ok)) => report.record_with(ratio, ok),
            Err(_) => report.record_error(),
        }
    }
    Ok(report)
}

fn image_ratio(
    space: &SpaceDescriptor,
    point: &SubspacePoint,
    fraction: f64,
    need_space_like: bool,
) -> Result<(f64, bool)> {
    let coords = compact_flat_coordinates(space, point)?;
    let lattice = space.lattice();
    let norm = lattice.norm(&coords.coords)?;
    let margin = region_margin(lattice, &coords.coords, fraction)?;
    let ratio = if norm == 0.0 { 0.0 } else { norm / (norm + margin) };
    let inside = margin > 0.0;
    let ok = inside && (!need_space_like || space_like(space, point)?);
    Ok((ratio, ok))
}

/// Samples with `σ_max = 1 − 10⁻⁶`: the largest compact lattice coordinate of
/// the image must stay below `¼` and come within `tol` of it. Residual is
/// the gap `¼ − max|zᵢ|`. Grassmannians only.
pub fn check_near_boundary(
    space: &SpaceDescriptor,
    which: Embedding,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    if !matches!(space.family(), Family::RealGrassmannian | Family::ComplexGrassmannian) {
        return Err(Error::Unsupported(format!("near-boundary check needs a Grassmannian, not {}", space.id())));
    }
    if which == Embedding::B {
        return Err(Error::Unsupported("near-boundary check applies to p, g and f".into()));
    }
    let mut report = PropertyReport::new(format!("near-boundary-{which}[{}]", space.id()), seed, tol);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        let gap = (|| -> Result<f64> {
            let mut sigma: Vec<f64> = (0..space.rank()).map(|_| rng.random_range(0.0..=SIGMA_MAX)).collect();
            sigma[0] = NEAR_BOUNDARY_SIGMA;
            let y = graph_block_with(space, &sigma, &mut rng);
            let a = GroupElement::new(space, Side::Noncompact, transitivity_element(space, &y)?)?;
            let point = embed(space, which, &a)?;
            let z = compact_flat_coordinates(space, &point)?;
            Ok(0.25 - z.coords.iter().fold(0f64, |m, v| m.max(v.abs())))
        })();
        match gap {
            Ok(g) => report.record_with(g, g > 0.0 && g <= tol),
            Err(_) => report.record_error(),
        }
    }
    Ok(report)
}

/// `exp(t̄₀X)·o` meets `o^⊥` while `exp((t̄₀ − 0.01)X)·o` does not, for random
/// unit flat directions `X`. Residual is the smallest singular value of the
/// top block at the cut point; at the earlier point it must exceed `tol`.
pub fn check_cut_loci_grassmannian(
    space: &SpaceDescriptor,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<PropertyReport> {
    if space.family() != Family::RealGrassmannian {
        return Err(Error::Unsupported(format!("cut-locus check needs a real Grassmannian, not {}", space.id())));
    }
    let mut report = PropertyReport::new(format!("cut-loci[{}]", space.id()), seed, tol);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        let sample = (|| -> Result<(f64, f64)> {
            let u = random_flat_direction(space.rank(), &mut rng);
            let t0 = cut_radius_closed(space.lattice(), &space.lattice().to_lattice(&u)?)?;
            let top_min = |t: f64| -> Result<f64> {
                let scaled: Vec<f64> = u.iter().map(|v| v * t).collect();
                let x = TangentVector::new(space, Side::Compact, space.flat_matrix(Side::Compact, &scaled)?)?;
                let s = svd(&exp_point(space, &x)?.top_block())?;
                Ok(*s.singular_values.last().expect("n >= 1"))
            };
            Ok((top_min(t0)?, top_min(t0 - 0.01)?))
        })();
        match sample {
            Ok((at_cut, before)) => report.record_with(at_cut, at_cut <= tol && before > tol),
            Err(_) => report.record_error(),
        }
    }
    Ok(report)
}

/// `f` of the complex Grassmannian restricted to real points equals `f` of
/// the real Grassmannian.
pub fn check_restriction(n: usize, m: usize, samples: usize, seed: u64, tol: f64) -> Result<PropertyReport> {
    let real = make_space(Family::RealGrassmannian, n, m)?;
    let complex = make_space(Family::ComplexGrassmannian, n, m)?;
    let mut report = PropertyReport::new(format!("restriction[{n}:{m}]"), seed, tol);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        report.record_result((|| {
            let y = random_graph_block(&real, SIGMA_MAX, &mut rng);
            let fr = f_embed(&real, &graph_point(&real, &y)?)?;
            let fc = f_embed(&complex, &graph_point(&complex, &y.to_complex())?)?;
            SubspacePoint::new(&complex, fr.rep().to_complex())?.distance(&fc)
        })());
    }
    Ok(report)
}

/// `exp ∘ log = id` on random space-like points.
pub fn check_round_trip(space: &SpaceDescriptor, samples: usize, seed: u64, tol: f64) -> PropertyReport {
    let mut report = PropertyReport::new(format!("exp-log[{}]", space.id()), seed, tol);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        report.record_result((|| {
            let l = graph_point(space, &random_graph_block(space, SIGMA_MAX, &mut rng))?;
            let back = exp_point(space, &log_noncompact(space, &l)?)?;
            back.distance(&l)
        })());
    }
    report
}

/// `h(Ad k H) = Ad k h(H)` for flat `H` with repeated coordinates, where the
/// decomposition of `Ad k H` is free to pick a different `k`.
pub fn check_h_independence(space: &SpaceDescriptor, samples: usize, seed: u64, tol: f64) -> PropertyReport {
    let mut report = PropertyReport::new(format!("h-independence[{}]", space.id()), seed, tol);
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        report.record_result((|| {
            let r = space.rank();
            let level = rng.random_range(-2.0..=2.0);
            let mut x: Vec<f64> = vec![level; r];
            if r > 2 {
                x[r - 1] = rng.random_range(-2.0..=2.0);
            }
            let h = FlatCoordinates { space: space.id(), side: Side::Noncompact, coords: x };
            let k = random_isotropy(space, &mut rng);
            let lifted = h.to_tangent(space)?.conjugate(&k);
            let direct = crate::embeddings::h_flat(&h).coords.to_tangent(space)?.conjugate(&k);
            Ok(h_tangent(space, &lifted)?.matrix().distance(direct.matrix()))
        })());
    }
    report
}

/// Geodesic triangle with sides `[a, b, c]` opposite angles `[A, B, C]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triangle {
    pub sides: [f64; 3],
    pub angles: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Model {
    Sphere,
    Hyperbolic,
}

impl Model {
    fn form(self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        match self {
            Model::Sphere => x[0] * y[0] + x[1] * y[1] + x[2] * y[2],
            Model::Hyperbolic => x[0] * y[0] - x[1] * y[1] - x[2] * y[2],
        }
    }

    fn distance(self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        match self {
            Model::Sphere => {
                let cross = [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]];
                let s = cross.iter().map(|v| v * v).sum::<f64>().sqrt();
                s.atan2(self.form(x, y))
            }
            Model::Hyperbolic => self.form(x, y).max(1.0).acosh(),
        }
    }

    /// Point at distance `d` from the pole in azimuth `phi`.
    fn polar(self, d: f64, phi: f64) -> [f64; 3] {
        let (c, s) = match self {
            Model::Sphere => (d.cos(), d.sin()),
            Model::Hyperbolic => (d.cosh(), d.sinh()),
        };
        [c, s * phi.cos(), s * phi.sin()]
    }

    /// Angle at `p` between the geodesics towards `q` and `r`.
    fn angle(self, p: &[f64; 3], q: &[f64; 3], r: &[f64; 3]) -> f64 {
        let tangent = |x: &[f64; 3]| {
            let c = self.form(p, x);
            [x[0] - c * p[0], x[1] - c * p[1], x[2] - c * p[2]]
        };
        let (u, v) = (tangent(q), tangent(r));
        let sign = if self == Model::Sphere { 1.0 } else { -1.0 };
        let g = |a: &[f64; 3], b: &[f64; 3]| sign * self.form(a, b);
        let (uu, vv, uv) = (g(&u, &u), g(&v, &v), g(&u, &v));
        (uu * vv - uv * uv).max(0.0).sqrt().atan2(uv)
    }

    fn random_isometry(self, rng: &mut impl Rng) -> Result<Matrix> {
        match self {
            Model::Sphere => {
                let mut q = haar_unitary(3, Field::Real, rng);
                if q.determinant()?.re < 0.0 {
                    q.negate_column(0);
                }
                Ok(q)
            }
            Model::Hyperbolic => {
                let plane = make_space(Family::CircleSphere, 1, 2)?;
                let mut y = Matrix::from_real_fn(2, 1, |_, _| rng.sample(StandardNormal))?;
                let norm = y.norm_fro().max(1e-12);
                y = y.scale(rng.random_range(0.0..0.9) / norm);
                Ok(&transitivity_element(&plane, &y)? * &random_isotropy(&plane, rng))
            }
        }
    }
}

fn build_triangle(model: Model, sides: [f64; 3], rng: &mut impl Rng) -> Result<Triangle> {
    let [a, b, c] = sides;
    if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::DegenerateTriangle("sides must be positive".into()));
    }
    if model == Model::Sphere
        && (sides.iter().any(|s| *s >= std::f64::consts::PI) || a + b + c >= 2.0 * std::f64::consts::PI)
    {
        return Err(Error::DegenerateTriangle("spherical sides need each < pi and sum < 2 pi".into()));
    }
    if a >= b + c || b >= a + c || c >= a + b {
        return Err(Error::DegenerateTriangle("triangle inequality fails".into()));
    }
    let pa = [1.0, 0.0, 0.0];
    let pb = model.polar(c, 0.0);
    let (mut lo, mut hi) = (0.0, std::f64::consts::PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if model.distance(&pb, &model.polar(b, mid)) < a {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let pc = model.polar(b, 0.5 * (lo + hi));
    let g = model.random_isometry(rng)?;
    let apply = |x: &[f64; 3]| -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| g.re(i, j) * x[j]).sum();
        }
        out
    };
    let (pa, pb, pc) = (apply(&pa), apply(&pb), apply(&pc));
    let measured = [model.distance(&pb, &pc), model.distance(&pa, &pc), model.distance(&pa, &pb)];
    let angles = [model.angle(&pa, &pb, &pc), model.angle(&pb, &pa, &pc), model.angle(&pc, &pa, &pb)];
    if angles.iter().any(|x| *x <= 1e-6 || *x >= std::f64::consts::PI - 1e-6) {
        return Err(Error::DegenerateTriangle("angle too close to 0 or pi".into()));
    }
    Ok(Triangle { sides: measured, angles })
}

/// Builds a spherical triangle from its sides, placed by a random rotation.
pub fn spherical_triangle(sides: [f64; 3], rng: &mut impl Rng) -> Result<Triangle> {
    build_triangle(Model::Sphere, sides, rng)
}

/// Builds a hyperbolic triangle from its sides, placed by a random isometry.
pub fn hyperbolic_triangle(sides: [f64; 3], rng: &mut impl Rng) -> Result<Triangle> {
    build_triangle(Model::Hyperbolic, sides, rng)
}

fn relative(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0)
}

/// Laws of cosines and sines; for the hyperbolic case also the variant
/// with `+ sinh b sinh c cos A`. Returns `(worst standard, worst variant)`.
fn law_residuals(model: Model, t: &Triangle) -> (f64, f64) {
    type Trig = fn(f64) -> f64;
    let (cs, sn): (Trig, Trig) = match model {
        Model::Sphere => (f64::cos, f64::sin),
        Model::Hyperbolic => (f64::cosh, f64::sinh),
    };
    let sign = if model == Model::Sphere { 1.0 } else { -1.0 };
    let mut worst = 0f64;
    let mut variant = 0f64;
    for i in 0..3 {
        let (a, b, c) = (t.sides[i], t.sides[(i + 1) % 3], t.sides[(i + 2) % 3]);
        let big_a = t.angles[i];
        let base = cs(b) * cs(c);
        let cross = sn(b) * sn(c) * big_a.cos();
        worst = worst.max(relative(cs(a), base + sign * cross));
        variant = variant.max(relative(cs(a), base - sign * cross));
        let j = (i + 1) % 3;
        worst = worst.max(relative(sn(a) / big_a.sin(), sn(t.sides[j]) / t.angles[j].sin()));
    }
    (worst, variant)
}

/// Reports of one trigonometric duality run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigDualityReport {
    pub spherical: PropertyReport,
    pub hyperbolic: PropertyReport,
    /// Worst residual of `cosh a = cosh b cosh c + sinh b sinh c cos A`,
    /// recorded for reference only.
    pub hyperbolic_printed_sign_residual: f64,
}

impl TrigDualityReport {
    pub fn passed(&self) -> bool {
        self.spherical.passed() && self.hyperbolic.passed()
    }
}

/// Laws of sines and cosines on the triangle with the given sides, built on
/// the sphere (when admissible there) and in the hyperbolic plane.
pub fn check_trig_duality(sides: [f64; 3], seed: u64, tol: f64) -> Result<TrigDualityReport> {
    let mut rng = sample_rng(seed, 0);
    let mut spherical = PropertyReport::new("trig-spherical", seed, tol);
    let mut hyperbolic = PropertyReport::new("trig-hyperbolic", seed, tol);
    let mut printed = 0f64;
    let mut built = false;
    if let Ok(t) = spherical_triangle(sides, &mut rng) {
        spherical.record(law_residuals(Model::Sphere, &t).0);
        built = true;
    }
    if let Ok(t) = hyperbolic_triangle(sides, &mut rng) {
        let (std_res, var_res) = law_residuals(Model::Hyperbolic, &t);
        hyperbolic.record(std_res);
        printed = var_res;
        built = true;
    }
    if !built {
        return Err(Error::DegenerateTriangle(format!("no triangle with sides {sides:?}")));
    }
    Ok(TrigDualityReport { spherical, hyperbolic, hyperbolic_printed_sign_residual: printed })
}

fn random_sides(model: Model, rng: &mut impl Rng) -> [f64; 3] {
    let hi = match model {
        Model::Sphere => std::f64::consts::PI - 0.2,
        Model::Hyperbolic => 3.0,
    };
    loop {
        let s = [rng.random_range(0.2..hi), rng.random_range(0.2..hi), rng.random_range(0.2..hi)];
        let margin = (s[1] + s[2] - s[0]).min(s[0] + s[2] - s[1]).min(s[0] + s[1] - s[2]);
        let closed = model == Model::Hyperbolic || s.iter().sum::<f64>() < 2.0 * std::f64::consts::PI - 0.3;
        if margin > 0.1 && closed {
            return s;
        }
    }
}

/// `samples` random triangles on each side of the duality.
pub fn check_trig_duality_random(samples: usize, seed: u64, tol: f64) -> TrigDualityReport {
    let mut spherical = PropertyReport::new("trig-spherical", seed, tol);
    let mut hyperbolic = PropertyReport::new("trig-hyperbolic", seed, tol);
    let mut printed = 0f64;
    for i in 0..samples {
        let mut rng = sample_rng(seed, i);
        match spherical_triangle(random_sides(Model::Sphere, &mut rng), &mut rng) {
            Ok(t) => spherical.record(law_residuals(Model::Sphere, &t).0),
            Err(_) => spherical.record_error(),
        }
        match hyperbolic_triangle(random_sides(Model::Hyperbolic, &mut rng), &mut rng) {
            Ok(t) => {
                let (std_res, var_res) = law_residuals(Model::Hyperbolic, &t);
                hyperbolic.record(std_res);
                printed = printed.max(var_res);
            }
            Err(_) => hyperbolic.record_error(),
        }
    }
    TrigDualityReport { spherical, hyperbolic, hyperbolic_printed_sign_residual: printed }
}

/// Named property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    TripleEquality,
    Equivariance,
    ImageRegion,
    NearBoundary,
    CutLoci,
    Restriction,
    RoundTrip,
    HIndependence,
    TrigDuality,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::TripleEquality,
        Property::Equivariance,
        Property::ImageRegion,
        Property::NearBoundary,
        Property::CutLoci,
        Property::Restriction,
        Property::RoundTrip,
        Property::HIndependence,
        Property::TrigDuality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::TripleEquality => "triple-equality",
            Property::Equivariance => "equivariance",
            Property::ImageRegion => "image-region",
            Property::NearBoundary => "near-boundary",
            Property::CutLoci => "cut-loci",
            Property::Restriction => "restriction",
            Property::RoundTrip => "round-trip",
            Property::HIndependence => "h-independence",
            Property::TrigDuality => "trig-duality",
        }
    }

    /// Default tolerance of the property.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Property::NearBoundary => 1e-5,
            Property::CutLoci => 1e-10,
            Property::TrigDuality => 1e-8,
            Property::ImageRegion => 1.0,
            _ => EMBED_TOL,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown property '{s}'")))
    }
}

/// Runs one property on one space. Properties with a per-embedding variant
/// run for `p`, `g` and `f`; checks that do not apply to the space return
/// [`Error::Unsupported`].
pub fn run_property(
    space: &SpaceDescriptor,
    property: Property,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<PropertyReport>> {
    let pgf = [Embedding::P, Embedding::G, Embedding::F];
    match property {
        Property::TripleEquality => {
            if !matches!(space.family(), Family::RealGrassmannian | Family::ComplexGrassmannian) {
                return Err(Error::Unsupported(format!(
                    "p = g = f is a Grassmannian identity, not for {}",
                    space.id()
                )));
            }
            Ok(vec![check_triple_equality(space, samples, seed, tol)])
        }
        Property::Equivariance => pgf.iter().map(|&e| check_equivariance(space, e, samples, seed, tol)).collect(),
        Property::ImageRegion => {
            let mut out: Vec<PropertyReport> =
                pgf.iter().map(|&e| check_image_region(space, e, samples, seed)).collect::<Result<_>>()?;
            if space.family() == Family::CircleSphere {
                out.push(check_image_region(space, Embedding::B, samples, seed)?);
            }
            Ok(out)
        }
        Property::NearBoundary => pgf.iter().map(|&e| check_near_boundary(space, e, samples, seed, tol)).collect(),
        Property::CutLoci => Ok(vec![check_cut_loci_grassmannian(space, samples, seed, tol)?]),
        Property::Restriction => {
            if !matches!(space.family(), Family::RealGrassmannian | Family::ComplexGrassmannian) {
                return Err(Error::Unsupported("restriction compares real and complex Grassmannians".into()));
            }
            Ok(vec![check_restriction(space.n(), space.m(), samples, seed, tol)?])
        }
        Property::RoundTrip => Ok(vec![check_round_trip(space, samples, seed, tol)]),
        Property::HIndependence => Ok(vec![check_h_independence(space, samples, seed, tol)]),
        Property::TrigDuality => {
            let r = check_trig_duality_random(samples, seed, tol);
            Ok(vec![r.spherical, r.hyperbolic])
        }
    }
}

/// Combines reports of the same property into one.
pub fn merge_reports(name: &str, reports: &[PropertyReport]) -> PropertyReport {
    let seed = reports.first().map_or(DEFAULT_SEED, |r| r.seed);
    let tol = reports.iter().fold(0f64, |m, r| m.max(r.tolerance));
    let mut out = PropertyReport::new(name, seed, tol);
    for r in reports {
        out.merge(r);
    }
    out
}
