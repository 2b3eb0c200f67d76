//! Exact metric projection onto polyhedral cones and minimization of a
//! linear functional over the intersection of a cone with the unit sphere.
//!
//! Everything is solved by enumerating active sets and doing exact rational
//! linear solves. Optimal values are generally irrational, so they are
//! reported as [`SignedSquare`]s and optimal directions as unnormalized
//! [`Ray`]s.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::rational::{dot, format_rational, primitive_integer_vector, Extended, Rational, SignedSquare};

pub const MAX_DIM: usize = 16;
pub const MAX_CONSTRAINTS: usize = 24;

/// A positive definite rational Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProduct {
    gram: RationalMatrix,
    inverse: RationalMatrix,
}

impl InnerProduct {
    pub fn new(gram: RationalMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        if gram.rows() == 0 {
            return Err(Error::InvalidInput("inner product of dimension 0".into()));
        }
        if !gram.is_symmetric() || gram.leading_principal_minors().iter().any(|m| !m.is_positive()) {
            return Err(Error::NotPositiveDefinite);
        }
        let inverse = gram.inverse().ok_or(Error::NotPositiveDefinite)?;
        Ok(Self { gram, inverse })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            gram: RationalMatrix::identity(dim),
            inverse: RationalMatrix::identity(dim),
        }
    }

    pub fn diagonal(weights: &[Rational]) -> Result<Self> {
        Self::new(RationalMatrix::diagonal(weights))
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    /// `Q v`, the covector dual to `v`.
    pub fn lower(&self, v: &[Rational]) -> Vec<Rational> {
        self.gram.mul_vec(v).expect("dimension checked by caller")
    }

    /// `Q⁻¹ c`, the vector dual to the covector `c`.
    pub fn raise(&self, c: &[Rational]) -> Vec<Rational> {
        self.inverse.mul_vec(c).expect("dimension checked by caller")
    }

    pub fn inner(&self, u: &[Rational], v: &[Rational]) -> Rational {
        dot(u, &self.lower(v))
    }

    pub fn norm_sq(&self, v: &[Rational]) -> Rational {
        self.inner(v, v)
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        Ok(())
    }
}

/// The cone `{ζ : ⟨a_j, ζ⟩ ≤ 0 for all j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyhedralCone {
    dim: usize,
    rows: Vec<Vec<Rational>>,
}

impl PolyhedralCone {
    /// Zero rows are dropped, the rest are scaled to primitive integer form
    /// and deduplicated, keeping first occurrences.
    pub fn new(dim: usize, constraints: Vec<Vec<Rational>>) -> Result<Self> {
        let cone = Self::new_unchecked(dim, constraints)?;
        if dim > MAX_DIM {
            return Err(Error::CapacityExceeded {
                what: "cone dimension",
                limit: MAX_DIM,
                found: dim,
            });
        }
        if cone.rows.len() > MAX_CONSTRAINTS {
            return Err(Error::CapacityExceeded {
                what: "constraint count",
                limit: MAX_CONSTRAINTS,
                found: cone.rows.len(),
            });
        }
        Ok(cone)
    }

    fn new_unchecked(dim: usize, constraints: Vec<Vec<Rational>>) -> Result<Self> {
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(constraints.len());
        for a in constraints {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            let row: Vec<Rational> = primitive_integer_vector(&a)
                .into_iter()
                .map(Rational::from_integer)
                .collect();
            if !rows.contains(&row) {
                rows.push(row);
            }
        }
        Ok(Self { dim, rows })
    }

    pub fn whole_space(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.rows.iter().all(|a| !dot(a, v).is_positive())
    }

    /// Indices of the constraints holding with equality at `v`.
    pub fn tight_set(&self, v: &[Rational]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&j| dot(&self.rows[j], v).is_zero()).collect()
    }

    fn with_extra_row(&self, a: &[Rational]) -> Self {
        let mut rows = self.rows.clone();
        rows.push(a.to_vec());
        Self::new_unchecked(self.dim, rows).expect("row length matches")
    }
}

/// An unnormalized direction; equality is equality of primitive forms, so
/// two rays are equal exactly when one is a positive multiple of the other.
#[derive(Debug, Clone)]
pub struct Ray {
    direction: Vec<Rational>,
    norm_sq: Rational,
}

impl Ray {
    pub fn new(direction: Vec<Rational>, metric: &InnerProduct) -> Result<Self> {
        metric.check_len(&direction)?;
        let norm_sq = metric.norm_sq(&direction);
        Ok(Self { direction, norm_sq })
    }

    pub fn direction(&self) -> &[Rational] {
        &self.direction
    }

    pub fn norm_sq(&self) -> &Rational {
        &self.norm_sq
    }

    pub fn is_zero(&self) -> bool {
        self.direction.iter().all(Zero::is_zero)
    }

    pub fn primitive(&self) -> Vec<BigInt> {
        primitive_integer_vector(&self.direction)
    }

    /// Floating-point unit vector, for display and float oracles only.
    pub fn normalized_f64(&self) -> Vec<f64> {
        let n = crate::rational::to_f64(&self.norm_sq).sqrt();
        self.direction
            .iter()
            .map(|x| crate::rational::to_f64(x) / n)
            .collect()
    }
}

impl PartialEq for Ray {
    fn eq(&self, other: &Self) -> bool {
        self.direction.len() == other.direction.len() && self.primitive() == other.primitive()
    }
}

impl Eq for Ray {}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.direction.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// First-order optimality witness `c + θ·Q·ray + Σ ν_j a_j = 0`.
///
/// For a projection of `u` onto the cone the same identity is recorded with
/// `c = −Q u` and `θ = 1`. `active_set` lists every tight constraint, so the
/// remaining constraints hold strictly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KktCertificate {
    pub active_set: Vec<usize>,
    pub multipliers: Vec<Rational>,
    pub theta: Rational,
    pub stationarity_residual: Vec<Rational>,
}

impl KktCertificate {
    pub fn is_valid(&self) -> bool {
        self.theta.is_positive()
            && self.multipliers.len() == self.active_set.len()
            && self.multipliers.iter().all(|m| !m.is_negative())
            && self.stationarity_residual.iter().all(Zero::is_zero)
    }

    pub fn multiplier_of(&self, constraint: usize) -> Option<&Rational> {
        self.active_set
            .iter()
            .position(|&j| j == constraint)
            .map(|i| &self.multipliers[i])
    }
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub point: Ray,
    pub certificate: KktCertificate,
}

/// Result of minimizing `⟨c, ζ⟩` over `{ζ ∈ C : ‖ζ‖_Q = 1}`.
///
/// `ray` and `certificate` are present exactly when the minimum is negative.
/// `value` is `+∞` when the cone is `{0}` and the sphere section is empty.
#[derive(Debug, Clone)]
pub struct SphereMinimum {
    pub ray: Option<Ray>,
    pub value: Extended<SignedSquare>,
    pub certificate: Option<KktCertificate>,
}

impl SphereMinimum {
    pub fn is_negative(&self) -> bool {
        self.ray.is_some()
    }
}

fn check_dims(metric: &InnerProduct, cone: &PolyhedralCone, v: &[Rational]) -> Result<()> {
    if cone.dim() != metric.dim() {
        return Err(Error::DimensionMismatch {
            expected: metric.dim(),
            found: cone.dim(),
        });
    }
    metric.check_len(v)
}

/// Precomputed data for equality-constrained projections of a fixed point.
struct ActiveSetSolver<'a> {
    cone: &'a PolyhedralCone,
    u: &'a [Rational],
    /// `Q⁻¹ a_j`.
    raised: Vec<Vec<Rational>>,
    /// `⟨a_i, Q⁻¹ a_j⟩`.
    gram: RationalMatrix,
    /// `⟨a_j, u⟩`.
    pairings: Vec<Rational>,
}

impl<'a> ActiveSetSolver<'a> {
    fn new(metric: &InnerProduct, cone: &'a PolyhedralCone, u: &'a [Rational]) -> Self {
        let rows = cone.constraints();
        let raised: Vec<Vec<Rational>> = rows.iter().map(|a| metric.raise(a)).collect();
        let m = rows.len();
        let mut gram = RationalMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                gram[(i, j)] = dot(&rows[i], &raised[j]);
            }
        }
        let pairings = rows.iter().map(|a| dot(a, u)).collect();
        Self {
            cone,
            u,
            raised,
            gram,
            pairings,
        }
    }

    /// Projection of `u` onto `{ζ : ⟨a_j, ζ⟩ = 0, j ∈ subset}` and the
    /// multipliers, or `None` if the subset's rows are dependent.
    fn solve(&self, subset: &[usize]) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let k = subset.len();
        let mut m = RationalMatrix::zeros(k, k);
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                m[(a, b)] = self.gram[(i, j)].clone();
            }
        }
        let rhs: Vec<Rational> = subset.iter().map(|&i| self.pairings[i].clone()).collect();
        let nu = m.solve_unique(&rhs)?;
        let mut zeta = self.u.to_vec();
        for (coef, &i) in nu.iter().zip(subset) {
            for (z, b) in zeta.iter_mut().zip(&self.raised[i]) {
                *z -= coef * b;
            }
        }
        Some((zeta, nu))
    }

    /// All independent active sets, smallest first.
    fn subsets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let m = self.cone.constraints().len();
        let max = m.min(self.cone.dim());
        (0..=max).flat_map(move |k| (0..m).combinations(k))
    }
}

/// Nonnegative `ν` with `Σ ν_t a_t = g` over `rows`, searching linearly
/// independent subsets.
fn conic_multipliers(rows: &[&Vec<Rational>], g: &[Rational]) -> Option<Vec<Rational>> {
    let dim = g.len();
    if g.iter().all(Zero::is_zero) {
        return Some(vec![Rational::zero(); rows.len()]);
    }
    for k in 1..=rows.len().min(dim) {
        for subset in (0..rows.len()).combinations(k) {
            let columns: Vec<Vec<Rational>> = subset.iter().map(|&t| rows[t].clone()).collect();
            let a = RationalMatrix::from_columns(&columns, dim).expect("row lengths agree");
            let Some(nu) = a.solve_unique(g) else {
                continue;
            };
            if nu.iter().any(Signed::is_negative) {
                continue;
            }
            let mut full = vec![Rational::zero(); rows.len()];
            for (value, &t) in nu.into_iter().zip(&subset) {
                full[t] = value;
            }
            return Some(full);
        }
    }
    None
}

/// Certificate for `c + θ·Q·ray + Σ ν_j a_j = 0` on the tight constraints,
/// if nonnegative multipliers exist.
fn certify(
    metric: &InnerProduct,
    cone: &PolyhedralCone,
    c: &[Rational],
    theta: &Rational,
    ray: &[Rational],
) -> Option<KktCertificate> {
    let active_set = cone.tight_set(ray);
    let q_ray = metric.lower(ray);
    let g: Vec<Rational> = c.iter().zip(&q_ray).map(|(ci, qi)| -(ci + theta * qi)).collect();
    let rows: Vec<&Vec<Rational>> = active_set.iter().map(|&j| &cone.constraints()[j]).collect();
    let multipliers = conic_multipliers(&rows, &g)?;
    let mut residual: Vec<Rational> = c.iter().zip(&q_ray).map(|(ci, qi)| ci + theta * qi).collect();
    for (nu, a) in multipliers.iter().zip(&rows) {
        for (r, aj) in residual.iter_mut().zip(a.iter()) {
            *r += nu * aj;
        }
    }
    Some(KktCertificate {
        active_set,
        multipliers,
        theta: theta.clone(),
        stationarity_residual: residual,
    })
}

/// The unique `Q`-nearest point of the cone to `u`, with its certificate.
pub fn project_cone(metric: &InnerProduct, cone: &PolyhedralCone, u: &[Rational]) -> Result<Projection> {
    check_dims(metric, cone, u)?;
    let solver = ActiveSetSolver::new(metric, cone, u);
    for subset in solver.subsets() {
        let Some((zeta, nu)) = solver.solve(&subset) else {
            continue;
        };
        if nu.iter().any(Signed::is_negative) || !cone.contains(&zeta) {
            continue;
        }
        let c: Vec<Rational> = metric.lower(u).into_iter().map(|x| -x).collect();
        let certificate = certify(metric, cone, &c, &Rational::from_integer(1.into()), &zeta)
            .ok_or_else(|| Error::VerificationFailed("projection certificate".into()))?;
        return Ok(Projection {
            point: Ray::new(zeta, metric)?,
            certificate,
        });
    }
    Err(Error::VerificationFailed("no active set yields the projection".into()))
}

/// Every distinct point produced by an active set passing feasibility and
/// multiplier-sign checks. Strict convexity makes this a singleton; the full
/// enumeration is exposed so callers can confirm it.
pub fn projection_candidates(
    metric: &InnerProduct,
    cone: &PolyhedralCone,
    u: &[Rational],
) -> Result<Vec<Vec<Rational>>> {
    check_dims(metric, cone, u)?;
    let solver = ActiveSetSolver::new(metric, cone, u);
    let mut found: Vec<Vec<Rational>> = Vec::new();
    for subset in solver.subsets() {
        let Some((zeta, nu)) = solver.solve(&subset) else {
            continue;
        };
        if nu.iter().any(Signed::is_negative) || !cone.contains(&zeta) {
            continue;
        }
        if !found.contains(&zeta) {
            found.push(zeta);
        }
    }
    Ok(found)
}

/// Whether the cone is `{0}`: a nonzero closed convex cone has a nonzero
/// projection of some `±e_i`.
pub fn is_trivial(metric: &InnerProduct, cone: &PolyhedralCone) -> Result<bool> {
    let n = cone.dim();
    for i in 0..n {
        for sign in [1i64, -1] {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::from_integer(sign.into());
            if !project_cone(metric, cone, &e)?.point.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Minimizes `⟨c, ζ⟩` over unit vectors of the cone.
///
/// A negative minimum is `−‖p‖_Q` with `p` the projection of `−Q⁻¹c`. When
/// `p = 0` the minimum is zero if the functional vanishes on a nonzero
/// point of the cone, `+∞` if the cone is `{0}`, and otherwise positive and
/// attained on an extreme ray.
pub fn min_linear_on_sphere_cone(
    metric: &InnerProduct,
    cone: &PolyhedralCone,
    c: &[Rational],
) -> Result<SphereMinimum> {
    check_dims(metric, cone, c)?;
    let u: Vec<Rational> = metric.raise(c).into_iter().map(|x| -x).collect();
    let projection = project_cone(metric, cone, &u)?;
    if !projection.point.is_zero() {
        let value = SignedSquare::neg_sqrt(projection.point.norm_sq().clone());
        return Ok(SphereMinimum {
            ray: Some(projection.point),
            value: Extended::Finite(value),
            certificate: Some(projection.certificate),
        });
    }
    let value = if !is_trivial(metric, &cone.with_extra_row(c))? {
        Extended::Finite(SignedSquare::zero())
    } else if is_trivial(metric, cone)? {
        Extended::Infinity
    } else {
        Extended::Finite(min_over_extreme_rays(metric, cone, c)?)
    };
    Ok(SphereMinimum {
        ray: None,
        value,
        certificate: None,
    })
}

fn min_over_extreme_rays(metric: &InnerProduct, cone: &PolyhedralCone, c: &[Rational]) -> Result<SignedSquare> {
    let n = cone.dim();
    let rows = cone.constraints();
    let mut best: Option<SignedSquare> = None;
    for subset in (0..rows.len()).combinations(n - 1) {
        let selected: Vec<Vec<Rational>> = subset.iter().map(|&j| rows[j].clone()).collect();
        let a = RationalMatrix::from_rows(selected, n)?;
        let kernel = a.kernel_basis();
        if kernel.len() != 1 {
            continue;
        }
        for sign in [1i64, -1] {
            let g: Vec<Rational> = kernel[0]
                .iter()
                .map(|x| x * Rational::from_integer(sign.into()))
                .collect();
            if !cone.contains(&g) {
                continue;
            }
            let value = SignedSquare::quotient_by_sqrt(&dot(c, &g), &metric.norm_sq(&g));
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
    }
    best.ok_or_else(|| Error::VerificationFailed("pointed cone without extreme rays".into()))
}

/// First-order optimality of `ray` for `min ⟨c, ζ⟩` on the cone's unit
/// sphere: feasibility, `θ = −⟨c, ray⟩ / ‖ray‖² > 0`, and nonnegative
/// multipliers on the tight constraints.
pub fn check_kkt(metric: &InnerProduct, cone: &PolyhedralCone, c: &[Rational], ray: &[Rational]) -> Result<bool> {
    check_dims(metric, cone, c)?;
    metric.check_len(ray)?;
    if ray.iter().all(Zero::is_zero) {
        return Err(Error::ZeroRay);
    }
    if !cone.contains(ray) {
        return Ok(false);
    }
    let theta = -dot(c, ray) / metric.norm_sq(ray);
    if !theta.is_positive() {
        return Ok(false);
    }
    Ok(certify(metric, cone, c, &theta, ray).is_some_and(|cert| cert.is_valid()))
}

/// Every distinct ray that is a KKT point of the sphere problem, found by
/// projecting `−Q⁻¹c` onto each active-set subspace without sign checks on
/// the multipliers and keeping the feasible candidates that pass
/// [`check_kkt`]. Used to confirm uniqueness of the optimum.
pub fn sphere_kkt_rays(metric: &InnerProduct, cone: &PolyhedralCone, c: &[Rational]) -> Result<Vec<Ray>> {
    check_dims(metric, cone, c)?;
    let u: Vec<Rational> = metric.raise(c).into_iter().map(|x| -x).collect();
    let solver = ActiveSetSolver::new(metric, cone, &u);
    let mut rays: Vec<Ray> = Vec::new();
    for subset in solver.subsets() {
        let Some((zeta, _)) = solver.solve(&subset) else {
            continue;
        };
        if zeta.iter().all(Zero::is_zero) || !cone.contains(&zeta) {
            continue;
        }
        if !check_kkt(metric, cone, c, &zeta)? {
            continue;
        }
        let ray = Ray::new(zeta, metric)?;
        if !rays.contains(&ray) {
            rays.push(ray);
        }
    }
    Ok(rays)
}
