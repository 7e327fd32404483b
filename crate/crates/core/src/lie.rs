//! The hexaspherical model: R^{4,2} with a fixed basis, sphere lifts,
//! subspaces and their signatures.
//!
//! Coordinates are ordered `(x1, x2, x3, u0, uinf, u6)` against the basis
//! `(e1, e2, e3, e0, e∞, e6)`. The Gram matrix is the identity on the
//! spatial block, `(e0, e∞) = -1` on the null pair and `(e6, e6) = -1`.
//! The point sphere complex is `e6` and the Euclidean space form vector is
//! `e∞`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, Matrix6, SymmetricEigen, Vector3, Vector6};

use crate::error::{Error, Result};
use crate::tol::Tolerances;

pub type Vec3 = Vector3<f64>;

pub const X1: usize = 0;
pub const X2: usize = 1;
pub const X3: usize = 2;
pub const U0: usize = 3;
pub const UINF: usize = 4;
pub const U6: usize = 5;

/// A vector of R^{4,2} in the fixed basis.
#[derive(Clone, Copy, PartialEq)]
pub struct LieVec(pub Vector6<f64>);

impl fmt::Debug for LieVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.0;
        write!(
            f,
            "LieVec[{:.6e}, {:.6e}, {:.6e} | {:.6e}, {:.6e} | {:.6e}]",
            c[0], c[1], c[2], c[3], c[4], c[5]
        )
    }
}

/// Gram matrix of the metric of signature (4,2).
pub fn gram() -> Matrix6<f64> {
    let mut g = Matrix6::zeros();
    g[(X1, X1)] = 1.0;
    g[(X2, X2)] = 1.0;
    g[(X3, X3)] = 1.0;
    g[(U0, UINF)] = -1.0;
    g[(UINF, U0)] = -1.0;
    g[(U6, U6)] = -1.0;
    g
}

impl LieVec {
    pub fn new(x1: f64, x2: f64, x3: f64, u0: f64, uinf: f64, u6: f64) -> Self {
        Self(Vector6::new(x1, x2, x3, u0, uinf, u6))
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self(Vector6::from_row_slice(&a))
    }

    pub fn to_array(self) -> [f64; 6] {
        [
            self.0[0], self.0[1], self.0[2], self.0[3], self.0[4], self.0[5],
        ]
    }

    pub fn zero() -> Self {
        Self(Vector6::zeros())
    }

    pub fn e1() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }
    pub fn e2() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    }
    pub fn e3() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0)
    }
    pub fn e0() -> Self {
        Self::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0)
    }
    pub fn einf() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 1.0, 0.0)
    }
    pub fn e6() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0)
    }

    /// The point sphere complex.
    pub fn point_complex() -> Self {
        Self::e6()
    }

    /// Space form vector of Euclidean geometry.
    pub fn euclidean_form() -> Self {
        Self::einf()
    }

    pub fn spatial(&self) -> Vec3 {
        Vec3::new(self.0[X1], self.0[X2], self.0[X3])
    }

    pub fn u0(&self) -> f64 {
        self.0[U0]
    }
    pub fn uinf(&self) -> f64 {
        self.0[UINF]
    }
    pub fn u6(&self) -> f64 {
        self.0[U6]
    }

    pub fn inner(&self, other: &LieVec) -> f64 {
        inner(self, other)
    }

    pub fn norm_sq(&self) -> f64 {
        inner(self, self)
    }

    /// Auxiliary Euclidean norm of the coordinates.
    pub fn aux_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn aux_dot(&self, other: &LieVec) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn aux_normalized(&self) -> LieVec {
        let n = self.aux_norm();
        if n == 0.0 {
            *self
        } else {
            *self / n
        }
    }

    /// Relative nullity `|(v,v)| / |v|^2`.
    pub fn null_residual(&self) -> f64 {
        let n = self.aux_norm();
        if n == 0.0 {
            return 0.0;
        }
        self.norm_sq().abs() / (n * n)
    }

    pub fn is_null(&self, tol: f64) -> bool {
        self.null_residual() <= tol
    }

    /// Scale-free distance of two homogeneous vectors: `1 - |â·b̂|` on
    /// auxiliary-normalized representatives.
    pub fn projective_distance(&self, other: &LieVec) -> f64 {
        let a = self.aux_norm();
        let b = other.aux_norm();
        if a == 0.0 || b == 0.0 {
            return 1.0;
        }
        (1.0 - (self.aux_dot(other) / (a * b)).abs()).max(0.0)
    }

    /// Sine of the angle between the projective points, a better
    /// conditioned companion of [`LieVec::projective_distance`].
    pub fn projective_sine(&self, other: &LieVec) -> f64 {
        let a = self.aux_normalized();
        let b = other.aux_normalized();
        let c = a.aux_dot(&b);
        (b - a * c).aux_norm()
    }

    /// Gram reflection in a non-null vector `m`.
    pub fn reflect_in(&self, m: &LieVec) -> LieVec {
        let mm = m.norm_sq();
        *self - *m * (2.0 * self.inner(m) / mm)
    }
}

impl Add for LieVec {
    type Output = LieVec;
    fn add(self, rhs: LieVec) -> LieVec {
        LieVec(self.0 + rhs.0)
    }
}

impl AddAssign for LieVec {
    fn add_assign(&mut self, rhs: LieVec) {
        self.0 += rhs.0;
    }
}

impl Sub for LieVec {
    type Output = LieVec;
    fn sub(self, rhs: LieVec) -> LieVec {
        LieVec(self.0 - rhs.0)
    }
}

impl Mul<f64> for LieVec {
    type Output = LieVec;
    fn mul(self, rhs: f64) -> LieVec {
        LieVec(self.0 * rhs)
    }
}

impl Div<f64> for LieVec {
    type Output = LieVec;
    fn div(self, rhs: f64) -> LieVec {
        LieVec(self.0 / rhs)
    }
}

impl Neg for LieVec {
    type Output = LieVec;
    fn neg(self) -> LieVec {
        LieVec(-self.0)
    }
}

/// The metric of signature (4,2).
pub fn inner(a: &LieVec, b: &LieVec) -> f64 {
    let (a, b) = (&a.0, &b.0);
    a[X1] * b[X1] + a[X2] * b[X2] + a[X3] * b[X3]
        - a[U0] * b[UINF]
        - a[UINF] * b[U0]
        - a[U6] * b[U6]
}

/// Oriented sphere with center `c` and signed radius `r`:
/// `e0 + c + ½(|c|² − r²)e∞ + r·e6`.
pub fn lift_sphere(center: &Vec3, radius: f64) -> LieVec {
    let c = center;
    LieVec::new(
        c.x,
        c.y,
        c.z,
        1.0,
        0.5 * (c.norm_squared() - radius * radius),
        radius,
    )
}

/// Oriented plane `{x : n·x = d}` with unit normal `n`: `n + d·e∞ + e6`.
pub fn lift_plane(normal: &Vec3, offset: f64) -> LieVec {
    LieVec::new(normal.x, normal.y, normal.z, 0.0, offset, 1.0)
}

/// Point sphere `e0 + x + ½|x|²e∞`.
pub fn lift_point(x: &Vec3) -> LieVec {
    LieVec::new(x.x, x.y, x.z, 1.0, 0.5 * x.norm_squared(), 0.0)
}

/// Euclidean reading of a Lie sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LieSphere {
    Point(Vec3),
    Sphere { center: Vec3, radius: f64 },
    Plane { normal: Vec3, offset: f64 },
    PointAtInfinity,
}

impl LieSphere {
    pub fn lift(&self) -> LieVec {
        match self {
            LieSphere::Point(x) => lift_point(x),
            LieSphere::Sphere { center, radius } => lift_sphere(center, *radius),
            LieSphere::Plane { normal, offset } => lift_plane(normal, *offset),
            LieSphere::PointAtInfinity => LieVec::einf(),
        }
    }
}

/// Classify a null vector as point, sphere, plane or the point at infinity.
pub fn unlift(eta: &LieVec, tol: &Tolerances) -> Result<LieSphere> {
    let res = eta.null_residual();
    if res > tol.contact || eta.aux_norm() == 0.0 {
        return Err(Error::NotLieSphere(res));
    }
    Ok(unlift_unchecked(eta, tol.rank))
}

pub(crate) fn unlift_unchecked(eta: &LieVec, eps: f64) -> LieSphere {
    let scale = eta.aux_norm();
    let small = |v: f64| v.abs() <= eps * scale;
    if small(eta.u0()) {
        if small(eta.u6()) && eta.spatial().norm() <= eps * scale {
            return LieSphere::PointAtInfinity;
        }
        if small(eta.u6()) {
            // A null vector with u0 = u6 = 0 has vanishing spatial part.
            return LieSphere::PointAtInfinity;
        }
        let v = *eta / eta.u6();
        return LieSphere::Plane {
            normal: v.spatial(),
            offset: v.uinf(),
        };
    }
    let v = *eta / eta.u0();
    if small(eta.u6()) {
        LieSphere::Point(v.spatial())
    } else {
        LieSphere::Sphere {
            center: v.spatial(),
            radius: v.u6(),
        }
    }
}

/// Euclidean point of a point sphere, `None` for the point at infinity.
pub fn point_of(eta: &LieVec, eps: f64) -> Option<Vec3> {
    let scale = eta.aux_norm();
    if eta.u0().abs() <= eps * scale {
        None
    } else {
        Some((*eta / eta.u0()).spatial())
    }
}

/// Oriented contact test; both inputs must be null.
pub fn in_oriented_contact(a: &LieVec, b: &LieVec, tol: &Tolerances) -> Result<bool> {
    for v in [a, b] {
        let res = v.null_residual();
        if res > tol.contact {
            return Err(Error::NotLieSphere(res));
        }
    }
    Ok(inner(a, b).abs() <= tol.contact * a.aux_norm() * b.aux_norm())
}

/// Unit spacelike vector of `<e6>^⊥` for an oriented sphere, `S/u6 − e6`.
///
/// Flipping the orientation of the sphere flips the sign of the result.
/// Returns `None` for point spheres.
pub fn mobius_from_lie(s: &LieVec, eps: f64) -> Option<LieVec> {
    if s.u6().abs() <= eps * s.aux_norm() {
        return None;
    }
    Some(*s / s.u6() - LieVec::e6())
}

/// Lie sphere of a unit Möbius sphere vector (inverse of [`mobius_from_lie`]).
pub fn lie_from_mobius(m: &LieVec) -> LieVec {
    *m + LieVec::e6()
}

/// Normalize a spacelike vector of `<e6>^⊥` to unit length.
pub fn normalize_spacelike(m: &LieVec) -> Option<LieVec> {
    let n = m.norm_sq();
    if n <= 0.0 {
        None
    } else {
        Some(*m / n.sqrt())
    }
}

/// Inertia of a restricted Gram form.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureReport {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_null: usize,
    pub eigenvalues: Vec<f64>,
}

impl SignatureReport {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_null
    }

    pub fn is(&self, plus: usize, minus: usize, null: usize) -> bool {
        self.n_plus == plus && self.n_minus == minus && self.n_null == null
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.n_plus, self.n_minus, self.n_null)
    }
}

impl fmt::Display for SignatureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_minus, self.n_null)
    }
}

/// A linear subspace of R^{4,2}.
///
/// The basis is orthonormal for the auxiliary Euclidean product, which
/// keeps rank decisions independent of the indefinite metric.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: Vec<LieVec>,
}

fn to_matrix(vs: &[LieVec]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(6, vs.len());
    for (j, v) in vs.iter().enumerate() {
        m.set_column(j, &v.0);
    }
    m
}

fn orthonormal_columns(m: &DMatrix<f64>, rank_tol: f64) -> Vec<LieVec> {
    if m.ncols() == 0 {
        return Vec::new();
    }
    let scale = m.abs().max();
    if scale == 0.0 {
        return Vec::new();
    }
    let svd = crate::linalg::svd(m);
    let u = svd.u;
    let smax = svd.singular_values[0];
    let mut out = Vec::new();
    for (j, s) in svd.singular_values.iter().enumerate() {
        if *s > rank_tol * smax {
            let col = u.column(j);
            out.push(LieVec(Vector6::from_iterator(col.iter().copied())));
        }
    }
    out
}

/// Euclidean orthogonal complement of the span of an orthonormal family.
fn euclid_complement(basis: &[LieVec]) -> Vec<LieVec> {
    let mut p = Matrix6::<f64>::identity();
    for b in basis {
        p -= b.0 * b.0.transpose();
    }
    let eig = SymmetricEigen::new(p);
    let mut out = Vec::new();
    for (j, l) in eig.eigenvalues.iter().enumerate() {
        if *l > 0.5 {
            out.push(LieVec(eig.eigenvectors.column(j).into_owned()));
        }
    }
    out
}

impl Subspace {
    pub fn zero() -> Self {
        Self { basis: Vec::new() }
    }

    pub fn whole() -> Self {
        Self {
            basis: (0..6)
                .map(|i| {
                    let mut v = Vector6::zeros();
                    v[i] = 1.0;
                    LieVec(v)
                })
                .collect(),
        }
    }

    /// Span of a family; at least one vector must be nonzero.
    pub fn span(vs: &[LieVec], tol: &Tolerances) -> Result<Self> {
        let basis = orthonormal_columns(&to_matrix(vs), tol.rank);
        if basis.is_empty() {
            return Err(Error::EmptySpan);
        }
        Ok(Self { basis })
    }

    /// Span with normalization of every input first; useful when inputs
    /// have wildly different projective scales.
    pub fn span_normalized(vs: &[LieVec], tol: &Tolerances) -> Result<Self> {
        let vs: Vec<LieVec> = vs.iter().map(LieVec::aux_normalized).collect();
        Self::span(&vs, tol)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LieVec] {
        &self.basis
    }

    /// Gram-orthogonal complement; `dim S + dim S^⊥ = 6`.
    pub fn orthocomplement(&self) -> Subspace {
        let g = gram();
        let image: Vec<LieVec> = self.basis.iter().map(|b| LieVec(g * b.0)).collect();
        Subspace {
            basis: euclid_complement(&image),
        }
    }

    pub fn sum(&self, other: &Subspace, tol: &Tolerances) -> Subspace {
        let mut all = self.basis.clone();
        all.extend_from_slice(&other.basis);
        Subspace {
            basis: orthonormal_columns(&to_matrix(&all), tol.rank),
        }
    }

    pub fn with(&self, v: &LieVec, tol: &Tolerances) -> Subspace {
        let mut all = self.basis.clone();
        all.push(v.aux_normalized());
        Subspace {
            basis: orthonormal_columns(&to_matrix(&all), tol.rank),
        }
    }

    pub fn intersection(&self, other: &Subspace, tol: &Tolerances) -> Subspace {
        let mut comp = euclid_complement(&self.basis);
        comp.extend(euclid_complement(&other.basis));
        let joined = orthonormal_columns(&to_matrix(&comp), tol.rank);
        Subspace {
            basis: euclid_complement(&joined),
        }
    }

    /// Euclidean orthogonal projection (used for residuals only).
    pub fn aux_project(&self, v: &LieVec) -> LieVec {
        let mut out = LieVec::zero();
        for b in &self.basis {
            out += *b * b.aux_dot(v);
        }
        out
    }

    /// Relative distance of `v` from the subspace.
    pub fn residual(&self, v: &LieVec) -> f64 {
        let n = v.aux_norm();
        if n == 0.0 {
            return 0.0;
        }
        (*v - self.aux_project(v)).aux_norm() / n
    }

    pub fn contains(&self, v: &LieVec, tol: f64) -> bool {
        self.residual(v) <= tol
    }

    /// Largest residual of the basis of `other` against `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        other
            .basis
            .iter()
            .map(|b| self.residual(b))
            .fold(0.0, f64::max)
    }

    /// Symmetric subspace distance: zero iff the subspaces coincide.
    pub fn distance(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() {
            return 1.0;
        }
        self.containment_residual(other)
            .max(other.containment_residual(self))
    }

    pub fn equals(&self, other: &Subspace, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Restricted Gram matrix on the stored basis.
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        let k = self.dim();
        DMatrix::from_fn(k, k, |i, j| inner(&self.basis[i], &self.basis[j]))
    }

    /// Inertia of the restricted metric.
    ///
    /// The basis is auxiliary-orthonormal and the Gram matrix is orthogonal,
    /// so eigenvalues lie in [-1, 1]; those below `tol.signature` in
    /// magnitude are counted as null.
    pub fn signature(&self, tol: &Tolerances) -> SignatureReport {
        if self.dim() == 0 {
            return SignatureReport {
                n_plus: 0,
                n_minus: 0,
                n_null: 0,
                eigenvalues: Vec::new(),
            };
        }
        let eig = SymmetricEigen::new(self.gram_matrix());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let cut = tol.signature;
        SignatureReport {
            n_plus: ev.iter().filter(|l| **l > cut).count(),
            n_minus: ev.iter().filter(|l| **l < -cut).count(),
            n_null: ev.iter().filter(|l| l.abs() <= cut).count(),
            eigenvalues: ev,
        }
    }

    /// Gram-orthogonal projection onto a nondegenerate subspace.
    pub fn project_onto(&self, v: &LieVec, tol: &Tolerances) -> Result<LieVec> {
        if self.dim() == 0 {
            return Ok(LieVec::zero());
        }
        let m = self.gram_matrix();
        let eig = SymmetricEigen::new(m.clone());
        let min = eig
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, l| a.min(l.abs()));
        if min <= tol.signature {
            return Err(Error::DegenerateGram);
        }
        let rhs = DVector::from_iterator(self.dim(), self.basis.iter().map(|b| inner(b, v)));
        let coef = m.lu().solve(&rhs).ok_or(Error::DegenerateGram)?;
        let mut out = LieVec::zero();
        for (b, c) in self.basis.iter().zip(coef.iter()) {
            out += *b * *c;
        }
        Ok(out)
    }

    /// A Gram-orthogonal basis sorted by norm sign (positive first), with
    /// unit `|(b,b)|` for non-null members. Requires a nondegenerate form.
    pub fn gram_orthonormal_basis(&self, tol: &Tolerances) -> Result<Vec<LieVec>> {
        let eig = SymmetricEigen::new(self.gram_matrix());
        let mut items: Vec<(f64, LieVec)> = Vec::new();
        for (j, l) in eig.eigenvalues.iter().enumerate() {
            if l.abs() <= tol.signature {
                return Err(Error::DegenerateGram);
            }
            let col = eig.eigenvectors.column(j);
            let mut v = LieVec::zero();
            for (b, c) in self.basis.iter().zip(col.iter()) {
                v += *b * *c;
            }
            items.push((*l, v / l.abs().sqrt()));
        }
        items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        Ok(items.into_iter().map(|(_, v)| v).collect())
    }

    /// Null directions of a subspace (eigenvectors of the restricted form
    /// whose eigenvalue is below the signature cutoff).
    pub fn radical(&self, tol: &Tolerances) -> Vec<LieVec> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let eig = SymmetricEigen::new(self.gram_matrix());
        let mut out = Vec::new();
        for (j, l) in eig.eigenvalues.iter().enumerate() {
            if l.abs() <= tol.signature {
                let col = eig.eigenvectors.column(j);
                let mut v = LieVec::zero();
                for (b, c) in self.basis.iter().zip(col.iter()) {
                    v += *b * *c;
                }
                out.push(v);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// Independent oracle: tangency identity for two oriented spheres.
    fn sphere_pair_oracle(c1: Vec3, r1: f64, c2: Vec3, r2: f64) -> f64 {
        -0.5 * (c1 - c2).norm_squared() + 0.5 * (r1 - r2).powi(2)
    }

    #[test]
    fn gram_convention() {
        assert_eq!(inner(&LieVec::e0(), &LieVec::einf()), -1.0);
        assert_eq!(inner(&LieVec::e6(), &LieVec::e6()), -1.0);
        assert_eq!(inner(&LieVec::e0(), &LieVec::e0()), 0.0);
        assert_eq!(inner(&LieVec::e1(), &LieVec::e1()), 1.0);
        let g = gram();
        assert_eq!(g * g, Matrix6::identity());
    }

    #[test]
    fn sphere_inner_products() {
        let a = lift_sphere(&Vec3::zeros(), 1.0);
        let b = lift_sphere(&Vec3::new(2.0, 0.0, 0.0), -1.0);
        let c = lift_sphere(&Vec3::new(3.0, 0.0, 0.0), 1.0);
        let oracle_ab = sphere_pair_oracle(Vec3::zeros(), 1.0, Vec3::new(2.0, 0.0, 0.0), -1.0);
        let oracle_ac = sphere_pair_oracle(Vec3::zeros(), 1.0, Vec3::new(3.0, 0.0, 0.0), 1.0);
        assert_eq!(oracle_ab, 0.0);
        assert_eq!(oracle_ac, -4.5);
        assert_abs_diff_eq!(inner(&a, &b), oracle_ab, epsilon = 1e-15);
        assert_abs_diff_eq!(inner(&a, &c), oracle_ac, epsilon = 1e-15);
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_point(&Vec3::zeros()), LieVec::e0());
        assert_eq!(
            lift_sphere(&Vec3::zeros(), 1.0),
            LieVec::new(0.0, 0.0, 0.0, 1.0, -0.5, 1.0)
        );
        let p = lift_plane(&Vec3::new(0.0, 0.0, 1.0), 2.0);
        assert_eq!(p, LieVec::new(0.0, 0.0, 1.0, 0.0, 2.0, 1.0));
        assert_eq!(inner(&p, &lift_point(&Vec3::new(0.0, 0.0, 2.0))), 0.0);
        assert_eq!(
            inner(&lift_point(&Vec3::new(1.0, -2.0, 0.5)), &LieVec::e6()),
            0.0
        );
    }

    #[test]
    fn unlift_examples() {
        let t = tol();
        match unlift(&LieVec::new(0.0, 0.0, 0.0, 1.0, -0.5, 1.0), &t).unwrap() {
            LieSphere::Sphere { center, radius } => {
                assert_eq!(center, Vec3::zeros());
                assert_eq!(radius, 1.0);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            unlift(&LieVec::einf(), &t).unwrap(),
            LieSphere::PointAtInfinity
        );
        match unlift(&LieVec::new(1.0, 0.0, 0.0, 0.0, 2.0, 1.0), &t).unwrap() {
            LieSphere::Plane { normal, offset } => {
                assert_eq!(normal, Vec3::new(1.0, 0.0, 0.0));
                assert_eq!(offset, 2.0);
            }
            other => panic!("{other:?}"),
        }
        // Projective scale does not matter.
        match unlift(&(lift_point(&Vec3::new(1.0, 2.0, 3.0)) * -3.0), &t).unwrap() {
            LieSphere::Point(x) => {
                assert_abs_diff_eq!(x, Vec3::new(1.0, 2.0, 3.0), epsilon = 1e-14)
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            unlift(&LieVec::e1(), &t),
            Err(Error::NotLieSphere(_))
        ));
    }

    #[test]
    fn contact_examples() {
        let t = tol();
        let a = lift_sphere(&Vec3::zeros(), 1.0);
        let b = lift_sphere(&Vec3::new(2.0, 0.0, 0.0), -1.0);
        let c = lift_sphere(&Vec3::new(2.0, 0.0, 0.0), 1.0);
        assert!(in_oriented_contact(&a, &b, &t).unwrap());
        assert!(!in_oriented_contact(&a, &c, &t).unwrap());
        assert!(in_oriented_contact(&a, &a, &t).unwrap());
        assert!(in_oriented_contact(&a, &LieVec::e1(), &t).is_err());
    }

    #[test]
    fn signature_examples() {
        let t = tol();
        let s = Subspace::span(&[LieVec::e1(), LieVec::e2(), LieVec::e6()], &t).unwrap();
        assert_eq!(s.signature(&t).triple(), (2, 1, 0));
        let s = Subspace::span(&[LieVec::e1(), LieVec::e2(), LieVec::einf()], &t).unwrap();
        assert_eq!(s.signature(&t).triple(), (2, 0, 1));
        let p = Subspace::span(&[LieVec::e6()], &t).unwrap();
        let m = p.orthocomplement();
        assert_eq!(m.dim(), 5);
        assert_eq!(m.signature(&t).triple(), (4, 1, 0));
        assert_eq!(Subspace::whole().signature(&t).triple(), (4, 2, 0));
    }

    #[test]
    fn complement_and_projection() {
        let t = tol();
        let s = Subspace::span(
            &[
                lift_sphere(&Vec3::new(0.3, 0.1, -0.2), 0.7),
                LieVec::e2() + LieVec::e6() * 0.3,
                LieVec::einf() - LieVec::e0(),
            ],
            &t,
        )
        .unwrap();
        let c = s.orthocomplement();
        assert_eq!(s.dim() + c.dim(), 6);
        assert!(c.orthocomplement().equals(&s, 1e-12));
        for a in s.basis() {
            for b in c.basis() {
                assert_abs_diff_eq!(inner(a, b), 0.0, epsilon = 1e-13);
            }
        }
        let v = LieVec::new(0.2, -1.0, 0.4, 1.5, 0.3, -0.7);
        let p = s.project_onto(&v, &t).unwrap();
        assert!(s.contains(&p, 1e-12));
        for b in s.basis() {
            assert_abs_diff_eq!(inner(&(v - p), b), 0.0, epsilon = 1e-12);
        }
        let degenerate = Subspace::span(&[LieVec::e1(), LieVec::einf()], &t).unwrap();
        assert!(matches!(
            degenerate.project_onto(&v, &t),
            Err(Error::DegenerateGram)
        ));
    }

    #[test]
    fn intersection_of_planes() {
        let t = tol();
        let a = Subspace::span(&[LieVec::e1(), LieVec::e2(), LieVec::e0()], &t).unwrap();
        let b = Subspace::span(
            &[LieVec::e2(), LieVec::e0() + LieVec::e3(), LieVec::e6()],
            &t,
        )
        .unwrap();
        let i = a.intersection(&b, &t);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&LieVec::e2(), 1e-12));
    }

    #[test]
    fn mobius_round_trip() {
        let s = lift_sphere(&Vec3::new(0.5, -1.0, 2.0), -0.75);
        let m = mobius_from_lie(&(s * 4.0), 1e-12).unwrap();
        assert_abs_diff_eq!(m.norm_sq(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inner(&m, &LieVec::e6()), 0.0, epsilon = 1e-15);
        let back = lie_from_mobius(&m);
        assert!(back.projective_distance(&s) < 1e-14);
        let flipped = lift_sphere(&Vec3::new(0.5, -1.0, 2.0), 0.75);
        let mf = mobius_from_lie(&flipped, 1e-12).unwrap();
        assert!((m + mf).aux_norm() < 1e-12);
    }
}
