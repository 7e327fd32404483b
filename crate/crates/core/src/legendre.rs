//! Discrete Legendre maps: contact elements on the vertices of a labelled
//! quad complex such that neighbouring contact elements share a curvature
//! sphere.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::complex::{Label, QuadComplex};
use crate::error::{Error, Result};
use crate::lie::{self, inner, LieVec, Subspace, Vec3};
use crate::tol::Tolerances;

/// A totally isotropic 2-plane, stored as a point sphere and a second
/// member (the tangent plane whenever the point is finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactElement {
    point: LieVec,
    other: LieVec,
}

impl ContactElement {
    /// Spheres through `x` with normal `n` at `x`.
    pub fn from_point_normal(x: &Vec3, n: &Vec3) -> Result<Self> {
        let len = n.norm();
        if (len - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitNormal(len));
        }
        Ok(Self {
            point: lie::lift_point(x),
            other: lie::lift_plane(n, n.dot(x)),
        })
    }

    /// Contact element spanned by two null, orthogonal vectors.
    pub fn from_vectors(a: &LieVec, b: &LieVec, tol: &Tolerances) -> Result<Self> {
        let a = a.aux_normalized();
        let b = b.aux_normalized();
        for v in [&a, &b] {
            if v.aux_norm() == 0.0 {
                return Err(Error::InvalidContactElement("zero generator".into()));
            }
            if v.null_residual() > tol.contact {
                return Err(Error::InvalidContactElement(format!(
                    "generator is not null (residual {:e})",
                    v.null_residual()
                )));
            }
        }
        if inner(&a, &b).abs() > tol.contact {
            return Err(Error::InvalidContactElement(format!(
                "generators are not orthogonal ({:e})",
                inner(&a, &b)
            )));
        }
        if a.projective_sine(&b) <= tol.rank {
            return Err(Error::InvalidContactElement(
                "generators are dependent".into(),
            ));
        }
        let point = b * a.u6() - a * b.u6();
        if point.aux_norm() <= tol.rank {
            return Err(Error::InvalidContactElement(
                "no point sphere in the span".into(),
            ));
        }
        let point = normalize_point(&point, tol.rank);
        let q = if a.u6().abs() >= b.u6().abs() { a } else { b };
        let mut other = if point.u0().abs() > tol.rank * point.aux_norm() {
            q - point * (q.u0() / point.u0())
        } else {
            q
        };
        if other.u6().abs() > tol.rank * other.aux_norm() {
            other = other / other.u6();
        } else {
            other = other.aux_normalized();
        }
        Ok(Self { point, other })
    }

    pub fn point_sphere(&self) -> LieVec {
        self.point
    }

    /// The second stored generator: the oriented tangent plane for finite
    /// points.
    pub fn tangent_sphere(&self) -> LieVec {
        self.other
    }

    pub fn generators(&self) -> [LieVec; 2] {
        [self.point, self.other]
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::span(&self.generators(), &Tolerances::default())
            .expect("contact element generators are independent")
    }

    pub fn euclidean_point(&self) -> Option<Vec3> {
        lie::point_of(&self.point, 1e-12)
    }

    /// Unit normal of the element, read from its plane member.
    pub fn normal(&self) -> Option<Vec3> {
        self.euclidean_point()?;
        let n = self.other.spatial();
        let len = n.norm();
        if self.other.u0().abs() > 1e-12 * self.other.aux_norm() || len == 0.0 {
            None
        } else {
            Some(n / len)
        }
    }

    /// The member sphere of signed radius `r` (center `x + r·n`).
    pub fn sphere_with_radius(&self, r: f64) -> LieVec {
        self.point + self.other * r
    }

    /// The unique member orthogonal to `x`, if it is unique.
    pub fn member_orthogonal_to(&self, x: &LieVec, tol: f64) -> Option<LieVec> {
        let xn = x.aux_normalized();
        let p = self.point.aux_normalized();
        let o = self.other.aux_normalized();
        let (cp, co) = (inner(&p, &xn), inner(&o, &xn));
        if cp.abs().max(co.abs()) <= tol {
            return None;
        }
        Some(o * cp - p * co)
    }

    /// Relative distance of `v` from the element.
    pub fn residual(&self, v: &LieVec) -> f64 {
        self.subspace().residual(v)
    }

    /// Largest inner product of `s` with the generators, on normalized
    /// representatives.
    pub fn orthogonality_residual(&self, s: &LieVec) -> f64 {
        let s = s.aux_normalized();
        self.generators()
            .iter()
            .map(|g| inner(&g.aux_normalized(), &s).abs())
            .fold(0.0, f64::max)
    }

    pub fn same_as(&self, other: &ContactElement, tol: f64) -> bool {
        self.subspace().equals(&other.subspace(), tol)
    }
}

fn normalize_point(p: &LieVec, eps: f64) -> LieVec {
    if p.u0().abs() > eps * p.aux_norm() {
        *p / p.u0()
    } else {
        p.aux_normalized()
    }
}

fn orthonormal_pair(f: &ContactElement) -> [LieVec; 2] {
    let a = f.point.aux_normalized();
    let b = f.other - a * a.aux_dot(&f.other);
    [a, b.aux_normalized()]
}

/// Intersection of two contact elements together with the smallest
/// singular value of the stacked orthonormal bases.
fn intersect(fi: &ContactElement, fj: &ContactElement, tol: &Tolerances) -> (Result<LieVec>, f64) {
    let qi = orthonormal_pair(fi);
    let qj = orthonormal_pair(fj);
    let mut m = DMatrix::zeros(6, 4);
    for (c, v) in [qi[0], qi[1], -qj[0], -qj[1]].iter().enumerate() {
        m.set_column(c, &v.0);
    }
    let svd = crate::linalg::svd(&m);
    let s0 = svd.singular_values[3];
    let s1 = svd.singular_values[2];
    if s1 <= tol.rank {
        return (Err(Error::IdenticalContactElements), s0);
    }
    if s0 > tol.rank {
        return (Err(Error::NotInContact), s0);
    }
    let row = svd.v.column(3);
    let v = qi[0] * row[0] + qi[1] * row[1];
    (Ok(v.aux_normalized()), s0)
}

/// The curvature sphere `f_i ∩ f_j`.
pub fn curvature_sphere(
    fi: &ContactElement,
    fj: &ContactElement,
    tol: &Tolerances,
) -> Result<LieVec> {
    intersect(fi, fj, tol).0
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeStatus {
    Ok,
    Identical,
    NotInContact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCheck {
    pub edge: usize,
    pub status: EdgeStatus,
    /// Smallest singular value of the stacked orthonormal bases.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendreReport {
    pub edges: Vec<EdgeCheck>,
    pub spheres: Vec<Option<LieVec>>,
}

impl LegendreReport {
    pub fn failures(&self) -> Vec<&EdgeCheck> {
        self.edges
            .iter()
            .filter(|e| e.status != EdgeStatus::Ok)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Per-edge Legendre diagnostics.
pub fn is_legendre(
    complex: &QuadComplex,
    contacts: &[ContactElement],
    tol: &Tolerances,
) -> LegendreReport {
    let mut edges = Vec::with_capacity(complex.edges().len());
    let mut spheres = Vec::with_capacity(complex.edges().len());
    for (id, e) in complex.edges().iter().enumerate() {
        let (res, residual) = intersect(&contacts[e.a], &contacts[e.b], tol);
        let status = match &res {
            Ok(_) => EdgeStatus::Ok,
            Err(Error::IdenticalContactElements) => EdgeStatus::Identical,
            Err(_) => EdgeStatus::NotInContact,
        };
        spheres.push(res.ok());
        edges.push(EdgeCheck {
            edge: id,
            status,
            residual,
        });
    }
    LegendreReport { edges, spheres }
}

/// A discrete Legendre map with its curvature spheres cached per edge.
#[derive(Debug, Clone)]
pub struct LegendreNet {
    complex: QuadComplex,
    contacts: Vec<ContactElement>,
    spheres: Vec<LieVec>,
}

impl LegendreNet {
    pub fn new(
        complex: QuadComplex,
        contacts: Vec<ContactElement>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if contacts.len() != complex.n_vertices() {
            return Err(Error::InvalidComplex(format!(
                "{} contact elements for {} vertices",
                contacts.len(),
                complex.n_vertices()
            )));
        }
        let report = is_legendre(&complex, &contacts, tol);
        let failures = report.failures();
        if let Some(first) = failures.first() {
            return Err(Error::NotLegendre {
                count: failures.len(),
                first_edge: first.edge,
            });
        }
        let spheres = report.spheres.into_iter().map(Option::unwrap).collect();
        Ok(Self {
            complex,
            contacts,
            spheres,
        })
    }

    /// Net from Euclidean vertex data.
    pub fn from_points_normals(
        complex: QuadComplex,
        points: &[Vec3],
        normals: &[Vec3],
        tol: &Tolerances,
    ) -> Result<Self> {
        let contacts = points
            .iter()
            .zip(normals)
            .map(|(x, n)| ContactElement::from_point_normal(x, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(complex, contacts, tol)
    }

    pub fn complex(&self) -> &QuadComplex {
        &self.complex
    }

    pub fn contacts(&self) -> &[ContactElement] {
        &self.contacts
    }

    pub fn contact(&self, v: usize) -> &ContactElement {
        &self.contacts[v]
    }

    /// Curvature sphere of an edge.
    pub fn sphere(&self, edge: usize) -> LieVec {
        self.spheres[edge]
    }

    pub fn spheres(&self) -> &[LieVec] {
        &self.spheres
    }

    pub fn sphere_between(&self, a: usize, b: usize) -> Option<LieVec> {
        self.complex.edge_between(a, b).map(|e| self.spheres[e])
    }

    /// `([s⁺_jk, s⁺_li], [s⁻_ij, s⁻_kl])` of a face.
    pub fn face_spheres(&self, face: usize) -> Result<([LieVec; 2], [LieVec; 2])> {
        let e = self.complex.face_edges(face)?;
        Ok((
            [self.spheres[e[1]], self.spheres[e[3]]],
            [self.spheres[e[0]], self.spheres[e[2]]],
        ))
    }

    /// Euclidean vertex positions; `None` for points at infinity.
    pub fn points(&self) -> Vec<Option<Vec3>> {
        self.contacts
            .iter()
            .map(ContactElement::euclidean_point)
            .collect()
    }

    pub fn normals(&self) -> Vec<Option<Vec3>> {
        self.contacts.iter().map(ContactElement::normal).collect()
    }

    /// Net with `+` and `−` exchanged.
    pub fn swap_labels(&self) -> LegendreNet {
        LegendreNet {
            complex: self.complex.swap_labels(),
            contacts: self.contacts.clone(),
            spheres: self.spheres.clone(),
        }
    }
}

/// Rebuild contact elements from curvature spheres given on the edges.
pub fn net_from_edge_spheres(
    complex: QuadComplex,
    s: &[LieVec],
    tol: &Tolerances,
) -> Result<LegendreNet> {
    if s.len() != complex.edges().len() {
        return Err(Error::InvalidComplex(format!(
            "{} spheres for {} edges",
            s.len(),
            complex.edges().len()
        )));
    }
    for (e, v) in s.iter().enumerate() {
        if v.aux_norm() == 0.0 || v.null_residual() > tol.contact {
            return Err(Error::VertexStar {
                vertex: complex.edges()[e].a,
                reason: format!("edge {e} carries a non-null vector"),
            });
        }
    }
    let mut contacts = Vec::with_capacity(complex.n_vertices());
    for v in 0..complex.n_vertices() {
        let star: Vec<LieVec> = complex.incident_edges(v).iter().map(|e| s[*e]).collect();
        if star.is_empty() {
            return Err(Error::VertexStar {
                vertex: v,
                reason: "isolated vertex".into(),
            });
        }
        let span = Subspace::span_normalized(&star, tol)?;
        if span.dim() != 2 {
            return Err(Error::VertexStar {
                vertex: v,
                reason: format!("span has dimension {}", span.dim()),
            });
        }
        let iso = span.gram_matrix().abs().max();
        if iso > tol.residual {
            return Err(Error::VertexStar {
                vertex: v,
                reason: format!("span is not isotropic (Gram entry {iso:e})"),
            });
        }
        let b = span.basis();
        contacts.push(
            ContactElement::from_vectors(&b[0], &b[1], tol).map_err(|e| Error::VertexStar {
                vertex: v,
                reason: e.to_string(),
            })?,
        );
    }
    LegendreNet::new(complex, contacts, tol)
}

/// An orthogonal splitting of R^{4,2} into two (2,1)-subspaces.
#[derive(Debug, Clone)]
pub struct DupinCyclide {
    pub plus: Subspace,
    pub minus: Subspace,
}

impl DupinCyclide {
    pub fn new(plus: Subspace, minus: Subspace, tol: &Tolerances) -> Result<Self> {
        let c = Self { plus, minus };
        if let Some(reason) = c.defect(tol) {
            return Err(Error::InvalidParameter(format!(
                "not a Dupin cyclide: {reason}"
            )));
        }
        Ok(c)
    }

    /// Splitting determined by one half.
    pub fn from_plus(plus: Subspace, tol: &Tolerances) -> Result<Self> {
        let minus = plus.orthocomplement();
        Self::new(plus, minus, tol)
    }

    pub fn defect(&self, tol: &Tolerances) -> Option<String> {
        if !self.plus.signature(tol).is(2, 1, 0) {
            return Some(format!("D+ has signature {}", self.plus.signature(tol)));
        }
        if !self.minus.signature(tol).is(2, 1, 0) {
            return Some(format!("D- has signature {}", self.minus.signature(tol)));
        }
        let r = self.orthogonality_residual();
        if r > tol.residual {
            return Some(format!("halves are not orthogonal ({r:e})"));
        }
        None
    }

    pub fn orthogonality_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for a in self.plus.basis() {
            for b in self.minus.basis() {
                r = r.max(inner(a, b).abs());
            }
        }
        r
    }

    pub fn swapped(&self) -> DupinCyclide {
        DupinCyclide {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn half(&self, label: Label) -> &Subspace {
        match label {
            Label::Plus => &self.plus,
            Label::Minus => &self.minus,
        }
    }

    /// Subspace distance of the halves.
    pub fn distance(&self, other: &DupinCyclide) -> f64 {
        self.plus
            .distance(&other.plus)
            .max(self.minus.distance(&other.minus))
    }
}

/// True when the face's `+` spheres lie in `D⁺` and its `−` spheres in `D⁻`.
pub fn is_face_cyclide(
    net: &LegendreNet,
    face: usize,
    cy: &DupinCyclide,
    tol: &Tolerances,
) -> bool {
    match net.face_spheres(face) {
        Ok((sp, sm)) => {
            sp.iter().all(|s| cy.plus.contains(s, tol.residual))
                && sm.iter().all(|s| cy.minus.contains(s, tol.residual))
        }
        Err(_) => false,
    }
}

/// The circle of face-cyclides through the four curvature spheres of a face.
///
/// With `U` and `V` spanned by the `+` and `−` spheres, the complement `W`
/// of `U ⊕ V` is positive definite. The family is
/// `t ↦ (U ⊕ ⟨cos t·w₁ + sin t·w₂⟩, V ⊕ ⟨−sin t·w₁ + cos t·w₂⟩)`, periodic
/// with period π.
#[derive(Debug, Clone)]
pub struct FaceCyclideFamily {
    pub u: Subspace,
    pub v: Subspace,
    pub w: [LieVec; 2],
}

impl FaceCyclideFamily {
    pub fn at(&self, t: f64) -> DupinCyclide {
        let tol = Tolerances::default();
        let (c, s) = (t.cos(), t.sin());
        let a = self.w[0] * c + self.w[1] * s;
        let b = self.w[1] * c - self.w[0] * s;
        DupinCyclide {
            plus: self.u.with(&a, &tol),
            minus: self.v.with(&b, &tol),
        }
    }

    /// Parameter in `[0, π)` whose `W`-direction is `w`.
    fn parameter_of_direction(&self, w: &LieVec) -> f64 {
        let t = inner(w, &self.w[1]).atan2(inner(w, &self.w[0]));
        t.rem_euclid(PI)
    }

    /// Family parameter of a cyclide whose `D⁺` contains `U`.
    pub fn parameter_of(&self, cy: &DupinCyclide, tol: &Tolerances) -> Option<f64> {
        if cy.plus.containment_residual(&self.u) > tol.residual {
            return None;
        }
        let wspace = Subspace::span(&self.w, tol).ok()?;
        let d = cy.plus.intersection(&wspace, tol);
        if d.dim() != 1 {
            return None;
        }
        Some(self.parameter_of_direction(&d.basis()[0]))
    }

    /// Parameter of the member whose `D⁺` contains `x`, with the residual of
    /// that containment. `None` when `x` has no `W` component.
    pub fn parameter_containing(&self, x: &LieVec, tol: &Tolerances) -> Option<(f64, f64)> {
        let c0 = inner(x, &self.w[0]);
        let c1 = inner(x, &self.w[1]);
        let scale = x.aux_norm();
        if c0.hypot(c1) <= tol.rank * scale {
            return None;
        }
        let t = c1.atan2(c0).rem_euclid(PI);
        let member = self.at(t);
        Some((t, member.plus.residual(x)))
    }
}

pub fn face_cyclide_family(
    net: &LegendreNet,
    face: usize,
    tol: &Tolerances,
) -> Result<FaceCyclideFamily> {
    let (sp, sm) = net.face_spheres(face)?;
    let degenerate = |reason: String| Error::DegenerateFace { face, reason };
    let u = Subspace::span_normalized(&sp, tol)?;
    let v = Subspace::span_normalized(&sm, tol)?;
    if u.dim() != 2 {
        return Err(degenerate("the + curvature spheres coincide".into()));
    }
    if v.dim() != 2 {
        return Err(degenerate("the - curvature spheres coincide".into()));
    }
    let uv = u.sum(&v, tol);
    if uv.dim() != 4 {
        return Err(degenerate(format!("U + V has dimension {}", uv.dim())));
    }
    let w = uv.orthocomplement();
    let sig = w.signature(tol);
    if !sig.is(2, 0, 0) {
        return Err(degenerate(format!("complement has signature {sig}")));
    }
    let basis = w.gram_orthonormal_basis(tol)?;
    Ok(FaceCyclideFamily {
        u,
        v,
        w: [basis[0], basis[1]],
    })
}
