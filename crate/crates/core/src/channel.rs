//! Channel surface verification and the geometry derived from it: Lie
//! cyclides, generating circles, face-spheres, quer-spheres, the Dupin
//! test, cross-ratios and Ribaucour predicates.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{Label, Line};
use crate::error::{Error, Result};
use crate::legendre::{DupinCyclide, LegendreNet};
use crate::lie::{self, inner, LieSphere, LieVec, Subspace, Vec3};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelCheck {
    /// Curvature spheres of the circular direction are not constant along a line.
    Constancy,
    /// Opposite curvature spheres of a ribbon do not span a (2,1)-plane.
    Signature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFailure {
    pub direction: Label,
    pub check: ChannelCheck,
    pub line: Option<usize>,
    pub ribbon: Option<usize>,
    pub residual: f64,
    pub detail: String,
}

impl fmt::Display for ChannelFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.check {
            ChannelCheck::Constancy => write!(
                f,
                "direction {}: curvature spheres not constant along line {} (distance {:e})",
                self.direction,
                self.line.unwrap_or(0),
                self.residual
            ),
            ChannelCheck::Signature => write!(
                f,
                "direction {}: ribbon {} {}",
                self.direction,
                self.ribbon.unwrap_or(0),
                self.detail
            ),
        }
    }
}

/// A ribbon of the circular direction and its two bounding lines.
#[derive(Debug, Clone, PartialEq)]
pub struct RibbonData {
    pub faces: Vec<usize>,
    pub closed: bool,
    pub left: usize,
    pub right: usize,
    /// Vertex pairs `(left, right)` joined by the ribbon's transversal edges,
    /// in strip order.
    pub rungs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct ChannelCertificate {
    pub direction: Label,
    pub lines: Vec<Line>,
    pub ribbons: Vec<RibbonData>,
    /// Enveloped curvature sphere of every line.
    pub line_spheres: Vec<LieVec>,
    /// Lie cyclide of every ribbon; `half(direction)` contains the line
    /// spheres, `half(direction.opposite())` the transversal spheres.
    pub lie_cyclides: Vec<DupinCyclide>,
    /// Generating circle of every line; `plus` is its point-sphere 3-space.
    pub circles: Vec<DupinCyclide>,
    /// Disagreement of the circles computed from the two adjacent ribbons.
    pub circle_agreement: Vec<f64>,
    pub face_spheres: Vec<LieVec>,
    pub quer_spheres: Vec<LieVec>,
    pub face_quer_spheres: Vec<LieVec>,
    /// How well each face-quer-sphere reflection maps the ribbon's left
    /// vertices to its right vertices.
    pub face_quer_residuals: Vec<f64>,
}

fn line_of_vertex(lines: &[Line], n: usize) -> Vec<Option<usize>> {
    let mut out = vec![None; n];
    for (id, l) in lines.iter().enumerate() {
        for v in &l.vertices {
            out[*v] = Some(id);
        }
    }
    out
}

/// Checks (a) and (b) of the channel condition and builds the Lie cyclides.
pub fn verify_channel(
    net: &LegendreNet,
    dir: Label,
    tol: &Tolerances,
) -> std::result::Result<ChannelCertificate, ChannelFailure> {
    let c = net.complex();
    let lines = c.lines(dir);
    let mut line_spheres = Vec::with_capacity(lines.len());
    for (id, line) in lines.iter().enumerate() {
        let spheres: Vec<LieVec> = line
            .segments()
            .iter()
            .map(|(a, b)| net.sphere_between(*a, *b).expect("line segments are edges"))
            .collect();
        let mut worst: f64 = 0.0;
        for w in spheres.windows(2) {
            worst = worst.max(w[0].projective_distance(&w[1]));
        }
        if worst > tol.constancy {
            return Err(ChannelFailure {
                direction: dir,
                check: ChannelCheck::Constancy,
                line: Some(id),
                ribbon: None,
                residual: worst,
                detail: String::new(),
            });
        }
        line_spheres.push(spheres[0].aux_normalized());
    }

    let owner = line_of_vertex(&lines, c.n_vertices());
    let mut ribbons = Vec::new();
    let mut lie_cyclides = Vec::new();
    for (rid, r) in c.ribbons(dir).into_iter().enumerate() {
        let mut transversal = Vec::new();
        let mut rungs = Vec::new();
        let mut bounds = None;
        for f in &r.faces {
            let face = c.faces()[*f];
            // Transversal edges and the vertex on the left line of each.
            let (pairs, left_v, right_v) = match dir {
                Label::Plus => ([(face[0], face[1]), (face[3], face[2])], face[0], face[1]),
                Label::Minus => ([(face[0], face[3]), (face[1], face[2])], face[0], face[3]),
            };
            if bounds.is_none() {
                bounds = Some((owner[left_v], owner[right_v]));
            }
            for (a, b) in pairs {
                let s = net.sphere_between(a, b).expect("face edges exist");
                if !rungs.contains(&(a, b)) {
                    rungs.push((a, b));
                    transversal.push(s);
                }
            }
        }
        let (left, right) = match bounds {
            Some((Some(l), Some(r))) => (l, r),
            _ => {
                return Err(ChannelFailure {
                    direction: dir,
                    check: ChannelCheck::Signature,
                    line: None,
                    ribbon: Some(rid),
                    residual: f64::NAN,
                    detail: "is not bounded by two coordinate lines".into(),
                })
            }
        };
        let fail = |detail: String| ChannelFailure {
            direction: dir,
            check: ChannelCheck::Signature,
            line: None,
            ribbon: Some(rid),
            residual: f64::NAN,
            detail,
        };
        let span = Subspace::span_normalized(&transversal, tol).map_err(|e| fail(e.to_string()))?;
        let cyclide = if span.dim() < 3 && r.faces.len() == 1 {
            // A lone face does not determine its cyclide; take a member of
            // its face-cyclide family.
            let fam = crate::legendre::face_cyclide_family(net, r.faces[0], tol)
                .map_err(|e| fail(e.to_string()))?;
            fam.at(0.0)
        } else {
            let sig = span.signature(tol);
            if span.dim() != 3 || !sig.is(2, 1, 0) {
                return Err(fail(format!(
                    "transversal spheres span dimension {} with signature {}",
                    span.dim(),
                    sig
                )));
            }
            let comp = span.orthocomplement();
            match dir {
                Label::Plus => DupinCyclide {
                    plus: comp,
                    minus: span,
                },
                Label::Minus => DupinCyclide {
                    plus: span,
                    minus: comp,
                },
            }
        };
        ribbons.push(RibbonData {
            faces: r.faces,
            closed: r.closed,
            left,
            right,
            rungs,
        });
        lie_cyclides.push(cyclide);
    }

    Ok(ChannelCertificate {
        direction: dir,
        lines,
        ribbons,
        line_spheres,
        lie_cyclides,
        circles: Vec::new(),
        circle_agreement: Vec::new(),
        face_spheres: Vec::new(),
        quer_spheres: Vec::new(),
        face_quer_spheres: Vec::new(),
        face_quer_residuals: Vec::new(),
    })
}

/// Full certificate: channel checks plus circles, face-spheres,
/// quer-spheres and face-quer-spheres.
pub fn certify(net: &LegendreNet, dir: Label, tol: &Tolerances) -> Result<ChannelCertificate> {
    let mut cert = verify_channel(net, dir, tol).map_err(Error::NotChannel)?;
    generating_circles(&mut cert, net, tol)?;
    face_spheres(&mut cert, tol)?;
    quer_spheres(&mut cert, tol)?;
    face_quer_spheres(&mut cert, net, tol)?;
    Ok(cert)
}

impl ChannelCertificate {
    /// Ribbons adjacent to a line.
    pub fn ribbons_of_line(&self, line: usize) -> Vec<usize> {
        (0..self.ribbons.len())
            .filter(|r| self.ribbons[*r].left == line || self.ribbons[*r].right == line)
            .collect()
    }

    /// Largest inner product of a line sphere with the generators of the
    /// contact elements along the line.
    pub fn envelope_residual(&self, net: &LegendreNet) -> f64 {
        let mut worst: f64 = 0.0;
        for (line, s) in self.lines.iter().zip(&self.line_spheres) {
            for v in &line.vertices {
                worst = worst.max(net.contact(*v).orthogonality_residual(s));
            }
        }
        worst
    }

    /// Largest projective spread between the Lie cyclides of all ribbons.
    pub fn lie_cyclide_spread(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in self.lie_cyclides.iter().skip(1) {
            worst = worst.max(c.distance(&self.lie_cyclides[0]));
        }
        worst
    }

    /// Largest residual of a line's vertex point spheres against its
    /// generating circle.
    pub fn circle_membership_residual(&self, net: &LegendreNet) -> f64 {
        let mut worst: f64 = 0.0;
        for (line, circle) in self.lines.iter().zip(&self.circles) {
            for v in &line.vertices {
                worst = worst.max(circle.plus.residual(&net.contact(*v).point_sphere()));
            }
        }
        worst
    }
}

/// Point-sphere 3-space `φ(D)` of the circle cut out of the cyclide half
/// `d` by the enveloped sphere `s`, `φ(y) = y + (y,𝔭)s` with `(s,𝔭) = −1`.
pub fn circle_from_cyclide(s: &LieVec, d: &Subspace, tol: &Tolerances) -> Option<Subspace> {
    if s.u6().abs() <= tol.rank * s.aux_norm() {
        return None;
    }
    let s = *s / s.u6();
    let image: Vec<LieVec> = d
        .basis()
        .iter()
        .map(|y| *y + s * inner(y, &LieVec::e6()))
        .collect();
    let c = Subspace::span_normalized(&image, tol).ok()?;
    (c.dim() == 3).then_some(c)
}

fn circle_cyclide(c: Subspace) -> DupinCyclide {
    let minus = c.orthocomplement();
    DupinCyclide { plus: c, minus }
}

/// Generating circle of every line, computed from each adjacent ribbon.
pub fn generating_circles(
    cert: &mut ChannelCertificate,
    net: &LegendreNet,
    tol: &Tolerances,
) -> Result<()> {
    let opp = cert.direction.opposite();
    let mut circles = Vec::with_capacity(cert.lines.len());
    let mut agreement = Vec::with_capacity(cert.lines.len());
    for line in 0..cert.lines.len() {
        let s = cert.line_spheres[line];
        let mut found: Vec<Subspace> = Vec::new();
        for r in cert.ribbons_of_line(line) {
            let d = cert.lie_cyclides[r].half(opp);
            let c = circle_from_cyclide(&s, d, tol).ok_or(Error::PointSphereCurvature { line })?;
            found.push(c);
        }
        if found.is_empty() {
            // A line without ribbons: the circle through its vertices.
            let pts: Vec<LieVec> = cert.lines[line]
                .vertices
                .iter()
                .map(|v| net.contact(*v).point_sphere())
                .collect();
            let c = Subspace::span_normalized(&pts, tol)?;
            if c.dim() != 3 {
                return Err(Error::InsufficientData(format!(
                    "line {line} has no ribbon and does not determine a circle"
                )));
            }
            found.push(c);
        }
        let residual = found
            .iter()
            .skip(1)
            .map(|c| c.distance(&found[0]))
            .fold(0.0, f64::max);
        if residual > tol.residual {
            return Err(Error::CircleDisagreement { line, residual });
        }
        agreement.push(residual);
        circles.push(circle_cyclide(found.swap_remove(0)));
    }
    cert.circles = circles;
    cert.circle_agreement = agreement;
    Ok(())
}

/// Fix the sign of a Möbius vector: largest coordinate positive.
pub fn canonical_sign(m: &LieVec) -> LieVec {
    let mut k = 0;
    for i in 1..6 {
        if m.0[i].abs() > m.0[k].abs() + 1e-12 {
            k = i;
        }
    }
    if m.0[k] < 0.0 {
        -*m
    } else {
        *m
    }
}

/// Unit spacelike Möbius vector with canonical sign.
pub fn unit_mobius(m: &LieVec) -> Option<LieVec> {
    lie::normalize_spacelike(m).map(|m| canonical_sign(&m))
}

/// Euclidean reading of a Möbius sphere vector.
pub fn mobius_sphere(m: &LieVec, tol: &Tolerances) -> Result<LieSphere> {
    let m = lie::normalize_spacelike(m)
        .ok_or_else(|| Error::InvalidParameter("Möbius vector is not spacelike".into()))?;
    lie::unlift(&lie::lie_from_mobius(&m), tol)
}

/// Sphere pencil of a circle: the Möbius vectors orthogonal to its point
/// spheres.
pub fn circle_pencil(circle: &Subspace, tol: &Tolerances) -> Subspace {
    circle.with(&LieVec::e6(), tol).orthocomplement()
}

/// Sphere containing the two bounding circles of every ribbon.
pub fn face_spheres(cert: &mut ChannelCertificate, tol: &Tolerances) -> Result<()> {
    let mut out = Vec::with_capacity(cert.ribbons.len());
    for (rid, r) in cert.ribbons.iter().enumerate() {
        let span = cert.circles[r.left]
            .plus
            .sum(&cert.circles[r.right].plus, tol)
            .with(&LieVec::e6(), tol);
        let comp = span.orthocomplement();
        if comp.dim() != 1 {
            return Err(Error::FaceSphere {
                ribbon: rid,
                dim: comp.dim(),
            });
        }
        let m = unit_mobius(&comp.basis()[0]).ok_or(Error::FaceSphere {
            ribbon: rid,
            dim: 1,
        })?;
        out.push(m);
    }
    cert.face_spheres = out;
    Ok(())
}

/// Member of each circle's pencil orthogonal to the enveloped sphere.
pub fn quer_spheres(cert: &mut ChannelCertificate, tol: &Tolerances) -> Result<()> {
    let mut out = Vec::with_capacity(cert.lines.len());
    for (line, (circle, s)) in cert.circles.iter().zip(&cert.line_spheres).enumerate() {
        let pencil = circle_pencil(&circle.plus, tol);
        if pencil.dim() != 2 {
            return Err(Error::QuerSphere { line });
        }
        let b = pencil.basis();
        let s = s.aux_normalized();
        let (c0, c1) = (inner(&b[0], &s), inner(&b[1], &s));
        if c0.abs().max(c1.abs()) <= tol.contact {
            return Err(Error::QuerSphere { line });
        }
        let q = b[0] * c1 - b[1] * c0;
        out.push(unit_mobius(&q).ok_or(Error::QuerSphere { line })?);
    }
    cert.quer_spheres = out;
    Ok(())
}

/// Unit vector of a circle's pencil orthogonal to a sphere of the pencil.
fn pencil_partner(circle: &Subspace, sigma: &LieVec, tol: &Tolerances) -> Option<LieVec> {
    let pencil = circle_pencil(circle, tol);
    let w = pencil
        .basis()
        .iter()
        .copied()
        .find(|b| b.projective_sine(sigma) > 0.1)?;
    let a = w - *sigma * (inner(&w, sigma) / inner(sigma, sigma));
    lie::normalize_spacelike(&a)
}

/// Reflection `R_m(τ) = τ − 2(τ,m)/(m,m)·m`.
pub fn reflect(tau: &LieVec, m: &LieVec) -> LieVec {
    tau.reflect_in(m)
}

fn reflect_subspace(s: &Subspace, m: &LieVec, tol: &Tolerances) -> Subspace {
    let images: Vec<LieVec> = s.basis().iter().map(|b| reflect(b, m)).collect();
    Subspace::span(&images, tol).expect("reflection is invertible")
}

/// Sphere of every ribbon whose inversion swaps its two bounding circles.
///
/// Two reflections orthogonal to the face-sphere swap the circles; the one
/// that best maps each left vertex to its partner on the right is kept.
pub fn face_quer_spheres(
    cert: &mut ChannelCertificate,
    net: &LegendreNet,
    tol: &Tolerances,
) -> Result<()> {
    let mut out = Vec::with_capacity(cert.ribbons.len());
    let mut residuals = Vec::with_capacity(cert.ribbons.len());
    for (rid, r) in cert.ribbons.iter().enumerate() {
        let sigma = cert.face_spheres[rid];
        let ci = &cert.circles[r.left].plus;
        let cj = &cert.circles[r.right].plus;
        let no = |res: [f64; 2]| Error::NoSwappingReflection {
            ribbon: rid,
            residuals: res,
        };
        let a = pencil_partner(ci, &sigma, tol).ok_or(no([f64::NAN; 2]))?;
        let b = pencil_partner(cj, &sigma, tol).ok_or(no([f64::NAN; 2]))?;
        let mut res = [f64::INFINITY; 2];
        let mut cands = [LieVec::zero(); 2];
        for (k, m) in [a - b, a + b].into_iter().enumerate() {
            cands[k] = m;
            if m.norm_sq() <= tol.signature * m.aux_norm().powi(2) {
                continue;
            }
            if reflect_subspace(ci, &m, tol).distance(cj) > tol.residual.sqrt() {
                continue;
            }
            res[k] = r
                .rungs
                .iter()
                .map(|(p, q)| {
                    let x = net.contact(*p).point_sphere();
                    let y = net.contact(*q).point_sphere();
                    reflect(&x, &m).projective_sine(&y)
                })
                .fold(0.0, f64::max);
        }
        let k = if res[0] <= res[1] { 0 } else { 1 };
        if !res[k].is_finite() {
            return Err(no(res));
        }
        out.push(unit_mobius(&cands[k]).ok_or(no(res))?);
        residuals.push(res[k]);
    }
    cert.face_quer_spheres = out;
    cert.face_quer_residuals = residuals;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct DupinReport {
    pub is_dupin: bool,
    pub failing: Option<Label>,
    pub cyclide: Option<DupinCyclide>,
    /// Largest residual of a curvature sphere against its half.
    pub residual: f64,
}

/// Both directions channel and all curvature spheres confined to one fixed
/// orthogonal splitting.
pub fn is_dupin_cyclide(net: &LegendreNet, tol: &Tolerances) -> DupinReport {
    let fail = |label: Label| DupinReport {
        is_dupin: false,
        failing: Some(label),
        cyclide: None,
        residual: f64::NAN,
    };
    let plus_cert = match verify_channel(net, Label::Plus, tol) {
        Ok(c) => c,
        Err(_) => return fail(Label::Plus),
    };
    if verify_channel(net, Label::Minus, tol).is_err() {
        return fail(Label::Minus);
    }
    let by_label = |label: Label| -> Vec<LieVec> {
        net.complex()
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.label == label)
            .map(|(i, _)| net.sphere(i))
            .collect()
    };
    let plus = by_label(Label::Plus);
    let minus = by_label(Label::Minus);
    let cyclide = match Subspace::span_normalized(&plus, tol) {
        Ok(span) if span.dim() == 3 => {
            let minus_half = span.orthocomplement();
            DupinCyclide {
                plus: span,
                minus: minus_half,
            }
        }
        _ => plus_cert.lie_cyclides[0].clone(),
    };
    if cyclide.defect(tol).is_some() {
        return fail(Label::Plus);
    }
    let mut residual: f64 = 0.0;
    for s in &plus {
        residual = residual.max(cyclide.plus.residual(s));
    }
    for s in &minus {
        residual = residual.max(cyclide.minus.residual(s));
    }
    DupinReport {
        is_dupin: residual <= tol.residual,
        failing: (residual > tol.residual).then_some(Label::Minus),
        cyclide: Some(cyclide),
        residual,
    }
}

/// Smallest-to-largest singular value ratio of the lifted points beyond
/// `rank`: zero iff the lifts `(x, 1, ½|x|²)` have rank at most `rank`.
///
/// Points are centered and scaled first so the measure is similarity
/// invariant.
pub fn lift_rank_residual(points: &[Vec3], rank: usize) -> f64 {
    if points.len() <= rank {
        return 0.0;
    }
    let n = points.len() as f64;
    let centroid = points.iter().fold(Vec3::zeros(), |a, p| a + p) / n;
    let scale = points
        .iter()
        .map(|p| (p - centroid).norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let m = DMatrix::from_fn(points.len(), 5, |i, j| {
        let x = (points[i] - centroid) / scale;
        match j {
            0..=2 => x[j],
            3 => 1.0,
            _ => 0.5 * x.norm_squared(),
        }
    });
    let sv = crate::linalg::svd(&m).singular_values;
    if sv.len() <= rank || sv[0] == 0.0 {
        return 0.0;
    }
    sv[rank] / sv[0]
}

/// Concircularity (or collinearity) of four points via the rank of their lifts.
pub fn concircular_residual(p: &[Vec3; 4]) -> f64 {
    lift_rank_residual(p, 3)
}

pub fn are_concircular(p: &[Vec3; 4], tol: &Tolerances) -> bool {
    concircular_residual(p) <= tol.concircular
}

/// Complex cross-ratio `((z1−z2)(z3−z4)) / ((z2−z3)(z4−z1))` of four
/// concircular points in an in-plane frame; real for concircular input.
pub fn cross_ratio(p: &[Vec3; 4], tol: &Tolerances) -> Result<f64> {
    let z = cross_ratio_complex(p, tol)?;
    let scale = z.norm().max(1.0);
    if z.im.abs() > tol.concircular.sqrt() * scale {
        return Err(Error::NotConcircular(z.im.abs() / scale));
    }
    Ok(z.re)
}

pub fn cross_ratio_complex(p: &[Vec3; 4], tol: &Tolerances) -> Result<Complex64> {
    let span = p.iter().map(|x| (x - p[0]).norm()).fold(0.0, f64::max);
    for i in 0..4 {
        for j in i + 1..4 {
            if (p[i] - p[j]).norm() <= 1e-12 * span.max(1e-300) {
                return Err(Error::CoincidentPoints);
            }
        }
    }
    let res = concircular_residual(p);
    if res > tol.concircular {
        return Err(Error::NotConcircular(res));
    }
    let e1 = (p[1] - p[0]).normalize();
    let mut best = Vec3::zeros();
    for q in &p[2..] {
        let d = q - p[0];
        let perp = d - e1 * d.dot(&e1);
        if perp.norm() > best.norm() {
            best = perp;
        }
    }
    let e2 = if best.norm() > 1e-12 * span {
        best.normalize()
    } else {
        let trial = if e1.x.abs() < 0.9 {
            Vec3::x()
        } else {
            Vec3::y()
        };
        (trial - e1 * trial.dot(&e1)).normalize()
    };
    let z: Vec<Complex64> = p
        .iter()
        .map(|q| {
            let d = q - p[0];
            Complex64::new(d.dot(&e1), d.dot(&e2))
        })
        .collect();
    Ok(((z[0] - z[1]) * (z[2] - z[3])) / ((z[1] - z[2]) * (z[3] - z[0])))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossRatioReport {
    /// Relative spread per consecutive quadruple of transversal lines.
    pub spreads: Vec<f64>,
    pub max_spread: f64,
}

/// Spread of the cross-ratio of every consecutive quadruple of transversal
/// lines, taken across all generating circles.
pub fn cross_ratio_constancy(
    cert: &ChannelCertificate,
    net: &LegendreNet,
    tol: &Tolerances,
) -> Result<CrossRatioReport> {
    let c = net.complex();
    let transversal = c.lines(cert.direction.opposite());
    if transversal.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "cross-ratio constancy needs at least 4 transversal lines, found {}",
            transversal.len()
        )));
    }
    let owner = line_of_vertex(&transversal, c.n_vertices());
    let mut at: HashMap<(usize, usize), usize> = HashMap::new();
    for (lid, line) in cert.lines.iter().enumerate() {
        for v in &line.vertices {
            if let Some(t) = owner[*v] {
                at.insert((lid, t), *v);
            }
        }
    }
    let points = net.points();
    let mut spreads = Vec::new();
    for q in 0..transversal.len() - 3 {
        let mut values = Vec::new();
        for lid in 0..cert.lines.len() {
            let vs: Option<Vec<usize>> = (q..q + 4).map(|t| at.get(&(lid, t)).copied()).collect();
            let Some(vs) = vs else { continue };
            let pts: Option<Vec<Vec3>> = vs.iter().map(|v| points[*v]).collect();
            let Some(pts) = pts else { continue };
            values.push(cross_ratio(&[pts[0], pts[1], pts[2], pts[3]], tol)?);
        }
        if values.len() < 2 {
            spreads.push(0.0);
            continue;
        }
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = values
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
            .max(1e-300);
        spreads.push((max - min) / scale);
    }
    let max_spread = spreads.iter().copied().fold(0.0, f64::max);
    Ok(CrossRatioReport {
        spreads,
        max_spread,
    })
}

/// Ordered vertex positions of a discrete curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCurve3D {
    pub points: Vec<[f64; 3]>,
    #[serde(default)]
    pub closed: bool,
}

impl DiscreteCurve3D {
    pub fn new(points: Vec<Vec3>, closed: bool) -> Result<Self> {
        for w in points.windows(2) {
            if (w[0] - w[1]).norm() == 0.0 {
                return Err(Error::CoincidentPoints);
            }
        }
        Ok(Self {
            points: points.iter().map(|p| [p.x, p.y, p.z]).collect(),
            closed,
        })
    }

    pub fn vertices(&self) -> Vec<Vec3> {
        self.points
            .iter()
            .map(|p| Vec3::new(p[0], p[1], p[2]))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// First non-circular quadrilateral of two corresponding curves.
pub fn ribaucour_defect(
    a: &DiscreteCurve3D,
    b: &DiscreteCurve3D,
    tol: &Tolerances,
) -> Option<usize> {
    if a.len() != b.len() || a.len() < 2 {
        return Some(0);
    }
    let (pa, pb) = (a.vertices(), b.vertices());
    let n = pa.len();
    let quads = if a.closed && b.closed { n } else { n - 1 };
    (0..quads).find(|&i| {
        let j = (i + 1) % n;
        !are_concircular(&[pa[i], pa[j], pb[j], pb[i]], tol)
    })
}

pub fn is_ribaucour_pair(a: &DiscreteCurve3D, b: &DiscreteCurve3D, tol: &Tolerances) -> bool {
    ribaucour_defect(a, b, tol).is_none()
}

/// Every coordinate quadrilateral inside each `dir`-ribbon is circular,
/// including those spanning several faces.
pub fn is_multi_circular(net: &LegendreNet, dir: Label, tol: &Tolerances) -> bool {
    multi_circular_residual(net, dir) <= tol.concircular
}

pub fn multi_circular_residual(net: &LegendreNet, dir: Label) -> f64 {
    let c = net.complex();
    let points = net.points();
    let mut worst: f64 = 0.0;
    for r in c.ribbons(dir) {
        let mut rungs: Vec<(usize, usize)> = Vec::new();
        for f in &r.faces {
            let face = c.faces()[*f];
            let pairs = match dir {
                Label::Plus => [(face[0], face[1]), (face[3], face[2])],
                Label::Minus => [(face[0], face[3]), (face[1], face[2])],
            };
            for p in pairs {
                if !rungs.contains(&p) {
                    rungs.push(p);
                }
            }
        }
        for s in 0..rungs.len() {
            for t in s + 1..rungs.len() {
                let ids = [rungs[s].0, rungs[t].0, rungs[t].1, rungs[s].1];
                if let Some(p) = quad_points(&points, &ids) {
                    worst = worst.max(concircular_residual(&p));
                }
            }
        }
    }
    worst
}

/// Every coordinate quadrilateral of a grid net, of any span in both
/// directions, is circular.
pub fn net_multi_circular_residual(net: &LegendreNet) -> Result<f64> {
    let shape = net
        .complex()
        .grid_shape()
        .ok_or_else(|| Error::InvalidComplex("multi-circularity needs a grid".into()))?;
    let points = net.points();
    let id = |a: usize, b: usize| a + shape.n_plus * b;
    let mut worst: f64 = 0.0;
    for a1 in 0..shape.n_plus {
        for a2 in a1 + 1..shape.n_plus {
            for b1 in 0..shape.n_minus {
                for b2 in b1 + 1..shape.n_minus {
                    let ids = [id(a1, b1), id(a1, b2), id(a2, b2), id(a2, b1)];
                    if let Some(p) = quad_points(&points, &ids) {
                        worst = worst.max(concircular_residual(&p));
                    }
                }
            }
        }
    }
    Ok(worst)
}

fn quad_points(points: &[Option<Vec3>], ids: &[usize; 4]) -> Option<[Vec3; 4]> {
    Some([
        points[ids[0]]?,
        points[ids[1]]?,
        points[ids[2]]?,
        points[ids[3]]?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn on_circle(center: Vec3, e1: Vec3, e2: Vec3, r: f64, angle: f64) -> Vec3 {
        center + (e1 * angle.cos() + e2 * angle.sin()) * r
    }

    #[test]
    fn cross_ratio_square() {
        let t = tol();
        let p = [0.0, 90.0, 180.0, 270.0]
            .map(|d: f64| on_circle(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, d.to_radians()));
        // Oracle: complex cross-ratio of 1, i, −1, −i.
        let z = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        let oracle = ((z[0] - z[1]) * (z[2] - z[3])) / ((z[1] - z[2]) * (z[3] - z[0]));
        assert_abs_diff_eq!(oracle.re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cross_ratio(&p, &t).unwrap(), oracle.re, epsilon = 1e-12);
    }

    #[test]
    fn cross_ratio_frame_independent() {
        let t = tol();
        let angles = [0.3, 1.1, 2.9, 4.4];
        let a = angles.map(|s| on_circle(Vec3::zeros(), Vec3::x(), Vec3::y(), 1.0, s));
        let e1 = Vec3::new(1.0, 2.0, 2.0) / 3.0;
        let e2 = Vec3::new(2.0, -2.0, 1.0) / 3.0;
        let b = angles.map(|s| on_circle(Vec3::new(4.0, -1.0, 2.0), e1, e2, 2.5, s));
        let ca = cross_ratio(&a, &t).unwrap();
        let cb = cross_ratio(&b, &t).unwrap();
        assert_abs_diff_eq!(ca, cb, epsilon = 1e-12);
    }

    #[test]
    fn cross_ratio_errors() {
        let t = tol();
        let p = [Vec3::zeros(), Vec3::zeros(), Vec3::x(), Vec3::y()];
        assert!(matches!(cross_ratio(&p, &t), Err(Error::CoincidentPoints)));
        let q = [
            Vec3::zeros(),
            Vec3::x(),
            Vec3::y(),
            Vec3::new(0.3, 0.3, 1.0),
        ];
        assert!(matches!(cross_ratio(&q, &t), Err(Error::NotConcircular(_))));
    }

    #[test]
    fn concircular_lines_count() {
        let p = [Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0, Vec3::x() * 5.0];
        assert!(are_concircular(&p, &tol()));
    }

    #[test]
    fn ribaucour_pairs() {
        let t = tol();
        let a: Vec<Vec3> = (0..5).map(|k| Vec3::new(k as f64, 0.0, 0.0)).collect();
        let b: Vec<Vec3> = (0..5).map(|k| Vec3::new(k as f64, 1.0, 0.0)).collect();
        let ca = DiscreteCurve3D::new(a, false).unwrap();
        let cb = DiscreteCurve3D::new(b, false).unwrap();
        assert!(is_ribaucour_pair(&ca, &cb, &t));
        let c: Vec<Vec3> = (0..5)
            .map(|k| {
                Vec3::new(
                    k as f64 + 0.1 * (k * k) as f64,
                    1.0 + 0.2 * k as f64,
                    0.3 * k as f64,
                )
            })
            .collect();
        let cc = DiscreteCurve3D::new(c, false).unwrap();
        assert!(!is_ribaucour_pair(&ca, &cc, &t));
    }

    #[test]
    fn reflection_is_involution() {
        let m = LieVec::new(0.3, -1.0, 0.5, 0.2, 0.7, 0.0);
        let tau = LieVec::new(1.0, 2.0, -0.5, 0.4, 0.1, 0.9);
        let back = reflect(&reflect(&tau, &m), &m);
        assert!((back - tau).aux_norm() < 1e-14);
    }

    #[test]
    fn lift_rank_detects_sphere() {
        let pts: Vec<Vec3> = (0..9)
            .map(|k| {
                let u = 0.3 * k as f64;
                let v = 0.2 + 0.15 * (k % 3) as f64;
                Vec3::new(u.cos() * v.cos(), u.sin() * v.cos(), v.sin()) * 2.0
            })
            .collect();
        assert!(lift_rank_residual(&pts, 4) < 1e-12);
        let mut bent = pts.clone();
        bent[4] += Vec3::new(0.1, 0.0, 0.05);
        assert!(lift_rank_residual(&bent, 4) > 1e-4);
    }
}
