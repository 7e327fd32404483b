//! Discrete channel surfaces enveloped by a regular sphere curve.

use rand::Rng;

use super::{pi_subspace, propagate_point, CircleFrame};
use crate::channel::{certify, circle_from_cyclide, ChannelCertificate};
use crate::complex::{Label, QuadComplex};
use crate::error::{Error, Result};
use crate::legendre::{ContactElement, LegendreNet};
use crate::lie::{inner, mobius_from_lie, LieSphere, LieVec, Subspace, Vec3};
use crate::tol::Tolerances;

/// A discrete curve of spheres `s_j` together with, for every edge, the
/// sphere `σ_ij` of the pencil spanned by its end spheres. All spheres are
/// unit Möbius vectors (orthogonal to `e6`).
#[derive(Debug, Clone)]
pub struct SphereCurve {
    pub spheres: Vec<LieVec>,
    pub face_spheres: Vec<LieVec>,
    pub closed: bool,
}

fn unit_mobius_checked(m: &LieVec, what: &str, tol: &Tolerances) -> Result<LieVec> {
    if m.u6().abs() > tol.contact * m.aux_norm() {
        return Err(Error::InvalidSphereCurve(format!(
            "{what} is not a Möbius vector"
        )));
    }
    let n = m.norm_sq();
    if n <= tol.signature * m.aux_norm().powi(2) {
        return Err(Error::InvalidSphereCurve(format!(
            "{what} is not spacelike"
        )));
    }
    Ok(*m / n.sqrt())
}

fn mobius_of(s: &LieSphere, what: &str) -> Result<LieVec> {
    match s {
        LieSphere::Sphere { .. } | LieSphere::Plane { .. } => {
            Ok(mobius_from_lie(&s.lift(), 0.0).expect("oriented sphere"))
        }
        _ => Err(Error::InvalidSphereCurve(format!("{what} is a point"))),
    }
}

impl SphereCurve {
    pub fn new(
        spheres: Vec<LieVec>,
        face_spheres: Vec<LieVec>,
        closed: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        let n = spheres.len();
        if n < 2 || (closed && n < 3) {
            return Err(Error::InvalidSphereCurve(format!(
                "{n} spheres are too few"
            )));
        }
        let expected = if closed { n } else { n - 1 };
        if face_spheres.len() != expected {
            return Err(Error::InvalidSphereCurve(format!(
                "{} edge spheres given, {expected} expected",
                face_spheres.len()
            )));
        }
        let spheres = spheres
            .iter()
            .enumerate()
            .map(|(j, s)| unit_mobius_checked(s, &format!("sphere {j}"), tol))
            .collect::<Result<Vec<_>>>()?;
        let face_spheres = face_spheres
            .iter()
            .enumerate()
            .map(|(e, s)| unit_mobius_checked(s, &format!("edge sphere {e}"), tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spheres,
            face_spheres,
            closed,
        })
    }

    /// Curve from Euclidean spheres and planes; orientation is carried by
    /// the sign of the radius.
    pub fn from_euclidean(
        spheres: &[LieSphere],
        face_spheres: &[LieSphere],
        closed: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        let s = spheres
            .iter()
            .enumerate()
            .map(|(j, x)| mobius_of(x, &format!("sphere {j}")))
            .collect::<Result<Vec<_>>>()?;
        let f = face_spheres
            .iter()
            .enumerate()
            .map(|(e, x)| mobius_of(x, &format!("edge sphere {e}")))
            .collect::<Result<Vec<_>>>()?;
        Self::new(s, f, closed, tol)
    }

    pub fn len(&self) -> usize {
        self.spheres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }

    pub fn n_edges(&self) -> usize {
        self.face_spheres.len()
    }

    /// End vertices of edge `e`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        (e, (e + 1) % self.len())
    }

    /// Edges adjacent to vertex `j`: (incoming, outgoing).
    pub fn edges_at(&self, j: usize) -> (Option<usize>, Option<usize>) {
        let n = self.len();
        let prev = if j > 0 {
            Some(j - 1)
        } else if self.closed {
            Some(n - 1)
        } else {
            None
        };
        let next = if j + 1 < n || self.closed {
            Some(j)
        } else {
            None
        };
        (prev, next)
    }

    /// Sphere curve read off a channel certificate: line spheres and
    /// face-spheres in their order along the ribbon chain.
    pub fn from_certificate(cert: &ChannelCertificate, tol: &Tolerances) -> Result<Self> {
        let n_lines = cert.lines.len();
        let mut ribbons_of: Vec<Vec<usize>> = vec![Vec::new(); n_lines];
        for (r, rb) in cert.ribbons.iter().enumerate() {
            ribbons_of[rb.left].push(r);
            ribbons_of[rb.right].push(r);
        }
        if ribbons_of.iter().any(|r| r.len() > 2) {
            return Err(Error::InsufficientData(
                "ribbons do not form a chain".into(),
            ));
        }
        let start = (0..n_lines).find(|l| ribbons_of[*l].len() < 2);
        let closed = start.is_none();
        let start = start.unwrap_or(0);
        let mut order = vec![start];
        let mut faces = Vec::new();
        let mut line = start;
        let mut last: Option<usize> = None;
        while let Some(&r) = ribbons_of[line].iter().find(|r| Some(**r) != last) {
            let rb = &cert.ribbons[r];
            let next = if rb.left == line { rb.right } else { rb.left };
            faces.push(r);
            last = Some(r);
            if next == start {
                break;
            }
            if order.contains(&next) {
                return Err(Error::InsufficientData(
                    "ribbons do not form a chain".into(),
                ));
            }
            order.push(next);
            line = next;
        }
        if order.len() != n_lines {
            return Err(Error::InsufficientData(
                "lines are not connected by ribbons".into(),
            ));
        }
        let spheres = order
            .iter()
            .map(|l| {
                mobius_from_lie(&cert.line_spheres[*l], tol.rank)
                    .ok_or(Error::PointSphereCurvature { line: *l })
            })
            .collect::<Result<Vec<_>>>()?;
        let face_spheres = faces.iter().map(|r| cert.face_spheres[*r]).collect();
        Self::new(spheres, face_spheres, closed, tol)
    }

    /// Point-sphere space of the circle along which `s_j` touches the
    /// envelope.
    pub fn circle(&self, j: usize, tol: &Tolerances) -> Result<Subspace> {
        let e6 = LieVec::e6();
        let gens = match self.edges_at(j) {
            (Some(a), Some(b)) => [self.face_spheres[a], self.face_spheres[b], e6],
            (Some(a), None) | (None, Some(a)) => [self.spheres[j], self.face_spheres[a], e6],
            (None, None) => unreachable!(),
        };
        let c = Subspace::span(&gens, tol)?.orthocomplement();
        if c.dim() != 3 || !c.signature(tol).is(2, 1, 0) {
            return Err(Error::InvalidSphereCurve(format!(
                "vertex {j}: spheres do not meet in a circle"
            )));
        }
        Ok(c)
    }
}

/// Per-vertex and per-edge regularity diagnostics of a sphere curve.
#[derive(Debug, Clone)]
pub struct SphereCurveReport {
    /// Distance of `s_j` from the pencil of its two edge spheres.
    pub span_residuals: Vec<Option<f64>>,
    /// Signature of that pencil.
    pub pencil_signatures: Vec<Option<(usize, usize, usize)>>,
    /// `|(s_i,σ_ij)² − (s_j,σ_ij)²|` per edge.
    pub angle_residuals: Vec<f64>,
    pub failures: Vec<String>,
}

impl SphereCurveReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_sphere_curve(curve: &SphereCurve, tol: &Tolerances) -> SphereCurveReport {
    let mut report = SphereCurveReport {
        span_residuals: Vec::new(),
        pencil_signatures: Vec::new(),
        angle_residuals: Vec::new(),
        failures: Vec::new(),
    };
    for j in 0..curve.len() {
        let (Some(a), Some(b)) = curve.edges_at(j) else {
            report.span_residuals.push(None);
            report.pencil_signatures.push(None);
            continue;
        };
        let pencil = Subspace::span(&[curve.face_spheres[a], curve.face_spheres[b]], tol);
        match pencil {
            Ok(p) if p.dim() == 2 => {
                let res = p.residual(&curve.spheres[j]);
                let sig = p.signature(tol);
                if res > tol.residual {
                    report.failures.push(format!(
                        "vertex {j}: sphere outside its pencil (residual {res:e})"
                    ));
                }
                if !sig.is(2, 0, 0) {
                    report
                        .failures
                        .push(format!("vertex {j}: pencil has signature {sig}"));
                }
                report.span_residuals.push(Some(res));
                report.pencil_signatures.push(Some(sig.triple()));
            }
            _ => {
                report
                    .failures
                    .push(format!("vertex {j}: edge spheres coincide"));
                report.span_residuals.push(None);
                report.pencil_signatures.push(None);
            }
        }
    }
    for e in 0..curve.n_edges() {
        let (i, j) = curve.edge(e);
        let sg = &curve.face_spheres[e];
        let res =
            (inner(&curve.spheres[i], sg).powi(2) - inner(&curve.spheres[j], sg).powi(2)).abs();
        if res > tol.residual {
            report.failures.push(format!(
                "edge {e}: end spheres meet the edge sphere at different angles ({res:e})"
            ));
        }
        report.angle_residuals.push(res);
    }
    report
}

/// A channel net built from a sphere curve, with the data of its
/// construction.
#[derive(Debug, Clone)]
pub struct SphereCurveBuild {
    pub net: LegendreNet,
    pub certificate: ChannelCertificate,
    /// Lie sphere `±s_j + e6` per row.
    pub lie_spheres: Vec<LieVec>,
    /// Orientation sign per row.
    pub orientations: Vec<f64>,
    /// Tangency residuals of the two orientation candidates per edge.
    pub candidate_residuals: Vec<[f64; 2]>,
    /// Number of admissible candidates per edge.
    pub admissible: Vec<usize>,
    /// Largest relative discriminant per edge.
    pub discriminants: Vec<f64>,
    /// Closed curves: distance of the propagated points from the start.
    pub monodromy: Option<f64>,
    /// Largest projective distance between the certificate face-spheres
    /// and the input edge spheres.
    pub face_sphere_residual: f64,
}

/// Envelope of the sphere curve sampled at `samples` points per circle,
/// starting at angle `phase` on the first circle.
pub fn channel_from_sphere_curve(
    curve: &SphereCurve,
    samples: usize,
    phase: f64,
    tol: &Tolerances,
) -> Result<SphereCurveBuild> {
    if samples < 3 {
        return Err(Error::InvalidParameter(
            "at least 3 samples per circle are needed".into(),
        ));
    }
    let report = validate_sphere_curve(curve, tol);
    if let Some(f) = report.failures.first() {
        return Err(Error::InvalidSphereCurve(f.clone()));
    }
    let n = curve.len();
    let circles = (0..n)
        .map(|j| curve.circle(j, tol))
        .collect::<Result<Vec<_>>>()?;
    let rows = if curve.closed { n + 1 } else { n };
    let admissible_tol = tol.residual.sqrt();

    let e6 = LieVec::e6();
    let mut lie_spheres = vec![curve.spheres[0] + e6];
    let mut orientations = vec![1.0];
    let mut candidate_residuals = Vec::new();
    let mut admissible = Vec::new();
    for e in 0..rows - 1 {
        let (_, j) = curve.edge(e);
        let si = lie_spheres[e];
        let mut res = [f64::INFINITY; 2];
        for (k, eps) in [1.0, -1.0].into_iter().enumerate() {
            let sj = curve.spheres[j] * eps + e6;
            if inner(&si, &sj).abs() <= tol.rank {
                continue;
            }
            let Ok(d) = pi_subspace(&circles[e], &si, &sj, tol) else {
                continue;
            };
            if d.dim() != 3 {
                continue;
            }
            if let Some(c) = circle_from_cyclide(&sj, &d, tol) {
                res[k] = c.distance(&circles[j]);
            }
        }
        let ok: Vec<usize> = (0..2).filter(|k| res[*k] <= admissible_tol).collect();
        let k = match ok.len() {
            0 => {
                return Err(Error::Orientation {
                    edge: e,
                    candidates: 0,
                })
            }
            1 => ok[0],
            _ => {
                if orientations[e] > 0.0 {
                    0
                } else {
                    1
                }
            }
        };
        let eps = if k == 0 { 1.0 } else { -1.0 };
        candidate_residuals.push(res);
        admissible.push(ok.len());
        orientations.push(eps);
        lie_spheres.push(curve.spheres[j] * eps + e6);
    }

    let frame = CircleFrame::new(&circles[0], tol)?;
    let mut points: Vec<Vec<LieVec>> = vec![(0..samples)
        .map(|a| frame.point(phase + std::f64::consts::TAU * a as f64 / samples as f64))
        .collect()];
    let mut discriminants = Vec::new();
    for e in 0..rows - 1 {
        let (_, j) = curve.edge(e);
        let mut worst: f64 = 0.0;
        let mut next = Vec::with_capacity(samples);
        for x in &points[e] {
            let (y, _, disc) =
                propagate_point(x, &lie_spheres[e], &lie_spheres[e + 1], &circles[j], tol)?;
            worst = worst.max(disc);
            next.push(y);
        }
        if worst > tol.discriminant {
            return Err(Error::Discriminant {
                edge: e,
                value: worst,
            });
        }
        discriminants.push(worst);
        points.push(next);
    }
    let monodromy = curve.closed.then(|| {
        points[0]
            .iter()
            .zip(&points[n])
            .map(|(a, b)| a.projective_sine(b))
            .fold(0.0, f64::max)
    });

    let complex = QuadComplex::grid(samples, rows, true)?;
    let mut contacts = Vec::with_capacity(samples * rows);
    for (b, row) in points.iter().enumerate() {
        for x in row {
            contacts.push(ContactElement::from_vectors(x, &lie_spheres[b], tol)?);
        }
    }
    let net = LegendreNet::new(complex, contacts, tol)?;
    let certificate = certify(&net, Label::Plus, tol)?;
    let mut face_sphere_residual: f64 = 0.0;
    for (r, rb) in certificate.ribbons.iter().enumerate() {
        let b = rb.faces[0] / samples;
        face_sphere_residual = face_sphere_residual
            .max(certificate.face_spheres[r].projective_sine(&curve.face_spheres[b]));
    }
    Ok(SphereCurveBuild {
        net,
        certificate,
        lie_spheres,
        orientations,
        candidate_residuals,
        admissible,
        discriminants,
        monodromy,
        face_sphere_residual,
    })
}

/// Möbius vector of the oriented sphere with center `c` and signed radius `r`.
pub fn mobius_sphere_vector(c: &Vec3, r: f64) -> LieVec {
    (LieVec::e0() + LieVec::new(c.x, c.y, c.z, 0.0, 0.5 * (c.norm_squared() - r * r), 0.0)) / r
}

fn euclidean(m: &LieVec) -> (Vec3, f64) {
    (m.spatial() / m.u0(), 1.0 / m.u0())
}

fn circle_of(a: &LieVec, b: &LieVec) -> (Vec3, Vec3, f64) {
    let (c1, r1) = euclidean(a);
    let (c2, r2) = euclidean(b);
    let d = c2 - c1;
    let len = d.norm();
    let nu = d / len;
    let x = (len * len + r1 * r1 - r2 * r2) / (2.0 * len);
    (c1 + nu * x, nu, (r1 * r1 - x * x).sqrt())
}

/// Random regular open sphere curve of `n` spheres: each sphere is the
/// image of the previous one under an inversion fixing the edge sphere.
pub fn random_sphere_curve(seed: u64, n: usize, tol: &Tolerances) -> Result<SphereCurve> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "a sphere curve needs at least 2 spheres".into(),
        ));
    }
    let mut rng = super::generators::seeded(seed);
    let h = 0.5;
    let mut s = vec![mobius_sphere_vector(&Vec3::zeros(), 1.0)];
    let mut sg = vec![mobius_sphere_vector(&Vec3::new(0.0, 0.0, 0.5), 1.0)];
    for j in 1..n {
        let last = *sg.last().unwrap();
        let (cs, rs) = euclidean(&last);
        let u = loop {
            let v = Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let l = v.norm();
            if l > 0.1 && l <= 1.0 {
                break v / l;
            }
        };
        let dist = 2.5 + rng.random::<f64>();
        let m = mobius_sphere_vector(&(cs + u * dist), (dist * dist - rs * rs).sqrt());
        let prev = *s.last().unwrap();
        s.push(prev.reflect_in(&m));
        if j == n - 1 {
            break;
        }
        let (q, mut nu, rho) = circle_of(&last, s.last().unwrap());
        if (q - cs).dot(&nu) < 0.0 {
            nu = -nu;
        }
        let t = h * (0.8 + 0.4 * rng.random::<f64>());
        let next = mobius_sphere_vector(&(q + nu * t), (rho * rho + t * t).sqrt());
        sg.push(next / next.norm_sq().sqrt());
    }
    SphereCurve::new(s, sg, false, tol)
}
