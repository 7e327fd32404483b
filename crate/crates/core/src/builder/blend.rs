//! Channel surfaces through a Ribaucour pair of curves.

use super::{pi_subspace, propagate_point, CircleFrame};
use crate::channel::{
    certify, circle_from_cyclide, ribaucour_defect, ChannelCertificate, DiscreteCurve3D,
};
use crate::complex::{Label, QuadComplex};
use crate::error::{Error, Result};
use crate::legendre::{
    curvature_sphere, face_cyclide_family, is_face_cyclide, ContactElement, DupinCyclide,
    FaceCyclideFamily, LegendreNet,
};
use crate::lie::{lift_point, LieVec, Subspace, Vec3};
use crate::tol::Tolerances;

/// Contact elements propagated along both curves of a Ribaucour pair, ready
/// to be blended by a choice of initial face cyclide.
#[derive(Debug, Clone)]
pub struct BlendSetup {
    /// Two-column net: vertex `2k` on the first curve, `2k + 1` on the second.
    pub ladder: LegendreNet,
    /// Curvature sphere shared by the `k`-th pair of vertices.
    pub spheres: Vec<LieVec>,
    /// Face-cyclide family of the first quadrilateral.
    pub family: FaceCyclideFamily,
    /// Largest propagation mismatch around a quadrilateral.
    pub consistency: f64,
}

fn step(f: &ContactElement, x: &LieVec, tol: &Tolerances) -> Result<ContactElement> {
    let t = f
        .member_orthogonal_to(x, tol.contact)
        .ok_or_else(|| Error::InvalidParameter("contact element contains the next point".into()))?;
    ContactElement::from_vectors(x, &t, tol)
}

/// Propagate `f0` (based at the first point of `c1`) along the pair.
pub fn prepare_blend(
    c1: &DiscreteCurve3D,
    c2: &DiscreteCurve3D,
    f0: &ContactElement,
    tol: &Tolerances,
) -> Result<BlendSetup> {
    let n = c1.len();
    if n < 2 || c2.len() != n {
        return Err(Error::InvalidParameter(
            "curves must have equal length of at least 2".into(),
        ));
    }
    if let Some(q) = ribaucour_defect(c1, c2, tol) {
        return Err(Error::NotRibaucourPair(q));
    }
    let (p, q) = (c1.vertices(), c2.vertices());
    let start = lift_point(&p[0]);
    if f0.residual(&start) > tol.contact {
        return Err(Error::InvalidContactElement(
            "initial contact element is not based at the first point".into(),
        ));
    }
    let limit = tol.residual.sqrt();
    let mut fp = vec![*f0];
    let mut fq = vec![step(f0, &lift_point(&q[0]), tol)?];
    let mut consistency: f64 = 0.0;
    for k in 0..n - 1 {
        let a = step(&fp[k], &lift_point(&p[k + 1]), tol)?;
        let b = step(&fq[k], &lift_point(&q[k + 1]), tol)?;
        let alt = step(&a, &lift_point(&q[k + 1]), tol)?;
        let residual = alt.subspace().distance(&b.subspace());
        if residual > limit {
            return Err(Error::InconsistentPropagation { quad: k, residual });
        }
        consistency = consistency.max(residual);
        fp.push(a);
        fq.push(b);
    }
    let spheres = (0..n)
        .map(|k| curvature_sphere(&fp[k], &fq[k], tol))
        .collect::<Result<Vec<_>>>()?;
    let contacts = fp.iter().zip(&fq).flat_map(|(a, b)| [*a, *b]).collect();
    let ladder = LegendreNet::new(QuadComplex::grid(2, n, false)?, contacts, tol)?;
    let family = face_cyclide_family(&ladder, 0, tol)?;
    Ok(BlendSetup {
        ladder,
        spheres,
        family,
        consistency,
    })
}

/// A blended channel net with its construction data.
#[derive(Debug, Clone)]
pub struct BlendResult {
    pub net: LegendreNet,
    pub certificate: ChannelCertificate,
    /// Generating circle (point-sphere space) per row.
    pub circles: Vec<Subspace>,
    /// Family parameter of the face cyclide chosen on every quadrilateral.
    pub parameters: Vec<f64>,
    pub discriminants: Vec<f64>,
}

impl BlendSetup {
    /// Blend with the face cyclide at parameter `t0` on the first
    /// quadrilateral, adding `extra` samples per circle on the arc away
    /// from the two curves.
    pub fn build(&self, t0: f64, extra: usize, tol: &Tolerances) -> Result<BlendResult> {
        let n = self.spheres.len();
        let s = &self.spheres;
        let gamma = self.family.at(t0);
        let mut d = gamma.minus.clone();
        let mut circles = Vec::with_capacity(n);
        let mut parameters = vec![t0];
        for k in 0..n {
            let c = circle_from_cyclide(&s[k], &d, tol)
                .ok_or(Error::PointSphereCurvature { line: k })?;
            if k + 1 < n {
                d = pi_subspace(&c, &s[k], &s[k + 1], tol)?;
                let cy = DupinCyclide {
                    plus: d.orthocomplement(),
                    minus: d.clone(),
                };
                if d.dim() != 3 || !is_face_cyclide(&self.ladder, k, &cy, tol) {
                    return Err(Error::NoContinuation(k));
                }
                if k > 0 {
                    let fam = face_cyclide_family(&self.ladder, k, tol)?;
                    parameters.push(fam.parameter_of(&cy, tol).ok_or(Error::NoContinuation(k))?);
                }
            }
            circles.push(c);
        }

        let frame = CircleFrame::new(&circles[0], tol)?;
        let c = self.ladder.contacts();
        let a1 = frame.angle(&c[0].point_sphere());
        let a2 = frame.angle(&c[1].point_sphere());
        let gap = (a1 - a2).rem_euclid(std::f64::consts::TAU);
        let mut rows: Vec<Vec<LieVec>> = vec![(1..=extra)
            .map(|i| frame.point(a2 + gap * i as f64 / (extra + 1) as f64))
            .collect()];
        let mut discriminants = Vec::with_capacity(n - 1);
        for k in 0..n - 1 {
            let mut worst: f64 = 0.0;
            let mut next = Vec::with_capacity(extra);
            for x in &rows[k] {
                let (y, _, disc) = propagate_point(x, &s[k], &s[k + 1], &circles[k + 1], tol)?;
                worst = worst.max(disc);
                next.push(y);
            }
            if worst > tol.discriminant {
                return Err(Error::Discriminant {
                    edge: k,
                    value: worst,
                });
            }
            discriminants.push(worst);
            rows.push(next);
        }

        let width = 2 + extra;
        let mut contacts = Vec::with_capacity(width * n);
        for k in 0..n {
            contacts.push(c[2 * k]);
            contacts.push(c[2 * k + 1]);
            for x in &rows[k] {
                contacts.push(ContactElement::from_vectors(x, &s[k], tol)?);
            }
        }
        let net = LegendreNet::new(QuadComplex::grid(width, n, extra > 0)?, contacts, tol)?;
        let certificate = certify(&net, Label::Plus, tol)?;
        Ok(BlendResult {
            net,
            certificate,
            circles,
            parameters,
            discriminants,
        })
    }
}

/// Channel net through the Ribaucour pair `c1`, `c2` whose first Lie cyclide
/// is the member `t0` of the face-cyclide family of the first quadrilateral.
pub fn blend_channel(
    c1: &DiscreteCurve3D,
    c2: &DiscreteCurve3D,
    f0: &ContactElement,
    t0: f64,
    extra: usize,
    tol: &Tolerances,
) -> Result<BlendResult> {
    prepare_blend(c1, c2, f0, tol)?.build(t0, extra, tol)
}

/// Two parallel straight lines `(kh, 0, 0)` and `(kh, 1, 0)` with a unit
/// normal at the origin making angle `z0` with the plane of the lines.
pub fn parallel_lines(
    n: usize,
    h: f64,
    z0: f64,
) -> Result<(DiscreteCurve3D, DiscreteCurve3D, ContactElement)> {
    let c1 = (0..n).map(|k| Vec3::new(k as f64 * h, 0.0, 0.0)).collect();
    let c2 = (0..n).map(|k| Vec3::new(k as f64 * h, 1.0, 0.0)).collect();
    let normal = Vec3::new(0.0, -z0.cos(), z0.sin());
    let f0 = ContactElement::from_point_normal(&Vec3::zeros(), &normal)?;
    Ok((
        DiscreteCurve3D::new(c1, false)?,
        DiscreteCurve3D::new(c2, false)?,
        f0,
    ))
}
