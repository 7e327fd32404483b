//! Reference nets: surfaces of revolution, cylinders, cones, Dupin tori and
//! the reflection examples.

use std::f64::consts::{PI, TAU};

use nalgebra::{Rotation3, Unit};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::QuadComplex;
use crate::error::{Error, Result};
use crate::legendre::{curvature_sphere, ContactElement, LegendreNet};
use crate::lie::Vec3;
use crate::tol::Tolerances;

fn check_profile(profile: &[Vec3], normals: &[Vec3], tol: &Tolerances) -> Result<()> {
    if profile.len() < 2 {
        return Err(Error::InvalidParameter(
            "profile needs at least 2 vertices".into(),
        ));
    }
    if profile.len() != normals.len() {
        return Err(Error::InvalidParameter(format!(
            "{} profile vertices but {} normals",
            profile.len(),
            normals.len()
        )));
    }
    let contacts = profile
        .iter()
        .zip(normals)
        .map(|(x, n)| ContactElement::from_point_normal(x, n))
        .collect::<Result<Vec<_>>>()?;
    for (k, w) in contacts.windows(2).enumerate() {
        curvature_sphere(&w[0], &w[1], tol).map_err(|e| {
            Error::InvalidParameter(format!(
                "profile edge {k} violates the Legendre condition: {e}"
            ))
        })?;
    }
    Ok(())
}

/// Revolve a profile in the xz-plane about the z-axis. The `+` direction
/// is the rotation, closed into `m`-gons.
pub fn make_revolution(
    profile: &[Vec3],
    normals: &[Vec3],
    m: usize,
    tol: &Tolerances,
) -> Result<LegendreNet> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!(
            "revolution needs m ≥ 3, got {m}"
        )));
    }
    for (x, n) in profile.iter().zip(normals) {
        if x.y.abs() > 1e-12 || n.y.abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "profile must lie in the xz-plane".into(),
            ));
        }
        if x.x <= 1e-9 {
            return Err(Error::InvalidParameter("profile touches the axis".into()));
        }
    }
    check_profile(profile, normals, tol)?;
    let complex = QuadComplex::grid(m, profile.len(), true)?;
    let mut points = Vec::with_capacity(m * profile.len());
    let mut nrm = Vec::with_capacity(m * profile.len());
    for (x, n) in profile.iter().zip(normals) {
        for a in 0..m {
            let rot = Rotation3::from_axis_angle(&Vec3::z_axis(), TAU * a as f64 / m as f64);
            points.push(rot * x);
            nrm.push(rot * n);
        }
    }
    LegendreNet::from_points_normals(complex, &points, &nrm, tol)
}

/// Translate a profile in the xy-plane along z; the `+` lines are the rulings.
pub fn make_cylinder(
    profile: &[Vec3],
    normals: &[Vec3],
    offsets: &[f64],
    tol: &Tolerances,
) -> Result<LegendreNet> {
    if offsets.len() < 2 {
        return Err(Error::InvalidParameter(
            "cylinder needs at least 2 offsets".into(),
        ));
    }
    for (x, n) in profile.iter().zip(normals) {
        if x.z.abs() > 1e-12 || n.z.abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "profile must lie in the xy-plane".into(),
            ));
        }
    }
    check_profile(profile, normals, tol)?;
    let complex = QuadComplex::grid(offsets.len(), profile.len(), false)?;
    let mut points = Vec::new();
    let mut nrm = Vec::new();
    for (x, n) in profile.iter().zip(normals) {
        for h in offsets {
            points.push(x + Vec3::z() * *h);
            nrm.push(*n);
        }
    }
    LegendreNet::from_points_normals(complex, &points, &nrm, tol)
}

/// Scale a profile on the unit sphere; the `+` lines are the rulings
/// through the apex at the origin.
pub fn make_cone(
    profile: &[Vec3],
    normals: &[Vec3],
    scales: &[f64],
    tol: &Tolerances,
) -> Result<LegendreNet> {
    if scales.len() < 2 {
        return Err(Error::InvalidParameter(
            "cone needs at least 2 scales".into(),
        ));
    }
    if scales.iter().any(|s| *s <= 0.0) {
        return Err(Error::InvalidParameter(
            "cone scales must be positive".into(),
        ));
    }
    for (x, n) in profile.iter().zip(normals) {
        if (x.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "cone profile must lie on the unit sphere".into(),
            ));
        }
        if x.dot(n).abs() > 1e-9 {
            return Err(Error::InvalidParameter(
                "cone normals must be orthogonal to the rulings".into(),
            ));
        }
    }
    check_profile(profile, normals, tol)?;
    let complex = QuadComplex::grid(scales.len(), profile.len(), false)?;
    let mut points = Vec::new();
    let mut nrm = Vec::new();
    for (x, n) in profile.iter().zip(normals) {
        for s in scales {
            points.push(x * *s);
            nrm.push(*n);
        }
    }
    LegendreNet::from_points_normals(complex, &points, &nrm, tol)
}

/// Torus of revolution with outward normals; `u` (rotation, `+`) is closed
/// with `m` samples, `v` takes `n` samples of the tube without closing.
pub fn make_dupin_torus(
    big: f64,
    small: f64,
    m: usize,
    n: usize,
    tol: &Tolerances,
) -> Result<LegendreNet> {
    if !(big > small && small > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "torus needs R > r > 0, got R = {big}, r = {small}"
        )));
    }
    if m < 3 || n < 3 {
        return Err(Error::InvalidParameter(format!(
            "torus needs m, n ≥ 3, got {m}×{n}"
        )));
    }
    let complex = QuadComplex::grid(m, n, true)?;
    let mut points = Vec::new();
    let mut nrm = Vec::new();
    for b in 0..n {
        let v = TAU * b as f64 / n as f64;
        for a in 0..m {
            let u = TAU * a as f64 / m as f64;
            let radial = Vec3::new(u.cos(), u.sin(), 0.0);
            let normal = radial * v.cos() + Vec3::z() * v.sin();
            points.push(radial * big + normal * small);
            nrm.push(normal);
        }
    }
    LegendreNet::from_points_normals(complex, &points, &nrm, tol)
}

/// Planar Legendre curve in the plane spanned by `e1, e2`: each step turns
/// the normal by `θ` about the center of a sphere of signed radius `r`.
pub fn planar_legendre_curve(
    x0: Vec3,
    n0: Vec3,
    e1: Vec3,
    e2: Vec3,
    steps: &[(f64, f64)],
) -> (Vec<Vec3>, Vec<Vec3>) {
    let mut xs = vec![x0];
    let mut ns = vec![n0];
    for (theta, r) in steps {
        let x = *xs.last().unwrap();
        let n = *ns.last().unwrap();
        let (a, b) = (n.dot(&e1), n.dot(&e2));
        let (c, s) = (theta.cos(), theta.sin());
        let n2 = e1 * (c * a - s * b) + e2 * (s * a + c * b);
        xs.push(x + (n - n2) * *r);
        ns.push(n2);
    }
    (xs, ns)
}

/// Legendre curve on the unit sphere with normals tangent to the sphere:
/// each step rotates the point about the center of the shared sphere.
pub fn spherical_legendre_curve(
    x0: Vec3,
    n0: Vec3,
    steps: &[(f64, f64)],
) -> (Vec<Vec3>, Vec<Vec3>) {
    let mut xs = vec![x0];
    let mut ns = vec![n0];
    for (theta, r) in steps {
        let x = *xs.last().unwrap();
        let n = *ns.last().unwrap();
        let c = x + n * *r;
        let rot = Rotation3::from_axis_angle(&Unit::new_normalize(c), *theta);
        let x2 = rot * x;
        xs.push(x2);
        ns.push((c - x2) / *r);
    }
    (xs, ns)
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn signed_radius(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let r = rng.random_range(lo..hi);
    if rng.random_bool(0.5) {
        r
    } else {
        -r
    }
}

/// Random Legendre profile in the xz-plane, away from the z-axis.
pub fn random_revolution_profile(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec3>, Vec<Vec3>) {
    loop {
        let x0 = Vec3::new(rng.random_range(2.5..3.5), 0.0, rng.random_range(-0.5..0.5));
        let a0: f64 = rng.random_range(-0.6..0.6);
        let n0 = Vec3::new(a0.cos(), 0.0, a0.sin());
        let steps: Vec<(f64, f64)> = (1..n)
            .map(|_| (rng.random_range(0.12..0.3), signed_radius(rng, 0.6, 1.6)))
            .collect();
        let (xs, ns) = planar_legendre_curve(x0, n0, Vec3::x(), Vec3::z(), &steps);
        if xs.iter().all(|x| x.x > 0.5) {
            return (xs, ns);
        }
    }
}

/// Random Legendre profile in the xy-plane.
pub fn random_planar_profile(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec3>, Vec<Vec3>) {
    let x0 = Vec3::new(
        rng.random_range(-0.5..0.5),
        rng.random_range(-0.5..0.5),
        0.0,
    );
    let a0: f64 = rng.random_range(0.0..TAU);
    let n0 = Vec3::new(a0.cos(), a0.sin(), 0.0);
    let steps: Vec<(f64, f64)> = (1..n)
        .map(|_| (rng.random_range(0.15..0.4), signed_radius(rng, 0.6, 1.8)))
        .collect();
    planar_legendre_curve(x0, n0, Vec3::x(), Vec3::y(), &steps)
}

/// Random Legendre curve on the unit sphere with tangential normals.
pub fn random_spherical_profile(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec3>, Vec<Vec3>) {
    let x0 = Vec3::new(0.0, 0.0, 1.0);
    let a0: f64 = rng.random_range(0.0..TAU);
    let n0 = Vec3::new(a0.cos(), a0.sin(), 0.0);
    let steps: Vec<(f64, f64)> = (1..n)
        .map(|_| (rng.random_range(0.2..0.45), signed_radius(rng, 0.3, 1.2)))
        .collect();
    spherical_legendre_curve(x0, n0, &steps)
}

pub fn random_revolution(seed: u64, m: usize, n: usize, tol: &Tolerances) -> Result<LegendreNet> {
    let mut rng = seeded(seed);
    let (xs, ns) = random_revolution_profile(&mut rng, n);
    make_revolution(&xs, &ns, m, tol)
}

pub fn random_cylinder(seed: u64, m: usize, n: usize, tol: &Tolerances) -> Result<LegendreNet> {
    let mut rng = seeded(seed);
    let (xs, ns) = random_planar_profile(&mut rng, n);
    let offsets = increasing(&mut rng, m, 0.3, 0.9);
    make_cylinder(&xs, &ns, &offsets, tol)
}

pub fn random_cone(seed: u64, m: usize, n: usize, tol: &Tolerances) -> Result<LegendreNet> {
    let mut rng = seeded(seed);
    let (xs, ns) = random_spherical_profile(&mut rng, n);
    let mut scales = increasing(&mut rng, m, 0.2, 0.6);
    for s in &mut scales {
        *s += 1.0;
    }
    make_cone(&xs, &ns, &scales, tol)
}

fn increasing(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = vec![0.0];
    for _ in 1..m {
        let last = *out.last().unwrap();
        out.push(last + rng.random_range(lo..hi));
    }
    out
}

/// Reflection examples. Every row is the reflection of the previous one in
/// a plane; the first row is
///
/// 1. a circle whose normals meet in a point of its axis (random planes),
/// 2. a non-circular curve on a sphere with radial normals (non-parallel planes),
/// 3. a circle whose normals are not concurrent (parallel planes).
pub fn make_reflection_example(
    kind: u8,
    seed: u64,
    m: usize,
    n: usize,
    tol: &Tolerances,
) -> Result<LegendreNet> {
    if !(1..=3).contains(&kind) {
        return Err(Error::InvalidParameter(format!(
            "unknown example kind {kind}"
        )));
    }
    if m < 3 || n < 2 {
        return Err(Error::InvalidParameter(format!(
            "example needs m ≥ 3 and n ≥ 2, got {m}×{n}"
        )));
    }
    let mut rng = seeded(seed);
    let (curve, normals) = match kind {
        1 => {
            let apex = Vec3::new(0.0, 0.0, rng.random_range(0.8..1.6));
            let pts: Vec<Vec3> = (0..m)
                .map(|a| {
                    let t = 0.9 * PI * a as f64 / (m - 1) as f64;
                    Vec3::new(t.cos(), t.sin(), 0.0)
                })
                .collect();
            let nrm = pts.iter().map(|x| (x - apex).normalize()).collect();
            (pts, nrm)
        }
        2 => {
            let pts: Vec<Vec3> = (0..m)
                .map(|a| {
                    let t = 0.9 * PI * a as f64 / (m - 1) as f64;
                    Vec3::new(t.cos(), t.sin(), 0.35 * (2.0 * t).sin() + 0.1 * t).normalize()
                })
                .collect();
            let nrm = pts.clone();
            (pts, nrm)
        }
        _ => {
            let pts: Vec<Vec3> = (0..m)
                .map(|a| {
                    let t = 0.9 * PI * a as f64 / (m - 1) as f64;
                    Vec3::new(t.cos(), t.sin(), 0.0)
                })
                .collect();
            let mut nrm = vec![Vec3::new(0.8, 0.1, 0.59).normalize()];
            for w in pts.windows(2) {
                let d = (w[1] - w[0]).normalize();
                let last = *nrm.last().unwrap();
                nrm.push(last - d * (2.0 * last.dot(&d)));
            }
            (pts, nrm)
        }
    };
    let base_normal = Vec3::z();
    let mut rows = vec![(curve, normals)];
    for b in 0..n - 1 {
        let normal = match kind {
            3 => base_normal,
            _ => (base_normal
                + Vec3::new(
                    rng.random_range(-0.25..0.25),
                    rng.random_range(-0.25..0.25),
                    0.0,
                ))
            .normalize(),
        };
        let offset = 0.5 * (b as f64 + 1.0) + rng.random_range(-0.1..0.1);
        let (xs, ns) = rows.last().unwrap();
        let reflected: Vec<Vec3> = xs
            .iter()
            .map(|x| x - normal * (2.0 * (normal.dot(x) - offset)))
            .collect();
        let reflected_n: Vec<Vec3> = ns
            .iter()
            .map(|v| v - normal * (2.0 * normal.dot(v)))
            .collect();
        rows.push((reflected, reflected_n));
    }
    let complex = QuadComplex::grid(m, n, false)?;
    let points: Vec<Vec3> = rows.iter().flat_map(|(x, _)| x.iter().copied()).collect();
    let nrm: Vec<Vec3> = rows.iter().flat_map(|(_, v)| v.iter().copied()).collect();
    LegendreNet::from_points_normals(complex, &points, &nrm, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{certify, is_dupin_cyclide, verify_channel, ChannelCheck};
    use crate::complex::Label;
    use crate::lie::{unlift, LieSphere};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn dupin_torus_is_dupin() {
        let net = make_dupin_torus(2.0, 1.0, 16, 16, &tol()).unwrap();
        let r = is_dupin_cyclide(&net, &tol());
        assert!(r.is_dupin, "{r:?}");
        assert!(make_dupin_torus(1.0, 2.0, 8, 8, &tol()).is_err());
    }

    #[test]
    fn revolution_requires_three_rotations() {
        let mut rng = seeded(1);
        let (xs, ns) = random_revolution_profile(&mut rng, 5);
        assert!(make_revolution(&xs, &ns, 2, &tol()).is_err());
        let mut bad = ns.clone();
        bad[2] = Vec3::new(0.0, 0.0, 1.0);
        assert!(make_revolution(&xs, &bad, 6, &tol()).is_err());
    }

    #[test]
    fn generators_are_channel() {
        let t = tol();
        for seed in 0..4 {
            for net in [
                random_revolution(seed, 8, 8, &t).unwrap(),
                random_cylinder(seed, 8, 8, &t).unwrap(),
                random_cone(seed, 8, 8, &t).unwrap(),
            ] {
                let cert = certify(&net, Label::Plus, &t).unwrap();
                assert!(cert.envelope_residual(&net) < 1e-8);
                assert!(cert.circle_agreement.iter().all(|r| *r < 1e-8));
                assert!(cert.circle_membership_residual(&net) < 1e-8);
            }
        }
    }

    #[test]
    fn square_cylinder_face_spheres_are_planes() {
        let t = tol();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let profile: Vec<Vec3> = [
            (1.0, 1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
            (1.0, -1.0),
            (1.0, 1.0),
        ]
        .iter()
        .map(|(x, y)| Vec3::new(*x, *y, 0.0))
        .collect();
        let normals: Vec<Vec3> = profile
            .iter()
            .map(|p| Vec3::new(p.x * s, p.y * s, 0.0))
            .collect();
        let net = make_cylinder(&profile[..4], &normals[..4], &[0.0, 0.5, 1.0, 2.0], &t).unwrap();
        let cert = certify(&net, Label::Plus, &t).unwrap();
        for m in &cert.face_spheres {
            assert!(matches!(
                crate::channel::mobius_sphere(m, &t).unwrap(),
                LieSphere::Plane { .. }
            ));
        }
    }

    #[test]
    fn reflection_examples() {
        let t = tol();
        let e1 = make_reflection_example(1, 7, 8, 6, &t).unwrap();
        assert!(verify_channel(&e1, Label::Plus, &t).is_ok());
        let e3 = make_reflection_example(3, 7, 8, 6, &t).unwrap();
        let fail = verify_channel(&e3, Label::Plus, &t).unwrap_err();
        assert_eq!(fail.check, ChannelCheck::Constancy);
        let e2 = make_reflection_example(2, 7, 8, 6, &t).unwrap();
        match verify_channel(&e2, Label::Plus, &t) {
            Ok(_) => {}
            Err(f) => assert_eq!(f.check, ChannelCheck::Signature),
        }
    }

    #[test]
    fn planar_step_shares_sphere() {
        let (xs, ns) =
            planar_legendre_curve(Vec3::x(), Vec3::x(), Vec3::x(), Vec3::y(), &[(0.5, -1.0)]);
        let c = xs[1] + ns[1] * -1.0;
        assert!((c - Vec3::zeros()).norm() < 1e-14);
        match unlift(
            &ContactElement::from_point_normal(&xs[0], &ns[0])
                .unwrap()
                .sphere_with_radius(-1.0),
            &tol(),
        )
        .unwrap()
        {
            LieSphere::Sphere { center, .. } => assert!(center.norm() < 1e-14),
            other => panic!("{other:?}"),
        }
    }
}
