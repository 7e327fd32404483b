use liechannel::builder::generators::make_dupin_torus;
use liechannel::legendre::{curvature_sphere, face_cyclide_family, is_face_cyclide, is_legendre};
use liechannel::lie::{lift_point, lift_sphere, unlift, LieSphere};
use liechannel::{
    ContactElement, Error, Label, LegendreNet, LieVec, QuadComplex, Tolerances, Vec3,
};
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vec3> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vec3> {
    vec3()
        .prop_filter("nonzero", |v| v.norm() > 1e-2)
        .prop_map(|v| v.normalize())
}

#[test]
fn non_unit_normal_rejected() {
    assert!(matches!(
        ContactElement::from_point_normal(&Vec3::zeros(), &Vec3::new(0.0, 0.0, 2.0)),
        Err(Error::NonUnitNormal(_))
    ));
}

#[test]
fn sphere_through_two_contact_elements() {
    // Two points of the unit sphere with outward normals share the sphere of radius -1.
    let t = Tolerances::default();
    let a = Vec3::new(1.0, 0.0, 0.0);
    let b = Vec3::new(0.0, 0.6, 0.8);
    let fa = ContactElement::from_point_normal(&a, &a).unwrap();
    let fb = ContactElement::from_point_normal(&b, &b).unwrap();
    let s = curvature_sphere(&fa, &fb, &t).unwrap();
    match unlift(&s, &t).unwrap() {
        LieSphere::Sphere { center, radius } => {
            assert!(center.norm() < 1e-12);
            assert!((radius + 1.0).abs() < 1e-12);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn skew_elements_not_in_contact() {
    let t = Tolerances::default();
    let fa = ContactElement::from_point_normal(&Vec3::zeros(), &Vec3::z()).unwrap();
    let fb = ContactElement::from_point_normal(&Vec3::new(1.0, 0.0, 0.0), &Vec3::y()).unwrap();
    assert!(matches!(
        curvature_sphere(&fa, &fb, &t),
        Err(Error::NotInContact)
    ));
    assert!(matches!(
        curvature_sphere(&fa, &fa, &t),
        Err(Error::IdenticalContactElements)
    ));
}

#[test]
fn perturbed_torus_is_not_legendre() {
    let t = Tolerances::default();
    let net = make_dupin_torus(2.0, 1.0, 6, 5, &t).unwrap();
    let mut contacts = net.contacts().to_vec();
    contacts[7] = ContactElement::from_point_normal(
        &(net.points()[7].unwrap() + Vec3::new(0.0, 0.0, 1e-3)),
        &net.normals()[7].unwrap(),
    )
    .unwrap();
    let report = is_legendre(net.complex(), &contacts, &t);
    assert!(!report.passed());
    assert!(report.failures().iter().all(|f| {
        let e = net.complex().edges()[f.edge];
        e.a == 7 || e.b == 7
    }));
    assert!(matches!(
        LegendreNet::new(net.complex().clone(), contacts, &t),
        Err(Error::NotLegendre { .. })
    ));
}

#[test]
fn torus_face_cyclides_contain_the_torus() {
    let t = Tolerances::default();
    let net = make_dupin_torus(3.0, 1.0, 8, 6, &t).unwrap();
    let fam = face_cyclide_family(&net, 4, &t).unwrap();
    let plus: Vec<LieVec> = net
        .complex()
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.label == Label::Plus)
        .map(|(i, _)| net.sphere(i))
        .collect();
    let span = liechannel::Subspace::span_normalized(&plus, &t).unwrap();
    let torus = liechannel::DupinCyclide::new(span.clone(), span.orthocomplement(), &t).unwrap();
    let tt = fam
        .parameter_of(&torus, &t)
        .expect("torus is a face cyclide");
    assert!(fam.at(tt).distance(&torus) < 1e-8);
    for f in 0..net.complex().faces().len() {
        assert!(is_face_cyclide(&net, f, &torus, &t));
    }
}

proptest! {
    #[test]
    fn points_on_a_sphere_share_it(
        c in vec3(),
        r in 0.3..3.0f64,
        u in unit(),
        v in unit(),
        outward in any::<bool>(),
    ) {
        prop_assume!((u - v).norm() > 1e-2 && (u + v).norm() > 1e-2);
        let t = Tolerances::default();
        let sign = if outward { 1.0 } else { -1.0 };
        let fa = ContactElement::from_point_normal(&(c + u * r), &(u * sign)).unwrap();
        let fb = ContactElement::from_point_normal(&(c + v * r), &(v * sign)).unwrap();
        let s = curvature_sphere(&fa, &fb, &t).unwrap();
        let want = lift_sphere(&c, -sign * r);
        prop_assert!(s.projective_sine(&want) < 1e-9);
        prop_assert!(fa.orthogonality_residual(&s) < 1e-9);
    }

    #[test]
    fn contact_element_pencil(x in vec3(), n in unit(), r in -3.0..3.0f64) {
        let f = ContactElement::from_point_normal(&x, &n).unwrap();
        let s = f.sphere_with_radius(r);
        prop_assert!(s.null_residual() < 1e-12);
        prop_assert!(s.projective_sine(&lift_sphere(&(x + n * r), r)) < 1e-12 || r == 0.0);
        prop_assert!(f.residual(&lift_point(&x)) < 1e-12);
        let g = f.generators();
        prop_assert!(g[0].inner(&g[1]).abs() < 1e-12 * g[0].aux_norm() * g[1].aux_norm());
        prop_assert!((f.euclidean_point().unwrap() - x).norm() < 1e-12);
        prop_assert!((f.normal().unwrap() - n).norm() < 1e-12);
    }

    #[test]
    fn grid_of_a_sphere_is_legendre(n in 3usize..6) {
        let t = Tolerances::default();
        let c = QuadComplex::grid(n, n, false).unwrap();
        let mut pts = Vec::new();
        for b in 0..n {
            for a in 0..n {
                let (th, ph) = (0.3 + 0.2 * a as f64, 0.4 + 0.25 * b as f64);
                pts.push(Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()));
            }
        }
        let net = LegendreNet::from_points_normals(c, &pts, &pts, &t).unwrap();
        let unit_sphere = lift_sphere(&Vec3::zeros(), -1.0);
        prop_assert!(net.spheres().iter().all(|s| s.projective_sine(&unit_sphere) < 1e-9));
    }
}
