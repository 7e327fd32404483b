use liechannel::builder::generators::{make_dupin_torus, random_revolution};
use liechannel::builder::sphere_curve::random_sphere_curve;
use liechannel::channel::certify;
use liechannel::io::{self, NetFile, SphereCurveFile};
use liechannel::{Error, Label, Tolerances, Vec3};
use proptest::prelude::*;

#[test]
fn net_file_round_trip_on_disk() {
    let t = Tolerances::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    let net = random_revolution(9, 7, 6, &t).unwrap();
    io::save_net(&path, &net).unwrap();
    let back = io::load_net(&path, &t).unwrap();
    assert_eq!(back.complex().grid_shape(), net.complex().grid_shape());
    for (a, b) in net.points().iter().zip(back.points()) {
        assert!((a.unwrap() - b.unwrap()).norm() <= 1e-14);
    }
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value["complex"]["n_plus"], 7);
    assert_eq!(value["complex"]["wrap_plus"], true);
    assert_eq!(value["vertices"].as_array().unwrap().len(), 42);
    assert!(value["vertices"][0]["point"].is_array());
}

#[test]
fn malformed_files() {
    let t = Tolerances::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let net = random_revolution(9, 5, 4, &t).unwrap();
    io::save_net(&path, &net).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert!(matches!(io::load_net(&path, &t), Err(Error::Malformed(_))));
    std::fs::write(
        &path,
        r#"{"complex": {"n_plus": 2, "n_minus": 2}, "vertices": []}"#,
    )
    .unwrap();
    assert!(io::load_net(&path, &t).is_err());
    assert!(matches!(
        io::load_net(&dir.path().join("missing.json"), &t),
        Err(Error::Io(_))
    ));
}

#[test]
fn non_legendre_file_rejected() {
    let t = Tolerances::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    let net = random_revolution(1, 5, 4, &t).unwrap();
    let mut file = NetFile::from_net(&net, false);
    if let io::VertexSpec::Euclidean { point, .. } = &mut file.vertices[6] {
        point[2] += 0.01;
    }
    io::write_json(&path, &file).unwrap();
    assert!(matches!(
        io::load_net(&path, &t),
        Err(Error::NotLegendre { .. })
    ));
}

#[test]
fn sphere_curve_file_round_trip() {
    let t = Tolerances::default();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.json");
    let curve = random_sphere_curve(4, 5, &t).unwrap();
    io::write_json(&path, &SphereCurveFile::from_curve(&curve, &t).unwrap()).unwrap();
    let back = io::load_sphere_curve(&path, &t).unwrap();
    assert_eq!(back.len(), 5);
    for (a, b) in curve.spheres.iter().zip(&back.spheres) {
        assert!(a.projective_sine(b) < 1e-12);
    }
    for (a, b) in curve.face_spheres.iter().zip(&back.face_spheres) {
        assert!(a.projective_sine(b) < 1e-12);
    }
}

#[test]
fn curve_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"points": [[0,0,0],[1,0,0],[2,0.5,0]]}"#).unwrap();
    let c = io::load_curve(&path).unwrap();
    assert_eq!(c.len(), 3);
    assert!(!c.closed);
    std::fs::write(&path, r#"{"points": [[0,0,0],[0,0,0]]}"#).unwrap();
    assert!(matches!(
        io::load_curve(&path),
        Err(Error::CoincidentPoints)
    ));
}

#[test]
fn obj_counts_and_axes() {
    let t = Tolerances::default();
    let net = make_dupin_torus(2.0, 1.0, 12, 7, &t).unwrap();
    let text = io::to_obj(&net, None, &t).unwrap();
    let v: Vec<&str> = text.lines().filter(|l| l.starts_with("v ")).collect();
    let f: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
    assert_eq!(v.len(), 84);
    assert_eq!(f.len(), 12 * 6);
    let first: Vec<f64> = v[0][2..]
        .split_whitespace()
        .map(|x| x.parse().unwrap())
        .collect();
    let p = net.points()[0].unwrap();
    assert_eq!(first, vec![p.x, p.z, -p.y]);
    let max_index = f
        .iter()
        .flat_map(|l| {
            l[2..]
                .split_whitespace()
                .map(|x| x.parse::<usize>().unwrap())
        })
        .max()
        .unwrap();
    assert_eq!(max_index, 84);
}

#[test]
fn obj_circles() {
    let t = Tolerances::default();
    let net = random_revolution(2, 8, 6, &t).unwrap();
    let cert = certify(&net, Label::Plus, &t).unwrap();
    let text = io::to_obj(&net, Some(&cert), &t).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("v ")).count(),
        48 + 6 * 64
    );
    let polylines: Vec<&str> = text.lines().filter(|l| l.starts_with("l ")).collect();
    assert_eq!(polylines.len(), 6);
    assert!(polylines.iter().all(|l| l.split_whitespace().count() == 66));
    let circle_pts: Vec<Vec3> = text
        .lines()
        .filter(|l| l.starts_with("v "))
        .skip(48)
        .take(64)
        .map(|l| {
            let c: Vec<f64> = l[2..]
                .split_whitespace()
                .map(|x| x.parse().unwrap())
                .collect();
            Vec3::new(c[0], -c[2], c[1])
        })
        .collect();
    let z = circle_pts[0].z;
    let r = circle_pts[0].xy().norm();
    assert!(circle_pts
        .iter()
        .all(|p| (p.z - z).abs() < 1e-9 && (p.xy().norm() - r).abs() < 1e-9));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn json_floats_are_exact(seed in 0u64..500) {
        let t = Tolerances::default();
        let net = random_revolution(seed, 5, 4, &t).unwrap();
        let text = serde_json::to_string(&NetFile::from_net(&net, true)).unwrap();
        let back: NetFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, NetFile::from_net(&net, true));
    }
}
