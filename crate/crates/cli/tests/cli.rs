use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use liechannel::builder::blend::parallel_lines;
use liechannel::builder::sphere_curve::random_sphere_curve;
use liechannel::io::{self, SphereCurveFile};
use liechannel::Tolerances;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_liechannel"));
    c.env_remove("LIECHANNEL_TOL");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", s(&path)]);
    let out = run(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn torus_verifies_in_both_directions() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate(
        dir.path(),
        "t.json",
        &["dupin-torus", "--m", "10", "--n", "8"],
    );
    let out = run(&["verify", "--in", s(&net)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["class"], "both-directions");
    assert_eq!(v["dupin"], true);
    assert_eq!(v["vertices"], 80);
    for d in ["+", "-"] {
        assert_eq!(v["directions"][d]["channel"], true);
        assert!(v["directions"][d]["failure"].is_null());
        assert!(v["directions"][d]["lie-cyclide-spread"].as_f64().unwrap() <= 1e-8);
    }
}

#[test]
fn single_direction_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate(dir.path(), "r.json", &["revolution", "--seed", "3"]);
    let report = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--in",
        s(&net),
        "--direction",
        "-",
        "--report",
        s(&report),
    ]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    let v: Value = io::read_json(&report).unwrap();
    assert_eq!(v["class"], "none");
    assert_eq!(v["directions"]["-"]["failure"]["check"], "constancy");
    assert!(v["directions"].get("+").is_none());
    let out = run(&["verify", "--in", s(&net), "--direction", "+"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["directions"]["+"]["vessiot"], "revolution");
}

#[test]
fn example3_fails_constancy() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate(dir.path(), "e3.json", &["example3"]);
    let out = run(&["verify", "--in", s(&net), "--direction", "+"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["directions"]["+"]["channel"], false);
    assert_eq!(v["directions"]["+"]["envelopes-spheres"], false);
    assert_eq!(v["directions"]["+"]["failure"]["check"], "constancy");
}

#[test]
fn classify_generators() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["revolution", "cylinder", "cone"] {
        let net = generate(dir.path(), &format!("{kind}.json"), &[kind, "--seed", "7"]);
        let out = run(&["classify", "--in", s(&net)]);
        assert_eq!(code(&out), 0);
        assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), kind);
    }
    let net = generate(dir.path(), "e3.json", &["example3"]);
    assert_eq!(code(&run(&["classify", "--in", s(&net)])), 1);
}

#[test]
fn curvature_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate(dir.path(), "c.json", &["cylinder", "--m", "6", "--n", "5"]);
    let out = run(&["curvature", "--in", s(&net)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let faces = v["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 20);
    for f in faces {
        assert!(f["K"].as_f64().unwrap().abs() <= 1e-8);
        assert!(
            f["H"].is_number() && f["residual"].is_number() && f["identity-residual"].is_number()
        );
    }
    assert_eq!(v["edges"].as_array().unwrap().len(), 5 * 5 + 6 * 4);
    assert!(v["edges"][0]["label"].is_string());
    assert!(v["max-identity-residual"].as_f64().unwrap() <= 1e-7);
    assert!(v["kappa-spread"]["+"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["ribbons"].as_array().unwrap().len(), 4);
}

#[test]
fn export_obj_counts() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate(
        dir.path(),
        "t.json",
        &["dupin-torus", "--m", "12", "--n", "6"],
    );
    let obj = dir.path().join("t.obj");
    assert_eq!(
        code(&run(&["export", "--in", s(&net), "--obj", s(&obj)])),
        0
    );
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 72);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 60);
    assert_eq!(
        code(&run(&[
            "export",
            "--in",
            s(&net),
            "--obj",
            s(&obj),
            "--circles"
        ])),
        0
    );
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("v ")).count(),
        72 + 6 * 64
    );
    assert_eq!(text.lines().filter(|l| l.starts_with("l ")).count(), 6);
}

#[test]
fn build_from_sphere_curve() {
    let t = Tolerances::default();
    let dir = tempfile::tempdir().unwrap();
    let spheres = dir.path().join("s.json");
    let curve = random_sphere_curve(2, 6, &t).unwrap();
    io::write_json(&spheres, &SphereCurveFile::from_curve(&curve, &t).unwrap()).unwrap();
    let net = dir.path().join("n.json");
    let out = run(&[
        "build",
        "--spheres",
        s(&spheres),
        "--samples",
        "12",
        "--phase",
        "-0.4",
        "--out",
        s(&net),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify", "--in", s(&net), "--direction", "+"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["vertices"], 72);
}

#[test]
fn blend_parallel_lines() {
    let dir = tempfile::tempdir().unwrap();
    let (c1, c2, _) = parallel_lines(5, 0.4, 0.6).unwrap();
    let (p1, p2) = (dir.path().join("c1.json"), dir.path().join("c2.json"));
    io::write_json(&p1, &c1).unwrap();
    io::write_json(&p2, &c2).unwrap();
    let contact = format!("0,{},{}", -0.6f64.cos(), 0.6f64.sin());
    let out_net = dir.path().join("b.json");
    for extra in [&["--through-infinity"][..], &["--t0", "-0.3"][..]] {
        let mut args = vec![
            "blend",
            "--c1",
            s(&p1),
            "--c2",
            s(&p2),
            "--contact",
            &contact,
            "--extra",
            "4",
        ];
        args.extend_from_slice(extra);
        args.extend_from_slice(&["--out", s(&out_net)]);
        let out = run(&args);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&run(&["verify", "--in", s(&out_net), "--direction", "+"]));
        assert_eq!(v["directions"]["+"]["channel"], true);
        assert_eq!(v["vertices"], 30);
    }
    let out = run(&[
        "blend",
        "--c1",
        s(&p1),
        "--c2",
        s(&p2),
        "--contact",
        "0,0,2",
        "--out",
        s(&out_net),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["generate", "revolution", "--m", "2"])), 2);
    let net = generate(dir.path(), "r.json", &["revolution"]);
    let text = std::fs::read_to_string(&net).unwrap();
    std::fs::write(&net, &text[..text.len() - 20]).unwrap();
    assert_eq!(code(&run(&["verify", "--in", s(&net)])), 2);
    assert_eq!(
        code(&run(&["verify", "--in", s(&dir.path().join("none.json"))])),
        2
    );
    assert_eq!(
        code(&run(&["verify", "--in", s(&net), "--direction", "x"])),
        2
    );
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn tolerance_environment() {
    let dir = tempfile::tempdir().unwrap();
    let net = generate(dir.path(), "t.json", &["dupin-torus"]);
    let out = bin()
        .args(["verify", "--in", s(&net)])
        .env("LIECHANNEL_TOL", "residual=1e-7")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let out = bin()
        .args(["verify", "--in", s(&net)])
        .env("LIECHANNEL_TOL", "residual")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let e3 = generate(dir.path(), "e3.json", &["example3"]);
    let loose = "constancy=1";
    let out = bin()
        .args(["verify", "--in", s(&e3), "--direction", "+"])
        .env("LIECHANNEL_TOL", loose)
        .output()
        .unwrap();
    let v = json(&out);
    assert_ne!(v["directions"]["+"]["failure"]["check"], "constancy");
}

#[test]
fn generate_to_stdout() {
    let out = run(&["generate", "cone", "--m", "4", "--n", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 12);
    assert_eq!(v["complex"]["n_plus"], 4);
}
