//! JSON net, sphere-curve and curve files; OBJ export.

use std::fmt::Write as _;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::builder::sphere_curve::SphereCurve;
use crate::builder::CircleFrame;
use crate::channel::{mobius_sphere, ChannelCertificate, DiscreteCurve3D};
use crate::complex::{Edge, Label, QuadComplex};
use crate::error::{Error, Result};
use crate::legendre::{ContactElement, LegendreNet};
use crate::lie::{LieSphere, LieVec, Vec3};
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Grid {
        n_plus: usize,
        n_minus: usize,
        #[serde(default)]
        wrap_plus: bool,
    },
    Cells {
        n_vertices: usize,
        edges: Vec<(usize, usize, String)>,
        faces: Vec<[usize; 4]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexSpec {
    Euclidean { point: [f64; 3], normal: [f64; 3] },
    Hexaspherical { contact: [[f64; 6]; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetFile {
    pub complex: ComplexSpec,
    pub vertices: Vec<VertexSpec>,
}

impl ComplexSpec {
    pub fn from_complex(c: &QuadComplex) -> Self {
        if let Some(g) = c.grid_shape() {
            return ComplexSpec::Grid {
                n_plus: g.n_plus,
                n_minus: g.n_minus,
                wrap_plus: g.wrap_plus,
            };
        }
        ComplexSpec::Cells {
            n_vertices: c.n_vertices(),
            edges: c
                .edges()
                .iter()
                .map(|e| (e.a, e.b, e.label.symbol().to_string()))
                .collect(),
            faces: c.faces().to_vec(),
        }
    }

    pub fn to_complex(&self) -> Result<QuadComplex> {
        match self {
            ComplexSpec::Grid {
                n_plus,
                n_minus,
                wrap_plus,
            } => QuadComplex::grid(*n_plus, *n_minus, *wrap_plus),
            ComplexSpec::Cells {
                n_vertices,
                edges,
                faces,
            } => {
                let edges = edges
                    .iter()
                    .map(|(a, b, l)| {
                        let label: Label = l
                            .parse()
                            .map_err(|_| Error::Malformed(format!("edge label `{l}`")))?;
                        Ok(Edge {
                            a: *a,
                            b: *b,
                            label,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                QuadComplex::new(*n_vertices, edges, faces.clone())
            }
        }
    }
}

impl NetFile {
    /// Euclidean vertices where the contact element has a finite point and
    /// a normal, hexaspherical ones elsewhere or when `hexaspherical` is set.
    pub fn from_net(net: &LegendreNet, hexaspherical: bool) -> Self {
        let vertices = net
            .contacts()
            .iter()
            .map(|f| match (f.euclidean_point(), f.normal()) {
                (Some(p), Some(n)) if !hexaspherical => VertexSpec::Euclidean {
                    point: p.into(),
                    normal: n.into(),
                },
                _ => {
                    let [a, b] = f.generators();
                    VertexSpec::Hexaspherical {
                        contact: [a.to_array(), b.to_array()],
                    }
                }
            })
            .collect();
        NetFile {
            complex: ComplexSpec::from_complex(net.complex()),
            vertices,
        }
    }

    pub fn to_net(&self, tol: &Tolerances) -> Result<LegendreNet> {
        let complex = self.complex.to_complex()?;
        if self.vertices.len() != complex.n_vertices() {
            return Err(Error::Malformed(format!(
                "{} vertices given, the complex has {}",
                self.vertices.len(),
                complex.n_vertices()
            )));
        }
        let contacts = self
            .vertices
            .iter()
            .enumerate()
            .map(|(v, spec)| {
                let res = match spec {
                    VertexSpec::Euclidean { point, normal } => {
                        ContactElement::from_point_normal(&Vec3::from(*point), &Vec3::from(*normal))
                    }
                    VertexSpec::Hexaspherical { contact } => ContactElement::from_vectors(
                        &LieVec::from_array(contact[0]),
                        &LieVec::from_array(contact[1]),
                        tol,
                    ),
                };
                res.map_err(|e| Error::Malformed(format!("vertex {v}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        LegendreNet::new(complex, contacts, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SphereSpec {
    Sphere { center: [f64; 3], radius: f64 },
    Plane { normal: [f64; 3], offset: f64 },
}

impl SphereSpec {
    pub fn to_sphere(&self) -> Result<LieSphere> {
        match self {
            SphereSpec::Sphere { radius, .. } if *radius == 0.0 => {
                Err(Error::Malformed("sphere of radius 0".into()))
            }
            SphereSpec::Sphere { center, radius } => Ok(LieSphere::Sphere {
                center: Vec3::from(*center),
                radius: *radius,
            }),
            SphereSpec::Plane { normal, offset } => {
                let n = Vec3::from(*normal);
                if ((n.norm() - 1.0).abs()) > 1e-9 {
                    return Err(Error::NonUnitNormal(n.norm()));
                }
                Ok(LieSphere::Plane {
                    normal: n,
                    offset: *offset,
                })
            }
        }
    }

    pub fn from_sphere(s: &LieSphere) -> Option<Self> {
        match s {
            LieSphere::Sphere { center, radius } => Some(SphereSpec::Sphere {
                center: (*center).into(),
                radius: *radius,
            }),
            LieSphere::Plane { normal, offset } => Some(SphereSpec::Plane {
                normal: (*normal).into(),
                offset: *offset,
            }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereCurveFile {
    pub vertices: Vec<SphereSpec>,
    pub edges: Vec<SphereSpec>,
    #[serde(default)]
    pub closed: bool,
}

impl SphereCurveFile {
    pub fn from_curve(curve: &SphereCurve, tol: &Tolerances) -> Result<Self> {
        let conv = |m: &LieVec| -> Result<SphereSpec> {
            SphereSpec::from_sphere(&mobius_sphere(m, tol)?)
                .ok_or_else(|| Error::InvalidSphereCurve("point sphere".into()))
        };
        Ok(SphereCurveFile {
            vertices: curve.spheres.iter().map(conv).collect::<Result<_>>()?,
            edges: curve.face_spheres.iter().map(conv).collect::<Result<_>>()?,
            closed: curve.closed,
        })
    }

    pub fn to_curve(&self, tol: &Tolerances) -> Result<SphereCurve> {
        let s = self
            .vertices
            .iter()
            .map(SphereSpec::to_sphere)
            .collect::<Result<Vec<_>>>()?;
        let e = self
            .edges
            .iter()
            .map(SphereSpec::to_sphere)
            .collect::<Result<Vec<_>>>()?;
        SphereCurve::from_euclidean(&s, &e, self.closed, tol)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_net(path: &Path, tol: &Tolerances) -> Result<LegendreNet> {
    read_json::<NetFile>(path)?.to_net(tol)
}

pub fn save_net(path: &Path, net: &LegendreNet) -> Result<()> {
    write_json(path, &NetFile::from_net(net, false))
}

pub fn load_sphere_curve(path: &Path, tol: &Tolerances) -> Result<SphereCurve> {
    read_json::<SphereCurveFile>(path)?.to_curve(tol)
}

pub fn load_curve(path: &Path) -> Result<DiscreteCurve3D> {
    let c: DiscreteCurve3D = read_json(path)?;
    DiscreteCurve3D::new(c.vertices(), c.closed)
}

/// OBJ coordinates are y-up: `(x, y, z) ↦ (x, z, −y)`.
fn obj_vertex(out: &mut String, p: &Vec3) {
    let _ = writeln!(out, "v {} {} {}", p.x, p.z, -p.y);
}

/// Points of a generating circle, `samples` per turn; points at infinity
/// of straight lines are dropped.
pub fn circle_polyline(
    circle: &crate::lie::Subspace,
    samples: usize,
    tol: &Tolerances,
) -> Result<Vec<Vec3>> {
    let frame = CircleFrame::new(circle, tol)?;
    let mut pts = Vec::with_capacity(samples);
    for k in 0..samples {
        let x = frame.point(std::f64::consts::TAU * k as f64 / samples as f64);
        if x.u0().abs() > tol.rank * x.aux_norm() {
            pts.push(x.spatial() / x.u0());
        }
    }
    Ok(pts)
}

/// Wavefront OBJ text of the net's vertices and quads, optionally with the
/// generating circles of a certificate as polylines.
pub fn to_obj(
    net: &LegendreNet,
    circles: Option<&ChannelCertificate>,
    tol: &Tolerances,
) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "o net");
    for (v, p) in net.points().iter().enumerate() {
        let p = p.ok_or_else(|| Error::InsufficientData(format!("vertex {v} is at infinity")))?;
        obj_vertex(&mut out, &p);
    }
    for f in net.complex().faces() {
        let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    if let Some(cert) = circles {
        let mut next = net.complex().n_vertices() + 1;
        for (i, c) in cert.circles.iter().enumerate() {
            let pts = circle_polyline(&c.plus, 64, tol)?;
            let _ = writeln!(out, "o circle_{i}");
            for p in &pts {
                obj_vertex(&mut out, p);
            }
            let mut line = String::from("l");
            for k in 0..pts.len() {
                let _ = write!(line, " {}", next + k);
            }
            if pts.len() == 64 {
                let _ = write!(line, " {next}");
            }
            let _ = writeln!(out, "{line}");
            next += pts.len();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::generators::{make_dupin_torus, random_revolution};
    use crate::channel::certify;

    #[test]
    fn net_round_trip() {
        let t = Tolerances::default();
        let net = random_revolution(3, 6, 5, &t).unwrap();
        for hexa in [false, true] {
            let text = serde_json::to_string(&NetFile::from_net(&net, hexa)).unwrap();
            let back: NetFile = serde_json::from_str(&text).unwrap();
            let net2 = back.to_net(&t).unwrap();
            for (a, b) in net.contacts().iter().zip(net2.contacts()) {
                assert!(a.subspace().distance(&b.subspace()) < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_cells_round_trip() {
        let t = Tolerances::default();
        let net = make_dupin_torus(2.0, 1.0, 4, 3, &t).unwrap();
        let mut file = NetFile::from_net(&net, false);
        let c = net.complex();
        file.complex = ComplexSpec::Cells {
            n_vertices: c.n_vertices(),
            edges: c
                .edges()
                .iter()
                .map(|e| (e.a, e.b, e.label.symbol().into()))
                .collect(),
            faces: c.faces().to_vec(),
        };
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"+\""));
        let net2 = serde_json::from_str::<NetFile>(&text)
            .unwrap()
            .to_net(&t)
            .unwrap();
        assert_eq!(net2.complex().faces(), c.faces());
    }

    #[test]
    fn malformed_rejected() {
        let t = Tolerances::default();
        assert!(serde_json::from_str::<NetFile>("{\"complex\": {\"n_plus\": 2}}").is_err());
        let file = NetFile {
            complex: ComplexSpec::Grid {
                n_plus: 2,
                n_minus: 2,
                wrap_plus: false,
            },
            vertices: vec![
                VertexSpec::Euclidean {
                    point: [0.0; 3],
                    normal: [0.0, 0.0, 2.0]
                };
                4
            ],
        };
        assert!(matches!(file.to_net(&t), Err(Error::Malformed(_))));
    }

    #[test]
    fn obj_counts() {
        let t = Tolerances::default();
        let net = make_dupin_torus(2.0, 1.0, 16, 16, &t).unwrap();
        let cert = certify(&net, Label::Plus, &t).unwrap();
        let plain = to_obj(&net, None, &t).unwrap();
        assert_eq!(plain.lines().filter(|l| l.starts_with("v ")).count(), 256);
        assert_eq!(
            plain.lines().filter(|l| l.starts_with("f ")).count(),
            16 * 15
        );
        let with = to_obj(&net, Some(&cert), &t).unwrap();
        assert_eq!(
            with.lines().filter(|l| l.starts_with("v ")).count(),
            256 + 64 * 16
        );
        assert_eq!(
            with.lines().filter(|l| l.starts_with("o circle_")).count(),
            16
        );
        let first = plain.lines().find(|l| l.starts_with("v ")).unwrap();
        let p = net.points()[0].unwrap();
        assert_eq!(first, format!("v {} {} {}", p.x, p.z, -p.y));
    }

    #[test]
    fn sphere_curve_file_round_trip() {
        let t = Tolerances::default();
        let c = crate::builder::sphere_curve::random_sphere_curve(2, 5, &t).unwrap();
        let f = SphereCurveFile::from_curve(&c, &t).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back = serde_json::from_str::<SphereCurveFile>(&text)
            .unwrap()
            .to_curve(&t)
            .unwrap();
        for (a, b) in c.spheres.iter().zip(&back.spheres) {
            assert!((*a - *b).aux_norm() < 1e-12);
        }
    }
}
