//! Mixed-area curvatures of circular nets, edgewise principal curvatures,
//! isothermicity tests and the classification of isothermic channel nets.

use nalgebra::{DMatrix, Matrix6};

use crate::channel::{lift_rank_residual, ChannelCertificate};
use crate::complex::{Label, QuadComplex};
use crate::error::{Error, Result};
use crate::legendre::LegendreNet;
use crate::lie::{gram, lift_plane, lift_point, LieVec, SignatureReport, Subspace, Vec3};
use crate::tol::Tolerances;

/// `(x∧y)(v) = (x,v)y − (y,v)x` as a matrix acting on coordinates.
pub fn wedge(x: &LieVec, y: &LieVec) -> Matrix6<f64> {
    let g = gram();
    y.0 * (x.0.transpose() * g) - x.0 * (y.0.transpose() * g)
}

/// `A(a,b) = ¼(da_ik∧db_jl + db_ik∧da_jl)` for quads indexed `(i,j,k,l)`.
pub fn mixed_area(a: &[LieVec; 4], b: &[LieVec; 4]) -> Matrix6<f64> {
    let da_ik = a[2] - a[0];
    let da_jl = a[3] - a[1];
    let db_ik = b[2] - b[0];
    let db_jl = b[3] - b[1];
    (wedge(&da_ik, &db_jl) + wedge(&db_ik, &da_jl)) * 0.25
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceCurvature {
    pub k: f64,
    pub h: f64,
    /// Relative deviation of `A(n,n)`, `A(n,f)`, `A(f,f)` from being
    /// parallel.
    pub residual: f64,
}

/// Gauss and mean curvature of a face from its point lifts `f` and
/// tangent-plane lifts `n`.
pub fn gauss_mean(f: &[LieVec; 4], n: &[LieVec; 4], tol: &Tolerances) -> Result<FaceCurvature> {
    let aff = mixed_area(f, f);
    let anf = mixed_area(n, f);
    let ann = mixed_area(n, n);
    let scale = f
        .iter()
        .map(|v| (v.spatial() - f[0].spatial()).norm_squared())
        .fold(0.0, f64::max);
    let norm = aff.norm_squared();
    if norm <= (tol.rank * scale).powi(2) {
        return Err(Error::DegenerateFace {
            face: 0,
            reason: "vanishing mixed area".into(),
        });
    }
    let k = ann.dot(&aff) / norm;
    let h = -anf.dot(&aff) / norm;
    let stacked = DMatrix::from_fn(36, 3, |r, c| match c {
        0 => aff.as_slice()[r],
        1 => anf.as_slice()[r],
        _ => ann.as_slice()[r],
    });
    let sv = crate::linalg::svd(&stacked).singular_values;
    Ok(FaceCurvature {
        k,
        h,
        residual: sv[1] / sv[0],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCurvature {
    pub kappa: f64,
    /// Sine of the angle between `dn` and `d𝔣`; zero when `dn = 0`.
    pub residual: f64,
}

/// Principal curvature of an edge from Rodrigues' equation `dn = −κ·d𝔣`.
pub fn edge_curvature(x: [Vec3; 2], n: [Vec3; 2]) -> Result<EdgeCurvature> {
    let dx = x[1] - x[0];
    let dn = n[1] - n[0];
    let lx = dx.norm_squared();
    if lx == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let kappa = -dn.dot(&dx) / lx;
    let ln = dn.norm();
    let residual = if ln == 0.0 {
        0.0
    } else {
        dn.cross(&dx).norm() / (ln * lx.sqrt())
    };
    Ok(EdgeCurvature { kappa, residual })
}

#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub faces: Vec<FaceCurvature>,
    pub edges: Vec<EdgeCurvature>,
    /// Per face: `|(κ_ij−κ_il−κ_jk+κ_kl)·H − (κ_ij·κ_kl − κ_jk·κ_li)|`
    /// relative to the size of the terms.
    pub identity_residuals: Vec<f64>,
}

impl CurvatureReport {
    pub fn max_identity_residual(&self) -> f64 {
        self.identity_residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Largest spread of κ along the lines of one family.
    pub fn kappa_spread(&self, complex: &QuadComplex, label: Label) -> f64 {
        let mut worst: f64 = 0.0;
        for line in complex.lines(label) {
            let ks: Vec<f64> = line
                .segments()
                .iter()
                .filter_map(|(a, b)| complex.edge_between(*a, *b))
                .map(|e| self.edges[e].kappa)
                .collect();
            let lo = ks.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if ks.len() > 1 {
                worst = worst.max((hi - lo) / hi.abs().max(lo.abs()).max(1.0));
            }
        }
        worst
    }
}

fn euclidean_data(net: &LegendreNet) -> Result<(Vec<Vec3>, Vec<Vec3>)> {
    let points = net.points();
    let normals = net.normals();
    let mut xs = Vec::with_capacity(points.len());
    let mut ns = Vec::with_capacity(points.len());
    for (v, (p, n)) in points.into_iter().zip(normals).enumerate() {
        match (p, n) {
            (Some(p), Some(n)) => {
                xs.push(p);
                ns.push(n);
            }
            _ => {
                return Err(Error::InsufficientData(format!(
                    "vertex {v} has no Euclidean point and normal"
                )))
            }
        }
    }
    Ok((xs, ns))
}

pub fn identity_residual(k: [f64; 4], h: f64) -> f64 {
    let [ij, jk, kl, li] = k;
    let lhs = (ij - li - jk + kl) * h;
    let rhs = ij * kl - jk * li;
    let scale = k.iter().map(|x| x.abs()).fold(h.abs(), f64::max).max(1.0);
    (lhs - rhs).abs() / (scale * scale)
}

pub fn curvature_report(net: &LegendreNet, tol: &Tolerances) -> Result<CurvatureReport> {
    let (xs, ns) = euclidean_data(net)?;
    let c = net.complex();
    let edges = c
        .edges()
        .iter()
        .map(|e| edge_curvature([xs[e.a], xs[e.b]], [ns[e.a], ns[e.b]]))
        .collect::<Result<Vec<_>>>()?;
    let mut faces = Vec::with_capacity(c.faces().len());
    let mut identity_residuals = Vec::with_capacity(c.faces().len());
    for (fid, face) in c.faces().iter().enumerate() {
        let f = face.map(|v| lift_point(&xs[v]));
        let n = face.map(|v| lift_plane(&ns[v], ns[v].dot(&xs[v])));
        let fc = gauss_mean(&f, &n, tol).map_err(|e| match e {
            Error::DegenerateFace { reason, .. } => Error::DegenerateFace { face: fid, reason },
            other => other,
        })?;
        let fe = c.face_edges(fid)?;
        identity_residuals.push(identity_residual(fe.map(|e| edges[e].kappa), fc.h));
        faces.push(fc);
    }
    Ok(CurvatureReport {
        faces,
        edges,
        identity_residuals,
    })
}

/// Outcome of a vertex test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VertexTest {
    /// Boundary vertex or vertex of degree other than 4.
    NotApplicable,
    /// The nine vertices around the vertex are cospherical.
    Inconclusive,
    Pass(f64),
    Fail(f64),
}

impl VertexTest {
    pub fn passed(&self) -> bool {
        matches!(self, VertexTest::Pass(_))
    }

    pub fn failed(&self) -> bool {
        matches!(self, VertexTest::Fail(_))
    }
}

/// Edge and diagonal neighbours of an interior vertex of degree 4.
fn neighbourhood(c: &QuadComplex, v: usize) -> Option<([usize; 4], [usize; 4])> {
    if !c.is_interior(v) || c.degree(v) != 4 {
        return None;
    }
    let mut edge_nb = Vec::with_capacity(4);
    for e in c.incident_edges(v) {
        edge_nb.push(c.edges()[*e].other(v));
    }
    let mut diag = Vec::with_capacity(4);
    let mut seen = Vec::new();
    for e in c.incident_edges(v) {
        for f in c.faces_of_edge(*e) {
            if seen.contains(f) {
                continue;
            }
            seen.push(*f);
            let face = c.faces()[*f];
            let pos = face.iter().position(|u| *u == v)?;
            diag.push(face[(pos + 2) % 4]);
        }
    }
    if diag.len() != 4 {
        return None;
    }
    Some((edge_nb.try_into().ok()?, diag.try_into().ok()?))
}

/// Five-point isothermicity test: every interior vertex is cospherical with
/// its four diagonal neighbours.
pub fn is_isothermic_5point(
    points: &[Vec3],
    complex: &QuadComplex,
    tol: &Tolerances,
) -> Vec<VertexTest> {
    (0..complex.n_vertices())
        .map(|v| {
            let Some((edge_nb, diag)) = neighbourhood(complex, v) else {
                return VertexTest::NotApplicable;
            };
            let mut nine = vec![points[v]];
            nine.extend(edge_nb.iter().map(|u| points[*u]));
            nine.extend(diag.iter().map(|u| points[*u]));
            if lift_rank_residual(&nine, 4) <= tol.spherical {
                return VertexTest::Inconclusive;
            }
            let mut five = vec![points[v]];
            five.extend(diag.iter().map(|u| points[*u]));
            let r = lift_rank_residual(&five, 4);
            if r <= tol.concircular {
                VertexTest::Pass(r)
            } else {
                VertexTest::Fail(r)
            }
        })
        .collect()
}

/// The four diagonal neighbours of every interior vertex are concircular.
pub fn diagonal_concircular(
    points: &[Vec3],
    complex: &QuadComplex,
    tol: &Tolerances,
) -> Vec<VertexTest> {
    (0..complex.n_vertices())
        .map(|v| {
            let Some((_, diag)) = neighbourhood(complex, v) else {
                return VertexTest::NotApplicable;
            };
            let four: Vec<Vec3> = diag.iter().map(|u| points[*u]).collect();
            let r = lift_rank_residual(&four, 3);
            if r <= tol.concircular {
                VertexTest::Pass(r)
            } else {
                VertexTest::Fail(r)
            }
        })
        .collect()
}

/// Summary of a vertex test over a net: `Some(true)` when every applicable
/// vertex passes, `None` when no vertex was conclusive.
pub fn summarize(tests: &[VertexTest]) -> Option<bool> {
    let conclusive: Vec<&VertexTest> = tests
        .iter()
        .filter(|t| matches!(t, VertexTest::Pass(_) | VertexTest::Fail(_)))
        .collect();
    if conclusive.is_empty() {
        None
    } else {
        Some(conclusive.iter().all(|t| t.passed()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VessiotKind {
    Revolution,
    Cylinder,
    Cone,
    None,
}

impl VessiotKind {
    pub fn name(self) -> &'static str {
        match self {
            VessiotKind::Revolution => "revolution",
            VessiotKind::Cylinder => "cylinder",
            VessiotKind::Cone => "cone",
            VessiotKind::None => "none",
        }
    }
}

impl std::fmt::Display for VessiotKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct VessiotClass {
    pub kind: VessiotKind,
    /// Span of the face-sphere vectors.
    pub witness: Subspace,
    pub signature: SignatureReport,
}

/// Möbius type of a channel net from the span of its face-spheres: a
/// (2,1)-space means all face-spheres are orthogonal to a fixed circle
/// (revolution), a spacelike 3-space that they pass through a fixed point
/// pair (cone), a degenerate 3-space that they are orthogonal to a fixed
/// sphere through a fixed point (cylinder).
pub fn vessiot_classify(cert: &ChannelCertificate, tol: &Tolerances) -> Result<VessiotClass> {
    if cert.face_spheres.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} face-spheres, at least 3 needed",
            cert.face_spheres.len()
        )));
    }
    let witness = Subspace::span_normalized(&cert.face_spheres, tol)?;
    let signature = witness.signature(tol);
    let kind = if witness.dim() != 3 {
        VessiotKind::None
    } else {
        match signature.triple() {
            (2, 1, 0) => VessiotKind::Revolution,
            (3, 0, 0) => VessiotKind::Cone,
            (2, 0, 1) => VessiotKind::Cylinder,
            _ => VessiotKind::None,
        }
    };
    Ok(VessiotClass {
        kind,
        witness,
        signature,
    })
}

#[derive(Debug, Clone)]
pub struct RibbonCmc {
    pub ribbon: usize,
    /// Principal curvatures of the transversal edges in ribbon order.
    pub kappa: Vec<f64>,
    /// `(κ_i−κ_k)·(κ_j−H)` for consecutive transversal edges `i, j, k`,
    /// with `H` the mean of the two faces at `j`.
    pub residuals: Vec<f64>,
    /// Size of the largest group of equal transversal curvatures.
    pub equal_count: usize,
    /// With constant mean curvature on the net: whether three transversal
    /// curvatures coincide, making the Lie cyclide a torus type.
    pub torus_type: Option<bool>,
}

pub fn ribbon_cmc_analysis(
    net: &LegendreNet,
    cert: &ChannelCertificate,
    report: &CurvatureReport,
    tol: &Tolerances,
) -> Vec<RibbonCmc> {
    let c = net.complex();
    let hs: Vec<f64> = report.faces.iter().map(|f| f.h).collect();
    let hmax = hs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hmin = hs.iter().copied().fold(f64::INFINITY, f64::min);
    let constant_h =
        !hs.is_empty() && hmax - hmin <= tol.spherical * hmax.abs().max(hmin.abs()).max(1.0);
    cert.ribbons
        .iter()
        .enumerate()
        .map(|(rid, r)| {
            let edges: Vec<usize> = r
                .rungs
                .iter()
                .filter_map(|(p, q)| c.edge_between(*p, *q))
                .collect();
            let kappa: Vec<f64> = edges.iter().map(|e| report.edges[*e].kappa).collect();
            let m = kappa.len();
            let triples = if r.closed { m } else { m.saturating_sub(2) };
            let residuals = (0..triples)
                .map(|s| {
                    let (i, j, k) = (s, (s + 1) % m, (s + 2) % m);
                    let faces: Vec<usize> = c
                        .faces_of_edge(edges[j])
                        .iter()
                        .copied()
                        .filter(|f| r.faces.contains(f))
                        .collect();
                    let h = faces.iter().map(|f| hs[*f]).sum::<f64>() / faces.len().max(1) as f64;
                    (kappa[i] - kappa[k]) * (kappa[j] - h)
                })
                .collect();
            let equal_count = (0..m)
                .map(|a| {
                    let scale = kappa[a].abs().max(1.0);
                    kappa
                        .iter()
                        .filter(|b| (*b - kappa[a]).abs() <= tol.spherical * scale)
                        .count()
                })
                .max()
                .unwrap_or(0);
            RibbonCmc {
                ribbon: rid,
                kappa,
                residuals,
                equal_count,
                torus_type: constant_h.then_some(equal_count >= 3),
            }
        })
        .collect()
}
