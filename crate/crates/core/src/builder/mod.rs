//! Synthesis of channel nets: from regular sphere curves, by blending a
//! Ribaucour pair of curves, and reference generators.

pub mod blend;
pub mod generators;
pub mod sphere_curve;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::lie::{inner, LieVec, Subspace};
use crate::tol::Tolerances;

pub use blend::{blend_channel, prepare_blend, BlendResult, BlendSetup};
pub use generators::{
    make_cone, make_cylinder, make_dupin_torus, make_reflection_example, make_revolution,
};
pub use sphere_curve::{
    channel_from_sphere_curve, validate_sphere_curve, SphereCurve, SphereCurveBuild,
};

/// `π(τ) = τ − (τ,s_j)/(s_i,s_j)·s_i`: moves `τ` along `s_i` until it is
/// orthogonal to `s_j`.
pub fn pi_project(tau: &LieVec, si: &LieVec, sj: &LieVec) -> LieVec {
    *tau - *si * (inner(tau, sj) / inner(si, sj))
}

/// Image of a subspace under [`pi_project`].
pub fn pi_subspace(c: &Subspace, si: &LieVec, sj: &LieVec, tol: &Tolerances) -> Result<Subspace> {
    let image: Vec<LieVec> = c.basis().iter().map(|t| pi_project(t, si, sj)).collect();
    Subspace::span_normalized(&image, tol)
}

/// Orthonormal frame `(q, p₁, p₂)` of a circle's point-sphere space with
/// `(q,q) = −1`; the null directions `q + cos θ·p₁ + sin θ·p₂` run once
/// around the circle. For finite circles `q` is the projection of `e∞`,
/// which makes `θ` the Euclidean angle.
#[derive(Debug, Clone, Copy)]
pub struct CircleFrame {
    pub q: LieVec,
    pub p: [LieVec; 2],
}

impl CircleFrame {
    pub fn new(c: &Subspace, tol: &Tolerances) -> Result<Self> {
        let degenerate = || Error::InvalidParameter("circle space is not a (2,1)-plane".into());
        if c.dim() != 3 || !c.signature(tol).is(2, 1, 0) {
            return Err(degenerate());
        }
        let q0 = c.project_onto(&LieVec::einf(), tol)?;
        let frame = if q0.norm_sq() < -tol.signature * q0.aux_norm().powi(2) {
            let q = q0 / (-q0.norm_sq()).sqrt();
            let qspan = Subspace::span(&[q], tol)?;
            let rest = qspan.orthocomplement().intersection(c, tol);
            let p = rest.gram_orthonormal_basis(tol)?;
            if p.len() != 2 {
                return Err(degenerate());
            }
            (q, [p[0], p[1]])
        } else {
            let b = c.gram_orthonormal_basis(tol)?;
            (b[2], [b[0], b[1]])
        };
        let (mut q, p) = frame;
        if q.u0() < 0.0 || (q.u0() == 0.0 && q.aux_dot(&LieVec::einf()) < 0.0) {
            q = -q;
        }
        Ok(Self { q, p })
    }

    pub fn point(&self, theta: f64) -> LieVec {
        self.q + self.p[0] * theta.cos() + self.p[1] * theta.sin()
    }

    /// Angle of a point sphere of the circle.
    pub fn angle(&self, x: &LieVec) -> f64 {
        let sign = -inner(x, &self.q).signum();
        let a = inner(x, &self.p[0]) * sign;
        let b = inner(x, &self.p[1]) * sign;
        b.atan2(a).rem_euclid(TAU)
    }
}

/// Point on the next circle touching the transversal curvature sphere
/// `X⁻ = π(X)`, with the relative discriminant of the tangency condition.
pub fn propagate_point(
    x: &LieVec,
    si: &LieVec,
    sj: &LieVec,
    next: &Subspace,
    tol: &Tolerances,
) -> Result<(LieVec, LieVec, f64)> {
    let xm = pi_project(x, si, sj).aux_normalized();
    let plane = Subspace::span(&[xm], tol)?
        .orthocomplement()
        .intersection(next, tol);
    if plane.dim() != 2 {
        return Err(Error::InvalidParameter(format!(
            "tangency plane has dimension {}",
            plane.dim()
        )));
    }
    let g = plane.gram_matrix();
    let disc = (g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)]).abs() / g.norm_squared().max(1e-300);
    let eig = nalgebra::SymmetricEigen::new(g);
    let k = if eig.eigenvalues[0].abs() <= eig.eigenvalues[1].abs() {
        0
    } else {
        1
    };
    let col = eig.eigenvectors.column(k);
    let b = plane.basis();
    let mut y = b[0] * col[0] + b[1] * col[1];
    if y.u0().abs() > tol.rank * y.aux_norm() {
        y = y / y.u0();
    }
    Ok((y, xm, disc))
}
