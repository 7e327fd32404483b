//! Numerical tolerances shared by the kernel.
//!
//! Every threshold is relative to the auxiliary Euclidean norm of the
//! coordinates involved, so the tests are insensitive to the projective
//! scale of homogeneous vectors.

use std::env;

use crate::error::Error;

/// Name of the environment variable read by [`Tolerances::from_env`].
pub const TOLERANCE_ENV: &str = "LIECHANNEL_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Orthogonality of light-cone vectors (oriented contact, nullity).
    pub contact: f64,
    /// Relative singular value cutoff for Euclidean rank decisions.
    pub rank: f64,
    /// Relative eigenvalue cutoff for counting null directions of a Gram form.
    pub signature: f64,
    /// Membership and agreement residuals (subspace containment, certificate checks).
    pub residual: f64,
    /// Projective distance below which two homogeneous vectors are equal.
    pub constancy: f64,
    /// Rank cutoff for concircularity of four points.
    pub concircular: f64,
    /// Smallest-to-largest singular value cutoff of the nine-point sphere test.
    pub spherical: f64,
    /// Relative discriminant bound for tangency (double root) conditions.
    pub discriminant: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            contact: 1e-9,
            rank: 1e-8,
            signature: 1e-8,
            residual: 1e-8,
            constancy: 1e-9,
            concircular: 1e-8,
            spherical: 1e-6,
            discriminant: 1e-7,
        }
    }
}

impl Tolerances {
    /// Defaults overridden by `LIECHANNEL_TOL`, when set.
    ///
    /// The variable holds comma separated `key=value` pairs using the field
    /// names of this struct, e.g. `contact=1e-10,residual=1e-7`.
    pub fn from_env() -> Result<Self, Error> {
        match env::var(TOLERANCE_ENV) {
            Ok(spec) => Self::default().with_overrides(&spec),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn with_overrides(mut self, spec: &str) -> Result<Self, Error> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidTolerance(item.to_string()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidTolerance(item.to_string()))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTolerance(item.to_string()));
            }
            let slot = match key.trim() {
                "contact" => &mut self.contact,
                "rank" => &mut self.rank,
                "signature" => &mut self.signature,
                "residual" => &mut self.residual,
                "constancy" => &mut self.constancy,
                "concircular" => &mut self.concircular,
                "spherical" => &mut self.spherical,
                "discriminant" => &mut self.discriminant,
                _ => return Err(Error::InvalidTolerance(item.to_string())),
            };
            *slot = value;
        }
        Ok(self)
    }
}
