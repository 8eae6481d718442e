use crate::error::{invalid, Error, Result};
use crate::geometry::{Cuboid, Point, Space};

use super::boundary::BoundaryCondition;

/// Fugacity, dimension, domain and boundary condition of one model instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub space: Space,
    pub lambda: f64,
    pub domain: Cuboid,
    pub tau: BoundaryCondition,
    interior: Option<Cuboid>,
}

impl ModelParams {
    pub fn new(lambda: f64, domain: Cuboid, tau: BoundaryCondition) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(invalid("lambda", "must be finite and non-negative"));
        }
        let space = Space::new(domain.dim())?;
        for b in &tau.balls {
            if b.center.dim() != domain.dim() {
                return Err(Error::DimensionMismatch {
                    expected: domain.dim(),
                    found: b.center.dim(),
                });
            }
            if !(b.radius >= 0.0 && b.center.is_finite()) {
                return Err(invalid("tau", "balls need finite centres and radii"));
            }
        }
        let interior = space.interior(&domain);
        Ok(ModelParams {
            space,
            lambda,
            domain,
            tau,
            interior,
        })
    }

    /// Free boundary conditions on the cube `[0, side]^d`.
    pub fn cube(d: usize, side: f64, lambda: f64) -> Result<Self> {
        ModelParams::new(lambda, Cuboid::cube(d, side)?, BoundaryCondition::free())
    }

    pub fn with_tau(&self, tau: BoundaryCondition) -> Result<Self> {
        ModelParams::new(self.lambda, self.domain.clone(), tau)
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        ModelParams::new(lambda, self.domain.clone(), self.tau.clone())
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.space.d
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.space.r
    }

    /// Volume `n = |Lambda|`.
    #[inline]
    pub fn n(&self) -> f64 {
        self.domain.volume()
    }

    #[inline]
    pub fn interior(&self) -> Option<&Cuboid> {
        self.interior.as_ref()
    }

    pub fn interior_volume(&self) -> f64 {
        self.interior.as_ref().map_or(0.0, Cuboid::volume)
    }

    /// `x` is a legal centre location ignoring other centres:
    /// `x in Lambda_Int \ tau`.
    #[inline]
    pub fn admissible(&self, x: &Point) -> bool {
        match &self.interior {
            Some(i) => i.contains(x) && !self.tau.contains(x, i),
            None => false,
        }
    }

    pub(crate) fn check_point(&self, x: &Point) -> Result<()> {
        if x.dim() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: x.dim(),
            });
        }
        Ok(())
    }
}
