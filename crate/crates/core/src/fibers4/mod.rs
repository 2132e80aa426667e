//! Explicit regular fibers of the moment maps for n = 4.
//!
//! The fiber over `Q = (1/3, 5/9, 5/9, 5/9)` in CP^5 is a 7-manifold
//! parametrized by `S^5 x T^2`; its intersection with the Plücker quadric is
//! the 5-dimensional fiber of the Grassmann moment map. Points over the second
//! chamber orbit, represented by `(2/3, 4/9, 4/9, 4/9)`, are obtained through
//! the coordinate involution `z0 <-> z3, z1 <-> z4, z2 <-> z5`, selected by
//! [`ChamberOrbit`].
//!
//! All fiber points use the representative with `|z0|^2 + |z1|^2 + |z2|^2 = 1/3`,
//! total norm one and `z3` real and positive (in base coordinates).

mod bundle;
mod certificate;
mod intersection;
mod mq5;
mod mq7;
mod triangle;

pub use bundle::{bundle_transition, verify_chart_coverage, ChartCoverage, TransitionDirection, TransitionMatrix};
pub use certificate::{certify, sample_certificates, FiberCertificate, FiberKind, FiberSummary, Residuals};
pub use intersection::{
    chart_point, complete_intersection_f, fd_jacobian, jacobian, jacobian_rank, mq5_tangent_dimension,
    mq7_tangent_dimension, Jacobian,
};
pub use mq5::{
    f_param, f_preimage, g_map, g_param, g_preimage, hopf_q, m2_sample, m3_circle, m3_sample, mq5_fiber_circles,
    proj_p, random_m2, random_mq5_via_f, random_mq5_via_g, FiberCircle, M2Point, M3Point, MQ5Point,
};
pub use mq7::{h_param, h_preimage, lift_f, mq7_magnitudes, random_mq7, random_sphere_point, MQ7Point, SpherePoint};
pub use triangle::{curve_pprime_residual, phase_closure_residual, solve_triangle_p, TriangleEdge, TriangleP};

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exactgeom::{q, RationalVector};

/// Which S4-orbit of chambers the regular value comes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChamberOrbit {
    /// Orbit of `x1 + x_i < 1`, regular value `(1/3, 5/9, 5/9, 5/9)`.
    #[default]
    Minus,
    /// Orbit of `x1 + x_i > 1`, regular value `(2/3, 4/9, 4/9, 4/9)`.
    Plus,
}

impl ChamberOrbit {
    /// The regular value `Q` of this orbit.
    pub fn q(self) -> RationalVector {
        match self {
            ChamberOrbit::Minus => RationalVector::new(vec![q(1, 3), q(5, 9), q(5, 9), q(5, 9)]),
            ChamberOrbit::Plus => RationalVector::new(vec![q(2, 3), q(4, 9), q(4, 9), q(4, 9)]),
        }
    }

    pub fn q_f64(self) -> Vec<f64> {
        self.q().to_f64()
    }

    /// Maps base coordinates to coordinates of this orbit. The involution is
    /// its own inverse, so the same map also reads base coordinates back.
    pub fn apply(self, z: &[Complex64; 6]) -> [Complex64; 6] {
        match self {
            ChamberOrbit::Minus => *z,
            ChamberOrbit::Plus => [z[3], z[4], z[5], z[0], z[1], z[2]],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ChamberOrbit::Minus => "C-",
            ChamberOrbit::Plus => "C+",
        }
    }
}

impl std::str::FromStr for ChamberOrbit {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minus" | "C-" | "-" => Ok(ChamberOrbit::Minus),
            "plus" | "C+" | "+" => Ok(ChamberOrbit::Plus),
            other => Err(crate::error::Error::Parse(format!("unknown chamber orbit {other:?}"))),
        }
    }
}

/// A torus element: unit complex phases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusElement(#[serde(with = "crate::plucker::complex_serde")] Vec<Complex64>);

impl TorusElement {
    /// Accepts phases of modulus one within `1e-12`.
    pub fn new(phases: Vec<Complex64>) -> Result<Self> {
        if let Some(bad) = phases.iter().find(|t| (t.norm() - 1.0).abs() > 1e-12) {
            return Err(domain(format!("torus component {bad} is not of modulus one")));
        }
        Ok(TorusElement(phases))
    }

    pub fn identity(k: usize) -> Self {
        TorusElement(vec![Complex64::new(1.0, 0.0); k])
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        TorusElement(angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Self {
        TorusElement((0..k).map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..TAU))).collect())
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_diff(&self, other: &TorusElement) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Unit phase of a nonzero complex number.
pub(crate) fn phase(z: Complex64) -> Complex64 {
    z / z.norm()
}

pub(crate) fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `sqrt(|z|^2 + 1/9)`.
pub(crate) fn shifted_modulus(z: Complex64) -> f64 {
    (z.norm_sqr() + 1.0 / 9.0).sqrt()
}

pub(crate) fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
