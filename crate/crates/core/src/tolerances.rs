//! Numerical thresholds used across the crate.
//!
//! Constructive identities (a handful of flops between input and residual)
//! are held to 1e-10 or tighter. Identities that run through long pipelines
//! (chart coordinates, quadratic forms of ratios) get 1e-9. Numerical rank
//! decisions use a relative singular-value cut.

/// Rank certificate for a 2 x n matrix, relative to the largest entry squared.
pub const GRASSMANN_RANK: f64 = 1e-12;

/// Algebraic identities that hold on the nose (Plücker relation on the image).
pub const IDENTITY: f64 = 1e-12;

/// Constructive fiber identities: moment closure, quadric closure, round trips.
pub const FIBER: f64 = 1e-10;

/// Identities derived through chart coordinates.
pub const DERIVED: f64 = 1e-9;

/// Relative singular-value threshold for Jacobian and tangent-space ranks.
pub const SVD_RANK: f64 = 1e-6;

/// Step for the central finite-difference Jacobian oracle.
pub const FD_STEP: f64 = 1e-6;

/// Allowed deviation between analytic and finite-difference Jacobians.
pub const FD_AGREEMENT: f64 = 1e-6;

/// Relative cut below which a coordinate counts as zero when choosing the
/// canonical phase of a projective point.
pub const ZERO_COORD: f64 = 1e-12;

/// Modulus below which a Plücker coordinate counts as vanishing in chart checks.
pub const CHART_ZERO: f64 = 1e-10;

/// Lower bound on |z3|, |z4|, |z5| over a regular fiber in the total-norm-one
/// normalization (the exact infimum is 1/3).
pub const FIBER_COORD_FLOOR: f64 = 0.33;

/// Default seed for every sampler and randomized search.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Default sample count for fiber sweeps.
pub const DEFAULT_SAMPLES: usize = 1000;
