//! The moment maps of the torus actions on CP^N and G(n,2), and the linear
//! map `A` that sends the standard simplex onto the hypersimplex.
//!
//! `mu_tilde = A . mu_hat` on CP^N and `mu = mu_tilde . p` on G(n,2).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exactgeom::{Rational, RationalVector};
use crate::plucker::{n_from_coord_count, pair_count, pairs, plucker_embed, GrassmannPoint, ProjectivePoint};

/// Weight `Lambda_I` of the second exterior power: ones at the pair `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector {
    pub n: usize,
    /// 0-based pair `(i, j)`, `i < j`.
    pub pair: (usize, usize),
}

impl WeightVector {
    pub fn entries(&self) -> Vec<i64> {
        (0..self.n)
            .map(|k| i64::from(k == self.pair.0 || k == self.pair.1))
            .collect()
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector::new(self.entries().into_iter().map(Rational::from).collect())
    }

    /// 1-based label such as `12`.
    pub fn label(&self) -> String {
        format!("{}{}", self.pair.0 + 1, self.pair.1 + 1)
    }
}

/// All `C(n, 2)` weight vectors in lexicographic pair order.
pub fn weight_vectors(n: usize) -> Result<Vec<WeightVector>> {
    if n < 4 {
        return Err(domain(format!("weight vectors need n >= 4, got {n}")));
    }
    Ok(pairs(n).into_iter().map(|pair| WeightVector { n, pair }).collect())
}

pub(crate) fn weight_vertices(n: usize) -> Result<Vec<RationalVector>> {
    Ok(weight_vectors(n)?.iter().map(WeightVector::to_rational).collect())
}

/// Point of the standard simplex `Delta^N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplexPoint(pub Vec<f64>);

/// Real point of the hypersimplex `Delta_{n,2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HypersimplexPoint(pub Vec<f64>);

impl HypersimplexPoint {
    /// `0 <= x_i <= 1` and `sum x = 2`, within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        let sum: f64 = self.0.iter().sum();
        (sum - 2.0).abs() <= tol && self.0.iter().all(|&x| x >= -tol && x <= 1.0 + tol)
    }

    /// Sup-norm distance to an exact point.
    pub fn distance_to(&self, target: &RationalVector) -> f64 {
        if self.0.len() != target.len() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(target.iter())
            .map(|(x, t)| (x - t.to_f64()).abs())
            .fold(0.0, f64::max)
    }
}

/// Standard moment map `x_i = |z_i|^2 / |z|^2`.
pub fn mu_hat(z: &ProjectivePoint) -> SimplexPoint {
    let total: f64 = z.coords().iter().map(|c| c.norm_sqr()).sum();
    SimplexPoint(z.coords().iter().map(|c| c.norm_sqr() / total).collect())
}

/// The linear map with columns `Lambda_I` in lexicographic order.
pub fn a_map(x: &SimplexPoint, n: usize) -> Result<HypersimplexPoint> {
    if x.0.len() != pair_count(n) {
        return Err(domain(format!(
            "simplex point has {} entries, expected C({n},2) = {}",
            x.0.len(),
            pair_count(n)
        )));
    }
    let mut out = vec![0.0; n];
    for (w, (i, j)) in x.0.iter().zip(pairs(n)) {
        out[i] += w;
        out[j] += w;
    }
    Ok(HypersimplexPoint(out))
}

/// Exact version of [`a_map`].
pub fn a_map_exact(x: &RationalVector, n: usize) -> Result<RationalVector> {
    if x.len() != pair_count(n) {
        return Err(domain(format!(
            "simplex point has {} entries, expected {}",
            x.len(),
            pair_count(n)
        )));
    }
    let mut out = vec![Rational::zero(); n];
    for (w, (i, j)) in x.iter().zip(pairs(n)) {
        out[i] += *w;
        out[j] += *w;
    }
    Ok(RationalVector::new(out))
}

/// The matrix of `A` as exact rows (`n x C(n,2)`).
pub fn a_matrix(n: usize) -> Vec<Vec<Rational>> {
    let ps = pairs(n);
    (0..n)
        .map(|r| {
            ps.iter()
                .map(|&(i, j)| Rational::from(i64::from(r == i || r == j)))
                .collect()
        })
        .collect()
}

/// Moment map of the torus action on CP^N, `N + 1 = C(n, 2)`.
pub fn mu_tilde(z: &ProjectivePoint, n: usize) -> Result<HypersimplexPoint> {
    if z.len() != pair_count(n) {
        return Err(domain(format!(
            "point has {} coordinates, expected C({n},2) = {}",
            z.len(),
            pair_count(n)
        )));
    }
    let total: f64 = z.coords().iter().map(|c| c.norm_sqr()).sum();
    let mut out = vec![0.0; n];
    for (c, (i, j)) in z.coords().iter().zip(pairs(n)) {
        let w = c.norm_sqr() / total;
        out[i] += w;
        out[j] += w;
    }
    Ok(HypersimplexPoint(out))
}

/// Moment map of the torus action on G(n,2).
pub fn mu(l: &GrassmannPoint) -> Result<HypersimplexPoint> {
    mu_tilde(&plucker_embed(l)?, l.n())
}

/// Action of `(t_1, ..., t_n)` on CP^N through the weights: `z_I -> t_i t_j z_I`.
pub fn torus_act(z: &ProjectivePoint, t: &[Complex64]) -> Result<ProjectivePoint> {
    let n = n_from_coord_count(z.len())?;
    if t.len() != n {
        return Err(domain("torus element has wrong length"));
    }
    ProjectivePoint::new(
        z.coords()
            .iter()
            .zip(pairs(n))
            .map(|(c, (i, j))| c * t[i] * t[j])
            .collect(),
    )
}
