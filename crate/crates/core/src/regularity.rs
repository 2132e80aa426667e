//! Strata, stabilizers and regular values of the moment maps on G(n,2) and
//! CP^N, chambers of the hypersimplex for n = 4, and the chamber of the
//! centre point.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactgeom::{
    affine_rank, arrangement_for_n, matrix_rank, rref, sign_vector, Rational, RationalVector, SignVector,
};
use crate::moment::weight_vertices;
use crate::plucker::pair_count;

/// Largest `n` for which the mu-tilde test enumerates vertex subsets.
pub const MU_TILDE_MAX_N: usize = 6;

/// Largest `n` for the randomized chamber-witness search.
pub const WITNESS_MAX_N: usize = 8;

const WITNESS_TRIALS: usize = 10_000;

/// Indices of the nonzero homogeneous coordinates of a stratum `W_sigma`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StratumSupport {
    sigma: Vec<usize>,
    n: usize,
}

impl StratumSupport {
    pub fn new(mut sigma: Vec<usize>, n: usize) -> Result<Self> {
        sigma.sort_unstable();
        sigma.dedup();
        if sigma.is_empty() {
            return Err(domain("stratum support must be nonempty"));
        }
        if let Some(&bad) = sigma.iter().find(|&&i| i >= pair_count(n)) {
            return Err(domain(format!("coordinate index {bad} out of range for n = {n}")));
        }
        Ok(StratumSupport { sigma, n })
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `conv{Lambda_I : I in sigma}` together with its dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissiblePolytope {
    pub vertex_set: Vec<RationalVector>,
    pub dim: usize,
}

impl AdmissiblePolytope {
    pub fn of(support: &StratumSupport) -> Result<Self> {
        let all = weight_vertices(support.n)?;
        let vertex_set: Vec<RationalVector> = support.sigma.iter().map(|&k| all[k].clone()).collect();
        let dim = affine_rank(&vertex_set)?;
        Ok(AdmissiblePolytope { vertex_set, dim })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub dim_stabilizer: usize,
    pub dim_polytope: usize,
}

/// Dimension of the stabilizer torus of a stratum, counting the diagonal
/// circle: `n - dim P_sigma`.
pub fn stabilizer_dim(support: &StratumSupport) -> Result<StabilizerReport> {
    let dim_polytope = AdmissiblePolytope::of(support)?.dim;
    Ok(StabilizerReport {
        dim_stabilizer: support.n - dim_polytope,
        dim_polytope,
    })
}

/// Checks `0 <= x_i <= 1` and `sum x = 2` exactly.
pub fn check_hypersimplex(x: &RationalVector, n: usize) -> Result<()> {
    if x.len() != n {
        return Err(domain(format!("point has length {}, expected {n}", x.len())));
    }
    if x.sum() != Rational::from(2) {
        return Err(domain(format!("coordinates of {x} sum to {}, not 2", x.sum())));
    }
    if x.iter().any(|v| v.is_negative() || *v > Rational::one()) {
        return Err(domain(format!("{x} has a coordinate outside [0, 1]")));
    }
    Ok(())
}

/// Regular value of `mu` on G(n,2): all coordinates strictly between 0 and 1
/// and off every hyperplane `sum_T x = 1`.
pub fn is_regular_mu(x: &RationalVector, n: usize) -> Result<bool> {
    check_hypersimplex(x, n)?;
    if x.iter().any(|v| !v.is_positive() || *v == Rational::one()) {
        return Ok(false);
    }
    Ok(sign_vector(x, &arrangement_for_n(n)?)?.is_strict())
}

/// An affinely independent vertex set together with a left inverse of its
/// homogenized coordinate matrix, so barycentric coordinates cost one
/// matrix-vector product.
#[derive(Clone, Debug)]
struct Cell {
    vertices: Vec<RationalVector>,
    /// Rows of the homogenized system used for the inverse.
    rows: Vec<usize>,
    inverse: Vec<Vec<Rational>>,
}

impl Cell {
    fn new(vertices: Vec<RationalVector>) -> Option<Cell> {
        let n = vertices[0].len();
        let k = vertices.len();
        // Homogenized matrix M: (n + 1) x k, column j = (v_j, 1).
        let m: Vec<Vec<Rational>> = (0..=n)
            .map(|r| {
                vertices
                    .iter()
                    .map(|v| if r < n { v[r] } else { Rational::one() })
                    .collect()
            })
            .collect();
        let mut transpose: Vec<Vec<Rational>> = (0..k).map(|j| m.iter().map(|row| row[j]).collect()).collect();
        let rows = rref(&mut transpose);
        if rows.len() < k {
            return None;
        }
        let mut aug: Vec<Vec<Rational>> = rows
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let mut row = m[r].clone();
                row.extend((0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        rref(&mut aug);
        let inverse = aug.into_iter().map(|row| row[k..].to_vec()).collect();
        Some(Cell { vertices, rows, inverse })
    }

    fn contains(&self, x: &RationalVector) -> bool {
        let n = x.len();
        let hom = |r: usize| if r < n { x[r] } else { Rational::one() };
        let w: Vec<Rational> = self
            .inverse
            .iter()
            .map(|row| row.iter().zip(&self.rows).map(|(a, &r)| *a * hom(r)).sum())
            .collect();
        if w.iter().any(Rational::is_negative) {
            return false;
        }
        (0..=n).all(|r| {
            let lhs: Rational = self
                .vertices
                .iter()
                .zip(&w)
                .map(|(v, wi)| *wi * if r < n { v[r] } else { Rational::one() })
                .sum();
            lhs == hom(r)
        })
    }
}

/// Precomputed test for regular values of `mu_tilde` on CP^N.
///
/// `x` is singular exactly when it lies in an admissible polytope of dimension
/// at most `n - 2`. By Carathéodory such a point lies in the convex hull of an
/// affinely independent set of at most `n - 1` weights, so only those sets are
/// enumerated.
#[derive(Clone, Debug)]
pub struct MuTildeRegularity {
    n: usize,
    cells: Vec<Cell>,
}

impl MuTildeRegularity {
    pub fn new(n: usize) -> Result<Self> {
        if n > MU_TILDE_MAX_N {
            return Err(Error::Unsupported(format!(
                "mu-tilde regularity is enumerated for n <= {MU_TILDE_MAX_N}, got {n}"
            )));
        }
        let verts = weight_vertices(n)?;
        let cells = (1..n)
            .flat_map(|k| (0..verts.len()).combinations(k))
            .filter_map(|idx| Cell::new(idx.iter().map(|&i| verts[i].clone()).collect()))
            .collect();
        Ok(MuTildeRegularity { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of low-dimensional simplices enumerated.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn is_regular(&self, x: &RationalVector) -> Result<bool> {
        check_hypersimplex(x, self.n)?;
        Ok(!self.cells.iter().any(|c| c.contains(x)))
    }

    /// A vertex set of dimension `<= n - 2` whose hull contains `x`, if any.
    pub fn singular_witness(&self, x: &RationalVector) -> Result<Option<Vec<RationalVector>>> {
        check_hypersimplex(x, self.n)?;
        Ok(self.cells.iter().find(|c| c.contains(x)).map(|c| c.vertices.clone()))
    }
}

/// Regular value of `mu_tilde` on CP^N, `n <= 6`.
pub fn is_regular_mu_tilde(x: &RationalVector, n: usize) -> Result<bool> {
    MuTildeRegularity::new(n)?.is_regular(x)
}

/// All points `k / d` of the hypersimplex with integer `0 <= k_i <= d`,
/// in lexicographic order of `k`.
pub fn rational_grid(n: usize, d: usize) -> Vec<RationalVector> {
    fn rec(i: usize, n: usize, d: i64, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i + 1 == n {
            if (0..=d).contains(&left) {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let remaining = (n - i - 1) as i64;
        for k in 0..=d.min(left) {
            if left - k <= remaining * d {
                cur.push(k);
                rec(i + 1, n, d, left - k, cur, out);
                cur.pop();
            }
        }
    }
    if n == 0 || d == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    rec(0, n, d as i64, 2 * d as i64, &mut Vec::new(), &mut raw);
    let den = d as i128;
    raw.into_iter()
        .map(|k| RationalVector::new(k.into_iter().map(|v| Rational::new(v as i128, den)).collect()))
        .collect()
}

/// A chamber of maximal dimension: its sign vector, dimension and an exact
/// representative point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberReport {
    pub id: SignVector,
    pub dimension: usize,
    pub representative: RationalVector,
}

/// Denominator of the grid searched for chamber representatives.
pub const CHAMBER_GRID_DENOMINATOR: usize = 9;

/// The eight chambers of `Delta_{4,2}`, sorted by sign vector.
///
/// Each representative is the interior grid point of denominator 9 closest
/// to the centre `(1/2, ..., 1/2)`, ties broken lexicographically. The
/// dimension is the affine rank of all grid points found in the chamber.
pub fn enumerate_chambers(n: usize) -> Result<Vec<ChamberReport>> {
    if n != 4 {
        return Err(Error::Unsupported(format!("chamber enumeration is implemented for n = 4, got {n}")));
    }
    let arrangement = arrangement_for_n(n)?;
    let half = Rational::new(1, 2);
    let mut found: BTreeMap<SignVector, Vec<RationalVector>> = BTreeMap::new();
    for x in rational_grid(n, CHAMBER_GRID_DENOMINATOR) {
        if !is_regular_mu(&x, n)? {
            continue;
        }
        found.entry(sign_vector(&x, &arrangement)?).or_default().push(x);
    }
    found
        .into_iter()
        .map(|(id, points)| {
            let dimension = affine_rank(&points)?;
            let representative = points
                .iter()
                .min_by_key(|p| {
                    let dist: Rational = p.iter().map(|&v| (v - half) * (v - half)).sum();
                    (dist, (*p).clone())
                })
                .cloned()
                .expect("chamber has a point");
            Ok(ChamberReport { id, dimension, representative })
        })
        .collect()
}

/// An orbit of chambers under coordinate permutations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChamberOrbitClass {
    /// `C-` for the orbit of the all-minus chamber, `C+` otherwise.
    pub label: String,
    pub representative: SignVector,
    pub members: Vec<SignVector>,
}

/// Orbits of the eight n = 4 chambers under the action of S4 permuting
/// coordinates.
pub fn s4_chamber_orbits() -> Result<Vec<ChamberOrbitClass>> {
    let chambers = enumerate_chambers(4)?;
    let arrangement = arrangement_for_n(4)?;
    let mut orbits: Vec<Vec<SignVector>> = Vec::new();
    for c in &chambers {
        if orbits.iter().any(|o| o.contains(&c.id)) {
            continue;
        }
        let mut orbit: Vec<SignVector> = (0..4)
            .permutations(4)
            .map(|perm| {
                let moved = RationalVector::new(perm.iter().map(|&i| c.representative[i]).collect());
                sign_vector(&moved, &arrangement)
            })
            .collect::<Result<_>>()?;
        orbit.sort();
        orbit.dedup();
        orbits.push(orbit);
    }
    let all_minus = SignVector::new(vec![-1; arrangement.len()]);
    let all_plus = SignVector::new(vec![1; arrangement.len()]);
    Ok(orbits
        .into_iter()
        .map(|members| {
            let (label, representative) = if members.contains(&all_minus) {
                ("C-", all_minus.clone())
            } else if members.contains(&all_plus) {
                ("C+", all_plus.clone())
            } else {
                ("other", members[0].clone())
            };
            ChamberOrbitClass {
                label: label.to_string(),
                representative,
                members,
            }
        })
        .collect())
}

/// Orbit label (`C-` or `C+`) of an n = 4 chamber: the product of its signs.
pub fn orbit_label(id: &SignVector) -> &'static str {
    if id.signs().iter().map(|&s| i32::from(s)).product::<i32>() < 0 {
        "C-"
    } else {
        "C+"
    }
}

/// `(2/n, ..., 2/n)`.
pub fn centre_point(n: usize) -> RationalVector {
    RationalVector::new(vec![Rational::new(2, n as i128); n])
}

/// Whether the centre of `Delta_{n,2}` is a regular value of `mu`.
pub fn center_point_regular(n: usize) -> Result<bool> {
    if n < 4 {
        return Err(domain(format!("need n >= 4, got {n}")));
    }
    is_regular_mu(&centre_point(n), n)
}

/// Largest support size whose sums must stay below one in the chamber of the
/// centre: `n/2 - 1` for even `n`, `(n - 1)/2` for odd `n`.
pub fn witness_support_bound(n: usize) -> usize {
    if n % 2 == 0 {
        n / 2 - 1
    } else {
        n / 2
    }
}

/// Whether `x` satisfies `sum_T x < 1` for every `2 <= |T| <= bound` (and
/// `x_i < 1`) and is a regular value of `mu`.
pub fn is_largest_chamber_point(x: &RationalVector, n: usize) -> Result<bool> {
    if !is_regular_mu(x, n)? {
        return Ok(false);
    }
    let bound = witness_support_bound(n);
    let mut sorted: Vec<Rational> = x.entries().to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    // The largest sum over supports of a given size uses the largest entries.
    Ok((1..=bound).all(|size| sorted[..size].iter().copied().sum::<Rational>() < Rational::one()))
}

/// An exact point of the chamber containing (or, for even `n`, adjacent to)
/// the centre: the centre itself when it is regular, otherwise a seeded
/// random perturbation `2/n + k_i / (4 n^2)` with integer `k_i`, `sum k = 0`.
pub fn largest_chamber_witness(n: usize, seed: u64) -> Result<RationalVector> {
    if n < 4 {
        return Err(domain(format!("need n >= 4, got {n}")));
    }
    if n > WITNESS_MAX_N {
        return Err(Error::Unsupported(format!("witness search is bounded to n <= {WITNESS_MAX_N}")));
    }
    let centre = centre_point(n);
    if is_largest_chamber_point(&centre, n)? {
        return Ok(centre);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = (4 * n * n) as i128;
    for _ in 0..WITNESS_TRIALS {
        let mut k: Vec<i128> = (0..n - 1).map(|_| rng.random_range(-3..=3)).collect();
        k.push(-k.iter().sum::<i128>());
        let x = RationalVector::new(
            centre
                .iter()
                .zip(&k)
                .map(|(&c, &ki)| c + Rational::new(ki, den))
                .collect(),
        );
        if check_hypersimplex(&x, n).is_ok() && is_largest_chamber_point(&x, n)? {
            return Ok(x);
        }
    }
    Err(Error::NotFound(WITNESS_TRIALS))
}

/// Regularity of both maps at every point of a grid, evaluated in parallel;
/// the output is in grid order.
pub fn classify_grid(points: &[RationalVector], n: usize) -> Result<Vec<(bool, bool)>> {
    let tilde = MuTildeRegularity::new(n)?;
    points
        .par_iter()
        .map(|x| Ok((is_regular_mu(x, n)?, tilde.is_regular(x)?)))
        .collect()
}

/// Rank of the homogenized vertex matrix, exposed for dimension checks.
pub fn homogeneous_rank(s: &[RationalVector]) -> usize {
    let rows: Vec<Vec<Rational>> = s
        .iter()
        .map(|v| {
            let mut r = v.entries().to_vec();
            r.push(Rational::one());
            r
        })
        .collect();
    matrix_rank(&rows)
}
