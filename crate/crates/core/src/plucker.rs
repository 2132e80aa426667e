//! Grassmann points, the Plücker embedding of G(n,2) into CP^N, the n = 4
//! Plücker quadric and the affine chart where P^{23} = 1.

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::tolerances::{GRASSMANN_RANK, ZERO_COORD};

pub(crate) mod complex_serde {
    //! Complex scalars as `[re, im]` pairs.
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        z.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// Number of pairs `C(n, 2)`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs `(i, j)`, `i < j`, 0-based, in lexicographic order. Position `k`
/// in this list is homogeneous coordinate `z_k`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).tuple_combinations().collect()
}

/// Index of the pair `(i, j)` (0-based, `i < j`) in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n);
    // Pairs starting below i, then offset within row i.
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Recovers `n` from the number of homogeneous coordinates `C(n, 2)`.
pub fn n_from_coord_count(len: usize) -> Result<usize> {
    (2..64)
        .find(|&n| pair_count(n) == len)
        .ok_or_else(|| domain(format!("{len} is not a binomial C(n,2)")))
}

/// A plane in C^n, given by a 2 x n matrix of rank 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrassmannPoint {
    #[serde(with = "complex_serde")]
    row0: Vec<Complex64>,
    #[serde(with = "complex_serde")]
    row1: Vec<Complex64>,
}

impl GrassmannPoint {
    /// Builds a point from two rows, certifying rank 2: some 2 x 2 minor must
    /// exceed `1e-12` times the squared largest entry modulus.
    pub fn new(row0: Vec<Complex64>, row1: Vec<Complex64>) -> Result<Self> {
        if row0.len() != row1.len() || row0.len() < 2 {
            return Err(domain("rows must have equal length >= 2"));
        }
        let p = GrassmannPoint { row0, row1 };
        let scale = p
            .row0
            .iter()
            .chain(&p.row1)
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let best = p.minors().iter().map(|m| m.norm()).fold(0.0, f64::max);
        if scale == 0.0 || best <= GRASSMANN_RANK * scale * scale {
            return Err(Error::Degenerate(format!(
                "matrix has rank < 2 (largest minor {best:e}, scale {scale:e})"
            )));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.row0.len()
    }

    pub fn rows(&self) -> (&[Complex64], &[Complex64]) {
        (&self.row0, &self.row1)
    }

    /// The minor on columns `i, j`.
    pub fn minor(&self, i: usize, j: usize) -> Complex64 {
        self.row0[i] * self.row1[j] - self.row0[j] * self.row1[i]
    }

    /// All 2 x 2 minors in lexicographic pair order, unnormalized.
    pub fn minors(&self) -> Vec<Complex64> {
        pairs(self.n()).into_iter().map(|(i, j)| self.minor(i, j)).collect()
    }

    /// Torus action: column `k` scaled by `t[k]`.
    pub fn scale_columns(&self, t: &[Complex64]) -> Result<GrassmannPoint> {
        if t.len() != self.n() {
            return Err(domain("torus element has wrong length"));
        }
        GrassmannPoint::new(
            self.row0.iter().zip(t).map(|(a, b)| a * b).collect(),
            self.row1.iter().zip(t).map(|(a, b)| a * b).collect(),
        )
    }
}

/// A point of CP^N stored in canonical normalization: Euclidean norm 1 and
/// the first non-negligible coordinate real and positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProjective", into = "RawProjective")]
pub struct ProjectivePoint {
    coords: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawProjective(#[serde(with = "complex_serde")] Vec<Complex64>);

impl TryFrom<RawProjective> for ProjectivePoint {
    type Error = Error;
    fn try_from(raw: RawProjective) -> Result<Self> {
        ProjectivePoint::new(raw.0)
    }
}

impl From<ProjectivePoint> for RawProjective {
    fn from(p: ProjectivePoint) -> Self {
        RawProjective(p.coords)
    }
}

impl ProjectivePoint {
    /// Normalizes any nonzero homogeneous vector.
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        let norm = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if coords.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Degenerate("all homogeneous coordinates vanish".into()));
        }
        let scaled: Vec<Complex64> = coords.iter().map(|z| z / norm).collect();
        let lead = scaled
            .iter()
            .find(|z| z.norm() > ZERO_COORD)
            .copied()
            .expect("unit vector has a non-negligible entry");
        let phase = lead.conj() / lead.norm();
        Ok(ProjectivePoint {
            coords: scaled.into_iter().map(|z| z * phase).collect(),
        })
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Max coordinate distance between canonical representatives.
    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Chordal (Fubini-Study) distance `sqrt(1 - |<a, b>|^2)`; independent of
    /// the choice of representatives.
    pub fn chordal_distance(&self, other: &ProjectivePoint) -> f64 {
        let inner: Complex64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.conj() * b)
            .sum();
        (1.0 - inner.norm_sqr()).max(0.0).sqrt()
    }
}

/// Plücker coordinates of a plane, canonically normalized.
pub fn plucker_embed(l: &GrassmannPoint) -> Result<ProjectivePoint> {
    ProjectivePoint::new(l.minors())
}

/// `|z0 z5 + z2 z3 - z1 z4|` for a point of CP^5 (lex order 12,13,14,23,24,34).
pub fn plucker_relation_residual(z: &ProjectivePoint) -> Result<f64> {
    if z.len() != 6 {
        return Err(Error::Unsupported(format!(
            "Plücker relation implemented for n = 4 only (got {} coordinates)",
            z.len()
        )));
    }
    Ok(quadric(z.coords()).norm())
}

/// `z0 z5 + z2 z3 - z1 z4` on a raw representative.
pub(crate) fn quadric(z: &[Complex64]) -> Complex64 {
    z[0] * z[5] + z[2] * z[3] - z[1] * z[4]
}

/// Coordinates `(a1, a2, a3, a4)` in the chart of G(4,2) where `P^{23} != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartCoords4 {
    #[serde(with = "complex4")]
    pub a: [Complex64; 4],
}

mod complex4 {
    use num_complex::Complex64;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(a: &[Complex64; 4], s: S) -> Result<S::Ok, S::Error> {
        super::complex_serde::serialize(a, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 4], D::Error> {
        let v = super::complex_serde::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom("expected four complex scalars"))
    }
}

impl ChartCoords4 {
    pub fn new(a1: Complex64, a2: Complex64, a3: Complex64, a4: Complex64) -> Self {
        ChartCoords4 { a: [a1, a2, a3, a4] }
    }

    /// Real parts `u` and imaginary parts `v`.
    pub fn split(&self) -> ([f64; 4], [f64; 4]) {
        (self.a.map(|z| z.re), self.a.map(|z| z.im))
    }

    pub fn from_real(u: [f64; 4], v: [f64; 4]) -> Self {
        ChartCoords4 {
            a: std::array::from_fn(|k| Complex64::new(u[k], v[k])),
        }
    }

    pub fn max_diff(&self, other: &ChartCoords4) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

/// Chart coordinates read off Plücker coordinates:
/// `a1 = P13/P23, a2 = -P34/P23, a3 = -P12/P23, a4 = P24/P23`.
pub fn chart_coords_from_plucker(z: &[Complex64]) -> Result<ChartCoords4> {
    if z.len() != 6 {
        return Err(Error::Unsupported("chart coordinates exist for n = 4 only".into()));
    }
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let p23 = z[3];
    if p23.norm() <= GRASSMANN_RANK * norm {
        return Err(Error::OutsideChart(format!("|P23| = {:e}", p23.norm() / norm)));
    }
    Ok(ChartCoords4::new(z[1] / p23, -z[5] / p23, -z[0] / p23, z[4] / p23))
}

/// Chart coordinates of a plane of C^4.
pub fn chart_coords(l: &GrassmannPoint) -> Result<ChartCoords4> {
    if l.n() != 4 {
        return Err(Error::Unsupported("chart coordinates exist for n = 4 only".into()));
    }
    chart_coords_from_plucker(plucker_embed(l)?.coords())
}

/// The plane spanned by the columns of
/// `((a1, a3), (1, 0), (0, 1), (a2, a4))`, stored as a 2 x 4 matrix.
pub fn from_chart(a: &ChartCoords4) -> GrassmannPoint {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let [a1, a2, a3, a4] = a.a;
    GrassmannPoint::new(vec![a1, one, zero, a2], vec![a3, zero, one, a4])
        .expect("columns 2 and 3 form an identity block")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e(n: usize, k: usize) -> Vec<Complex64> {
        (0..n).map(|i| c(if i == k { 1.0 } else { 0.0 }, 0.0)).collect()
    }

    fn random_plane(rng: &mut ChaCha8Rng, n: usize) -> GrassmannPoint {
        let mut row = || -> Vec<Complex64> {
            (0..n)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        };
        let (r0, r1) = (row(), row());
        GrassmannPoint::new(r0, r1).unwrap()
    }

    /// 2x2 determinant by cofactor expansion, written out independently.
    fn cofactor(m: [[Complex64; 2]; 2]) -> Complex64 {
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    #[test]
    fn pair_index_matches_enumeration() {
        for n in 2..9 {
            for (k, (i, j)) in pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(n, i, j), k);
            }
            assert_eq!(n_from_coord_count(pair_count(n)).unwrap(), n);
        }
    }

    #[test]
    fn embed_coordinate_plane() {
        let l = GrassmannPoint::new(e(4, 0), e(4, 1)).unwrap();
        let p = plucker_embed(&l).unwrap();
        let expected = ProjectivePoint::new(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(p.distance(&expected) < 1e-15);
    }

    #[test]
    fn embed_diagonal_plane() {
        let r0: Vec<_> = e(4, 0).iter().zip(e(4, 2)).map(|(a, b)| a + b).collect();
        let r1: Vec<_> = e(4, 1).iter().zip(e(4, 3)).map(|(a, b)| a + b).collect();
        let l = GrassmannPoint::new(r0.clone(), r1.clone()).unwrap();
        let oracle: Vec<Complex64> = pairs(4)
            .into_iter()
            .map(|(i, j)| cofactor([[r0[i], r0[j]], [r1[i], r1[j]]]))
            .collect();
        let expected: Vec<Complex64> = [1., 0., 1., -1., 0., 1.].iter().map(|&x| c(x / 2.0, 0.0)).collect();
        for (a, b) in ProjectivePoint::new(oracle).unwrap().coords().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-15);
        }
        let p = plucker_embed(&l).unwrap();
        for (a, b) in p.coords().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn rank_deficient_rejected() {
        let r = vec![c(1., 2.), c(0., 1.), c(3., 0.), c(1., 1.)];
        let r2: Vec<_> = r.iter().map(|z| z * c(0.5, -2.0)).collect();
        assert!(matches!(GrassmannPoint::new(r, r2), Err(Error::Degenerate(_))));
        assert!(ProjectivePoint::new(vec![c(0., 0.); 6]).is_err());
    }

    #[test]
    fn relation_residuals() {
        let p = ProjectivePoint::new(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]).unwrap();
        // (1:0:0:0:0:1) normalized has z0 z5 = 1/2; on the raw representative it is 1.
        assert!((quadric(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]).norm() - 1.0).abs() < 1e-15);
        assert!((plucker_relation_residual(&p).unwrap() - 0.5).abs() < 1e-15);

        let s6 = 1.0 / 6f64.sqrt();
        let s518 = (5.0f64 / 18.0).sqrt();
        let base = ProjectivePoint::new(vec![c(0., 0.), c(s6, 0.), c(s6, 0.), c(s518, 0.), c(s518, 0.), c(1. / 3., 0.)]).unwrap();
        assert!(plucker_relation_residual(&base).unwrap() < 1e-12);

        let five = ProjectivePoint::new(vec![c(1., 0.); 10]).unwrap();
        assert!(matches!(plucker_relation_residual(&five), Err(Error::Unsupported(_))));
    }

    #[test]
    fn random_planes_on_quadric_and_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let l = random_plane(&mut rng, 4);
            let p = plucker_embed(&l).unwrap();
            assert!(plucker_relation_residual(&p).unwrap() < 1e-12);

            let t: Vec<Complex64> = (0..4)
                .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
                .collect();
            let moved = plucker_embed(&l.scale_columns(&t).unwrap()).unwrap();
            let acted: Vec<Complex64> = pairs(4)
                .into_iter()
                .zip(p.coords())
                .map(|((i, j), z)| z * t[i] * t[j])
                .collect();
            assert!(moved.distance(&ProjectivePoint::new(acted).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn chart_examples() {
        let a = ChartCoords4::new(c(1., 0.), c(2., 0.), c(3., 0.), c(4., 0.));
        let l = from_chart(&a);
        assert!(chart_coords(&l).unwrap().max_diff(&a) < 1e-12);
        assert_eq!(l.rows().0, &[c(1., 0.), c(1., 0.), c(0., 0.), c(2., 0.)]);
        assert_eq!(l.rows().1, &[c(3., 0.), c(0., 0.), c(1., 0.), c(4., 0.)]);

        let l23 = GrassmannPoint::new(e(4, 1), e(4, 2)).unwrap();
        assert!(chart_coords(&l23).unwrap().max_diff(&ChartCoords4::new(c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.))) < 1e-15);
        assert_eq!(from_chart(&ChartCoords4::new(c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.))), l23);

        let ones = from_chart(&ChartCoords4::new(c(1., 0.), c(1., 0.), c(1., 0.), c(1., 0.)));
        let p = plucker_embed(&ones).unwrap();
        assert!(plucker_relation_residual(&p).unwrap() < 1e-12);
        // Raw minors; P14 = a1 a4 - a2 a3 vanishes here.
        let raw = ones.minors();
        let expected = [-1., 1., 0., 1., 1., -1.];
        for (z, x) in raw.iter().zip(expected) {
            assert!((z - c(x, 0.)).norm() < 1e-15);
        }

        let l12 = GrassmannPoint::new(e(4, 0), e(4, 1)).unwrap();
        assert!(matches!(chart_coords(&l12), Err(Error::OutsideChart(_))));
    }

    #[test]
    fn chart_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = ChartCoords4 {
                a: std::array::from_fn(|_| c(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0))),
            };
            assert!(chart_coords(&from_chart(&a)).unwrap().max_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn projective_json_is_canonical_pairs() {
        let p = ProjectivePoint::new(vec![c(0., 2.), c(0., 0.)]).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1.0,0.0],[0.0,0.0]]");
        let back: ProjectivePoint = serde_json::from_str("[[0.0,3.0],[0.0,0.0]]").unwrap();
        assert_eq!(back, p);
    }
}
