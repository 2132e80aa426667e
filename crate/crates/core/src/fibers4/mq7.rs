use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{max_abs_diff, phase, real, ChamberOrbit, TorusElement};
use crate::error::{domain, Error, Result};
use crate::moment::mu_tilde;
use crate::plucker::ProjectivePoint;
use crate::tolerances::FIBER;

/// `(z0, z1, z2)` with `|z0|^2 + |z1|^2 + |z2|^2 = 1/3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    #[serde(with = "complex3")]
    pub z: [Complex64; 3],
}

mod complex3 {
    use num_complex::Complex64;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(a: &[Complex64; 3], s: S) -> Result<S::Ok, S::Error> {
        crate::plucker::complex_serde::serialize(a, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 3], D::Error> {
        let v = crate::plucker::complex_serde::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom("expected three complex scalars"))
    }
}

impl SpherePoint {
    pub fn new(z0: Complex64, z1: Complex64, z2: Complex64) -> Result<Self> {
        let r = z0.norm_sqr() + z1.norm_sqr() + z2.norm_sqr();
        if (r - 1.0 / 3.0).abs() > FIBER {
            return Err(domain(format!("|z0|^2 + |z1|^2 + |z2|^2 = {r}, expected 1/3")));
        }
        Ok(SpherePoint { z: [z0, z1, z2] })
    }

    pub fn max_diff(&self, other: &SpherePoint) -> f64 {
        max_abs_diff(&self.z, &other.z)
    }
}

/// `(|z3|, |z4|, |z5|)` over a point of the sphere:
/// `|z3|^2 = 4/9 - |z0|^2 - |z1|^2`, `|z4|^2 = |z1|^2 + 1/9`, `|z5|^2 = |z0|^2 + 1/9`.
pub fn mq7_magnitudes(z0: Complex64, z1: Complex64, z2: Complex64) -> Result<[f64; 3]> {
    SpherePoint::new(z0, z1, z2)?;
    let (a, b) = (z0.norm_sqr(), z1.norm_sqr());
    Ok([
        (4.0 / 9.0 - a - b).max(0.0).sqrt(),
        (b + 1.0 / 9.0).sqrt(),
        (a + 1.0 / 9.0).sqrt(),
    ])
}

/// A point of the fiber of `mu_tilde` over `Q` in CP^5.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MQ7Point {
    #[serde(with = "complex6")]
    base: [Complex64; 6],
    orbit: ChamberOrbit,
}

pub(crate) mod complex6 {
    use num_complex::Complex64;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(a: &[Complex64; 6], s: S) -> Result<S::Ok, S::Error> {
        crate::plucker::complex_serde::serialize(a, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 6], D::Error> {
        let v = crate::plucker::complex_serde::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom("expected six complex scalars"))
    }
}

impl MQ7Point {
    /// Reads a projective point of the fiber, normalizing to the
    /// representative with real positive `z3` (in base coordinates).
    pub fn from_projective(p: &ProjectivePoint, orbit: ChamberOrbit) -> Result<Self> {
        let raw: [Complex64; 6] = p
            .coords()
            .try_into()
            .map_err(|_| domain("a point of CP^5 needs six coordinates"))?;
        let base = orbit.apply(&raw);
        if base[3].norm() < FIBER {
            return Err(domain("z3 vanishes; the point is not on a regular fiber"));
        }
        let u = phase(base[3]).conj();
        let point = MQ7Point {
            base: base.map(|z| z * u),
            orbit,
        };
        let r = point.moment_residual();
        if r > FIBER {
            return Err(Error::Certificate(format!("moment residual {r:e} exceeds {FIBER:e}")));
        }
        Ok(point)
    }

    pub(crate) fn from_base(base: [Complex64; 6], orbit: ChamberOrbit) -> Self {
        MQ7Point { base, orbit }
    }

    /// Coordinates in CP^5 (unit norm).
    pub fn coords(&self) -> [Complex64; 6] {
        self.orbit.apply(&self.base)
    }

    /// Coordinates before the orbit involution.
    pub fn base(&self) -> &[Complex64; 6] {
        &self.base
    }

    pub fn orbit(&self) -> ChamberOrbit {
        self.orbit
    }

    pub fn with_orbit(mut self, orbit: ChamberOrbit) -> Self {
        self.orbit = orbit;
        self
    }

    pub fn projective(&self) -> ProjectivePoint {
        ProjectivePoint::new(self.coords().to_vec()).expect("fiber points are nonzero")
    }

    /// `|mu_tilde(z) - Q|_inf`.
    pub fn moment_residual(&self) -> f64 {
        let got = mu_tilde(&self.projective(), 4).expect("six coordinates");
        got.0
            .iter()
            .zip(self.orbit.q_f64())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from the closed forms `|z3|^2 = (|z0|^2+|z1|^2+4|z2|^2)/3`,
    /// `|z4|^2 = (|z0|^2+4|z1|^2+|z2|^2)/3`, `|z5|^2 = (4|z0|^2+|z1|^2+|z2|^2)/3`
    /// and from the sphere condition.
    pub fn magnitude_residual(&self) -> f64 {
        let s: Vec<f64> = self.base.iter().map(|z| z.norm_sqr()).collect();
        [
            s[3] - (s[0] + s[1] + 4.0 * s[2]) / 3.0,
            s[4] - (s[0] + 4.0 * s[1] + s[2]) / 3.0,
            s[5] - (4.0 * s[0] + s[1] + s[2]) / 3.0,
            s[0] + s[1] + s[2] - 1.0 / 3.0,
        ]
        .iter()
        .fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `min(|z3|, |z4|, |z5|)` in base coordinates.
    pub fn min_tail_modulus(&self) -> f64 {
        self.base[3..].iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    /// Action of `T^6` coordinatewise on the base coordinates, followed by
    /// renormalization.
    pub fn act(&self, t: &[Complex64; 6]) -> Result<MQ7Point> {
        let moved: Vec<Complex64> = self.base.iter().zip(t).map(|(z, s)| z * s).collect();
        let p = ProjectivePoint::new(self.orbit.apply(&moved.try_into().expect("six")).to_vec())?;
        MQ7Point::from_projective(&p, self.orbit)
    }

    pub fn max_diff(&self, other: &MQ7Point) -> f64 {
        max_abs_diff(&self.base, &other.base)
    }
}

/// The embedding `S^5 -> M_Q^7`, `(z0, z1, z2) -> (z0 : z1 : z2 : |z3| : |z4| : |z5|)`.
pub fn lift_f(s: &SpherePoint) -> Result<MQ7Point> {
    h_param(s, &TorusElement::identity(2))
}

/// `h(z, t4, t5) = (z0 : z1 : z2 : |z3| : |z4| t4 : |z5| t5)`.
pub fn h_param(s: &SpherePoint, t: &TorusElement) -> Result<MQ7Point> {
    if t.len() != 2 {
        return Err(domain("h takes a torus element of length 2"));
    }
    let [z0, z1, z2] = s.z;
    let [m3, m4, m5] = mq7_magnitudes(z0, z1, z2)?;
    let (t4, t5) = (t.phases()[0], t.phases()[1]);
    Ok(MQ7Point::from_base([z0, z1, z2, real(m3), t4 * m4, t5 * m5], ChamberOrbit::Minus))
}

/// Inverse of [`h_param`]: reads `t4, t5` off the phases of `z4, z5`.
pub fn h_preimage(p: &MQ7Point) -> Result<(SpherePoint, TorusElement)> {
    let b = p.base();
    let s = SpherePoint::new(b[0], b[1], b[2])?;
    let t = TorusElement::new(vec![phase(b[4]), phase(b[5])])?;
    Ok((s, t))
}

/// A uniformly distributed point of the sphere of radius `1/sqrt(3)` in C^3.
pub fn random_sphere_point<R: Rng + ?Sized>(rng: &mut R) -> SpherePoint {
    loop {
        let g: Vec<f64> = (0..6).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        let k = 1.0 / (3f64.sqrt() * norm);
        let z = [
            Complex64::new(g[0] * k, g[1] * k),
            Complex64::new(g[2] * k, g[3] * k),
            Complex64::new(g[4] * k, g[5] * k),
        ];
        return SpherePoint { z };
    }
}

/// A random point of `M_Q^7` through `h`, with its parameters.
pub fn random_mq7<R: Rng + ?Sized>(rng: &mut R, orbit: ChamberOrbit) -> (SpherePoint, TorusElement, MQ7Point) {
    let s = random_sphere_point(rng);
    let t = TorusElement::random(rng, 2);
    let p = h_param(&s, &t).expect("sampled on the sphere").with_orbit(orbit);
    (s, t, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::q;
    use crate::moment::mu_hat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        real(x)
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn magnitudes() {
        let s6 = 1.0 / 6f64.sqrt();
        let m = mq7_magnitudes(c(0.), c(s6), c(s6)).unwrap();
        assert!(close(&m, &[(5.0f64 / 18.0).sqrt(), (5.0f64 / 18.0).sqrt(), 1.0 / 3.0], 1e-15));
        let m = mq7_magnitudes(c(s6), c(s6), c(0.)).unwrap();
        assert!(close(&m, &[1.0 / 3.0, (5.0f64 / 18.0).sqrt(), (5.0f64 / 18.0).sqrt()], 1e-15));
        // (1/sqrt3, 0, 0): both closed forms give squares (1/9, 1/9, 4/9).
        let m = mq7_magnitudes(c(1.0 / 3f64.sqrt()), c(0.), c(0.)).unwrap();
        let sq: Vec<f64> = m.iter().map(|x| x * x).collect();
        assert!(close(&sq, &[1. / 9., 1. / 9., 4. / 9.], 1e-15));
        assert!(mq7_magnitudes(c(1.), c(0.), c(0.)).is_err());
    }

    #[test]
    fn two_closed_forms_agree_on_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let p = lift_f(&random_sphere_point(&mut rng)).unwrap();
            assert!(p.magnitude_residual() < 1e-14);
        }
    }

    #[test]
    fn lifted_curve_points() {
        let s6 = 1.0 / 6f64.sqrt();
        let cases = [
            ([0., s6, s6], [0., 1. / 6., 1. / 6., 5. / 18., 5. / 18., 1. / 9.]),
            ([s6, 0., s6], [1. / 6., 0., 1. / 6., 5. / 18., 1. / 9., 5. / 18.]),
            ([s6, s6, 0.], [1. / 6., 1. / 6., 0., 1. / 9., 5. / 18., 5. / 18.]),
        ];
        for (z, x) in cases {
            let p = lift_f(&SpherePoint::new(c(z[0]), c(z[1]), c(z[2])).unwrap()).unwrap();
            assert!(close(&mu_hat(&p.projective()).0, &x, 1e-12));
            assert!(p.moment_residual() < 1e-12);
        }
    }

    #[test]
    fn h_samples_and_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for orbit in [ChamberOrbit::Minus, ChamberOrbit::Plus] {
            for _ in 0..1000 {
                let (s, t, p) = random_mq7(&mut rng, orbit);
                assert!(p.moment_residual() < 1e-10);
                assert!(p.min_tail_modulus() >= 0.33);
                let back = MQ7Point::from_projective(&p.projective(), orbit).unwrap();
                let (s2, t2) = h_preimage(&back).unwrap();
                assert!(s2.max_diff(&s) < 1e-10);
                assert!(t2.max_diff(&t) < 1e-10);
            }
        }
        assert_eq!(ChamberOrbit::Plus.q().entries()[0], q(2, 3));
    }

    #[test]
    fn h_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let (s, t, p) = random_mq7(&mut rng, ChamberOrbit::Minus);
            let tau = TorusElement::random(&mut rng, 5);
            let tp = tau.phases();
            let moved_s = SpherePoint::new(s.z[0] * tp[0], s.z[1] * tp[1], s.z[2] * tp[2]).unwrap();
            let moved_t = TorusElement::new(vec![t.phases()[0] * tp[3], t.phases()[1] * tp[4]]).unwrap();
            let lhs = h_param(&moved_s, &moved_t).unwrap();
            let one = c(1.);
            let rhs = p.act(&[tp[0], tp[1], tp[2], one, tp[3], tp[4]]).unwrap();
            assert!(lhs.max_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn lift_is_h_at_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_sphere_point(&mut rng);
        assert_eq!(lift_f(&s).unwrap(), h_param(&s, &TorusElement::identity(2)).unwrap());
        assert!(h_param(&s, &TorusElement::identity(3)).is_err());
    }
}
