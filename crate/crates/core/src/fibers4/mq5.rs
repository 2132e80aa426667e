use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::mq7::complex6;
use super::{max_abs_diff, phase, real, shifted_modulus, ChamberOrbit, TorusElement};
use crate::error::{domain, Error, Result};
use crate::exactgeom::{q, RationalVector};
use crate::moment::mu_tilde;
use crate::plucker::{chart_coords_from_plucker, plucker_relation_residual, quadric, ChartCoords4, ProjectivePoint};
use crate::tolerances::FIBER;

/// Below this, `1/3 - |z0|^2 - |z1|^2` is rounding noise and `|z2|` is zero.
const SPHERE_SLACK: f64 = 1e-13;

/// Below this modulus `z2` counts as zero when choosing a preimage branch.
const Z2_ZERO: f64 = 1e-14;

/// Feasibility slack for the collinear cases of the phase closure.
const CLOSURE_SLACK: f64 = 1e-10;

const MAX_REJECTIONS: usize = 10_000;

fn s6() -> f64 {
    1.0 / 6f64.sqrt()
}

fn s518() -> f64 {
    (5.0f64 / 18.0).sqrt()
}

/// `|z2|` from `|z2|^2 = 1/3 - |z0|^2 - |z1|^2`.
fn z2_modulus(z0: Complex64, z1: Complex64) -> f64 {
    let s = 1.0 / 3.0 - z0.norm_sqr() - z1.norm_sqr();
    if s.abs() <= SPHERE_SLACK {
        0.0
    } else {
        s.max(0.0).sqrt()
    }
}

/// A point of `M^2`: `(z0 : z1 : |z2| : |z3| : |z4| : |z5|)` on the fiber.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct M2Point {
    #[serde(with = "crate::fibers4::mq5::complex_pair")]
    z: [Complex64; 2],
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(a: &[Complex64; 2], s: S) -> Result<S::Ok, S::Error> {
        crate::plucker::complex_serde::serialize(a, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[Complex64; 2], D::Error> {
        let v = crate::plucker::complex_serde::deserialize(d)?;
        v.try_into()
            .map_err(|_| serde::de::Error::custom("expected two complex scalars"))
    }
}

impl M2Point {
    /// Accepts `(z0, z1)` with `|z0|^2 + |z1|^2 <= 1/3` satisfying the
    /// surface equation within `1e-10`.
    pub fn new(z0: Complex64, z1: Complex64) -> Result<Self> {
        if z0.norm_sqr() + z1.norm_sqr() > 1.0 / 3.0 + FIBER {
            return Err(domain("|z0|^2 + |z1|^2 exceeds 1/3"));
        }
        let p = M2Point { z: [z0, z1] };
        let r = p.surface_residual();
        if r > FIBER {
            return Err(Error::Certificate(format!("surface residual {r:e}")));
        }
        Ok(p)
    }

    /// The point of the circle `z0 = z1 = e^{i psi} / sqrt(6)`.
    pub fn circle(psi: f64) -> Self {
        let z = Complex64::from_polar(s6(), psi);
        M2Point { z: [z, z] }
    }

    pub fn z0(&self) -> Complex64 {
        self.z[0]
    }

    pub fn z1(&self) -> Complex64 {
        self.z[1]
    }

    /// `(z0, z1, |z2|, |z3|, |z4|, |z5|)`.
    pub fn base(&self) -> [Complex64; 6] {
        self.to_m3().base()
    }

    pub fn to_m3(&self) -> M3Point {
        M3Point {
            z: [self.z[0], self.z[1], real(z2_modulus(self.z[0], self.z[1]))],
        }
    }

    /// `|z0 |z5| + |z2||z3| - z1 |z4||`.
    pub fn surface_residual(&self) -> f64 {
        self.to_m3().surface_residual()
    }

    pub fn on_circle(&self) -> bool {
        z2_modulus(self.z[0], self.z[1]) < Z2_ZERO
    }

    pub fn max_diff(&self, other: &M2Point) -> f64 {
        max_abs_diff(&self.z, &other.z)
    }
}

/// Solves the surface equation for the phases of `z0, z1` given their moduli.
///
/// With `R0 = r0 |z5|`, `R1 = r1 |z4|` and `C = |z2||z3|` the equation reads
/// `R0 e^{i alpha} + C = R1 e^{i beta}`; the law of cosines fixes `cos alpha`
/// and `branch` picks the sign of `sin alpha`. Collinear configurations
/// (`R0 C = 0`) take zero phases.
pub fn m2_sample(r0: f64, r1: f64, branch: i8) -> Result<M2Point> {
    if r0 < 0.0 || r1 < 0.0 || r0 * r0 + r1 * r1 > 1.0 / 3.0 + FIBER {
        return Err(domain(format!("moduli ({r0}, {r1}) outside the disc r0^2 + r1^2 <= 1/3")));
    }
    let (z0r, z1r) = (real(r0), real(r1));
    let r2 = z2_modulus(z0r, z1r);
    let big_r0 = r0 * shifted_modulus(z0r);
    let big_r1 = r1 * shifted_modulus(z1r);
    let c = r2 * shifted_modulus(real(r2));
    if big_r0 == 0.0 || c == 0.0 {
        let closes = if c == 0.0 {
            (big_r0 - big_r1).abs() <= CLOSURE_SLACK
        } else {
            (c - big_r1).abs() <= CLOSURE_SLACK
        };
        if !closes {
            return Err(Error::NoSolution(format!(
                "collinear moduli R0 = {big_r0}, C = {c}, R1 = {big_r1} do not close"
            )));
        }
        return Ok(M2Point { z: [z0r, z1r] });
    }
    let cos_a = (big_r1 * big_r1 - big_r0 * big_r0 - c * c) / (2.0 * big_r0 * c);
    if cos_a.abs() > 1.0 + 1e-12 {
        return Err(Error::NoSolution(format!("cos alpha = {cos_a} for moduli ({r0}, {r1})")));
    }
    let cos_a = cos_a.clamp(-1.0, 1.0);
    let sign = if branch < 0 { -1.0 } else { 1.0 };
    let sin_a = sign * (1.0 - cos_a * cos_a).sqrt();
    let e_a = Complex64::new(cos_a, sin_a);
    let w = e_a * big_r0 + c;
    let z1 = if w.norm() > 0.0 { phase(w) * r1 } else { z1r };
    Ok(M2Point { z: [e_a * r0, z1] })
}

/// A random point of `M^2`: moduli uniform on the triangle
/// `|z0|^2 + |z1|^2 <= 1/3` in squared coordinates, rejected until the phase
/// closure exists, random branch.
pub fn random_m2<R: Rng + ?Sized>(rng: &mut R) -> Result<M2Point> {
    for _ in 0..MAX_REJECTIONS {
        let (mut a, mut b): (f64, f64) = (rng.random_range(0.0..1.0 / 3.0), rng.random_range(0.0..1.0 / 3.0));
        if a + b > 1.0 / 3.0 {
            a = 1.0 / 3.0 - a;
            b = 1.0 / 3.0 - b;
        }
        let branch = if rng.random_bool(0.5) { 1 } else { -1 };
        if let Ok(p) = m2_sample(a.sqrt(), b.sqrt(), branch) {
            return Ok(p);
        }
    }
    Err(Error::Sampling(MAX_REJECTIONS))
}

/// A point of `M^3 = M_Q^5 ∩ S^5`: `(z0 : z1 : z2 : |z3| : |z4| : |z5|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct M3Point {
    #[serde(with = "crate::fibers4::mq5::complex_triple")]
    z: [Complex64; 3],
}

pub(crate) mod complex_triple {
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

impl M3Point {
    pub fn new(z0: Complex64, z1: Complex64, z2: Complex64) -> Result<Self> {
        let r = z0.norm_sqr() + z1.norm_sqr() + z2.norm_sqr();
        if (r - 1.0 / 3.0).abs() > FIBER {
            return Err(domain(format!("|z0|^2 + |z1|^2 + |z2|^2 = {r}, expected 1/3")));
        }
        let p = M3Point { z: [z0, z1, z2] };
        let res = p.surface_residual();
        if res > FIBER {
            return Err(Error::Certificate(format!("surface residual {res:e}")));
        }
        Ok(p)
    }

    pub fn z(&self) -> [Complex64; 3] {
        self.z
    }

    /// `(|z3|, |z4|, |z5|) = (a(z2), a(z1), a(z0))` with `a(w) = sqrt(|w|^2 + 1/9)`.
    pub fn magnitudes(&self) -> [f64; 3] {
        [shifted_modulus(self.z[2]), shifted_modulus(self.z[1]), shifted_modulus(self.z[0])]
    }

    pub fn base(&self) -> [Complex64; 6] {
        let [m3, m4, m5] = self.magnitudes();
        [self.z[0], self.z[1], self.z[2], real(m3), real(m4), real(m5)]
    }

    /// `|z0 |z5| + z2 |z3| - z1 |z4||`.
    pub fn surface_residual(&self) -> f64 {
        let [m3, m4, m5] = self.magnitudes();
        (self.z[0] * m5 + self.z[2] * m3 - self.z[1] * m4).norm()
    }

    /// The free circle action `lambda . (z0, z1, z2) = (lambda z0, lambda z1, lambda z2)`.
    pub fn rotate(&self, lambda: Complex64) -> M3Point {
        M3Point { z: self.z.map(|w| w * lambda) }
    }

    pub fn max_diff(&self, other: &M3Point) -> f64 {
        max_abs_diff(&self.z, &other.z)
    }
}

/// The circles `S^1_i = M^3 ∩ {z_i = 0}` at angle `psi`.
///
/// On `S^1_1` the surface equation forces `z2 = -z0`.
pub fn m3_circle(i: usize, psi: f64) -> Result<M3Point> {
    let e = Complex64::from_polar(s6(), psi);
    let zero = real(0.0);
    let z = match i {
        0 => [zero, e, e],
        1 => [e, zero, -e],
        2 => [e, e, zero],
        _ => return Err(domain(format!("circle index {i} not in 0..3"))),
    };
    Ok(M3Point { z })
}

/// A random point of `M^3 = S^1 . M^2`.
pub fn m3_sample<R: Rng + ?Sized>(rng: &mut R) -> Result<M3Point> {
    let m2 = random_m2(rng)?;
    Ok(m2.to_m3().rotate(Complex64::from_polar(1.0, rng.random_range(0.0..TAU))))
}

/// A point of the Grassmann fiber `M_Q^5`, stored as the affine
/// representative `(z0, z1, z2, |z3|, z4, z5)` in base coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MQ5Point {
    #[serde(with = "complex6")]
    base: [Complex64; 6],
    orbit: ChamberOrbit,
}

impl MQ5Point {
    pub(crate) fn from_base(base: [Complex64; 6], orbit: ChamberOrbit) -> Self {
        MQ5Point { base, orbit }
    }

    /// Reads a projective point of the fiber, normalizing `z3` (in base
    /// coordinates) to be real and positive. Fails unless the moment and
    /// Plücker residuals are within `1e-10`.
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
        let point = MQ5Point { base: base.map(|z| z * u), orbit };
        let (m, pl) = (point.moment_residual(), point.plucker_residual());
        if m > FIBER || pl > FIBER {
            return Err(Error::Certificate(format!("moment residual {m:e}, Plücker residual {pl:e}")));
        }
        Ok(point)
    }

    pub fn coords(&self) -> [Complex64; 6] {
        self.orbit.apply(&self.base)
    }

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

    pub fn moment_residual(&self) -> f64 {
        let got = mu_tilde(&self.projective(), 4).expect("six coordinates");
        got.0
            .iter()
            .zip(self.orbit.q_f64())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn plucker_residual(&self) -> f64 {
        plucker_relation_residual(&self.projective()).expect("six coordinates")
    }

    /// `|z0 z5 + z2 |z3| - z1 z4|` on the affine representative.
    pub fn surface_residual(&self) -> f64 {
        quadric(&self.base).norm()
    }

    /// Chart coordinates `(a1, a2, a3, a4)` of the base coordinates. For the
    /// second orbit these are coordinates in the chart `P^{12} != 0` of the
    /// actual point.
    pub fn chart(&self) -> ChartCoords4 {
        chart_coords_from_plucker(&self.base).expect("z3 never vanishes on the fiber")
    }

    pub fn max_diff(&self, other: &MQ5Point) -> f64 {
        max_abs_diff(&self.base, &other.base)
    }
}

/// `F(m, t) = (t1 z0 : t2 z1 : t3 |z2| : |z3| : (t3/t2) |z4| : (t3/t1) |z5|)`.
pub fn f_param(m: &M2Point, t: &TorusElement) -> Result<MQ5Point> {
    if t.len() != 3 {
        return Err(domain("F takes a torus element of length 3"));
    }
    let [t1, t2, t3] = [t.phases()[0], t.phases()[1], t.phases()[2]];
    let b = m.base();
    Ok(MQ5Point::from_base(
        [t1 * b[0], t2 * b[1], t3 * b[2], b[3], t3 / t2 * b[4], t3 / t1 * b[5]],
        ChamberOrbit::Minus,
    ))
}

/// A preimage of `p` under [`f_param`]. Off the circle `z2 = 0` it is unique;
/// on the circle `t3 = 1` is chosen.
pub fn f_preimage(p: &MQ5Point) -> Result<(M2Point, TorusElement)> {
    let b = p.base();
    let (e4, e5) = (phase(b[4]), phase(b[5]));
    let t3 = if b[2].norm() < Z2_ZERO { real(1.0) } else { phase(b[2]) };
    let t1 = t3 / e5;
    let t2 = t3 / e4;
    let m = M2Point::new(b[0] / t1, b[1] / t2)?;
    Ok((m, TorusElement::new(vec![t1, t2, t3])?))
}

/// `G(m, t) = (t1 z0 : t2 z1 : z2 : |z3| : |z4| / t2 : |z5| / t1)`.
///
/// `t1` pairs with `z0` and `z5`, `t2` with `z1` and `z4`, as the Plücker
/// relation `z0 z5 + z2 z3 = z1 z4` requires.
pub fn g_param(m: &M3Point, t: &TorusElement) -> Result<MQ5Point> {
    if t.len() != 2 {
        return Err(domain("G takes a torus element of length 2"));
    }
    let (t1, t2) = (t.phases()[0], t.phases()[1]);
    let b = m.base();
    Ok(MQ5Point::from_base(
        [t1 * b[0], t2 * b[1], b[2], b[3], b[4] / t2, b[5] / t1],
        ChamberOrbit::Minus,
    ))
}

/// The unique preimage of `p` under [`g_param`]: `t1 = e^{-i psi5}`,
/// `t2 = e^{-i psi4}`.
pub fn g_preimage(p: &MQ5Point) -> Result<(M3Point, TorusElement)> {
    let b = p.base();
    let t1 = phase(b[5]).conj();
    let t2 = phase(b[4]).conj();
    let m = M3Point::new(b[0] / t1, b[1] / t2, b[2])?;
    Ok((m, TorusElement::new(vec![t1, t2])?))
}

/// `p(z) = (z1 |z4| : z0 |z5|)` in CP^1.
pub fn proj_p(m: &M3Point) -> Result<ProjectivePoint> {
    let [z0, z1, _] = m.z();
    let [_, m4, m5] = m.magnitudes();
    let c = [z1 * m4, z0 * m5];
    if c.iter().all(|w| w.norm() < 1e-14) {
        return Err(Error::Degenerate("both coordinates of p vanish".into()));
    }
    ProjectivePoint::new(c.to_vec())
}

/// `q(z) = (z1 |z4| : z0 |z5| : z2 |z3|)` in CP^2, the Hopf projection of
/// the sphere restricted to `M^3`.
pub fn hopf_q(m: &M3Point) -> ProjectivePoint {
    let [z0, z1, z2] = m.z();
    let [m3, m4, m5] = m.magnitudes();
    ProjectivePoint::new(vec![z1 * m4, z0 * m5, z2 * m3]).expect("|z4| > 0")
}

/// `g(z) = (z1 a(z1), z0 a(z0)) / sqrt(D)` with `a(w) = sqrt(|w|^2 + 1/9)` and
/// `D = |z0|^2 a(z0)^2 + |z1|^2 a(z1)^2`: a point of the unit sphere S^3.
pub fn g_map(m: &M3Point) -> [Complex64; 2] {
    let [z0, z1, _] = m.z();
    let (a0, a1) = (shifted_modulus(z0), shifted_modulus(z1));
    let d = z0.norm_sqr() * a0 * a0 + z1.norm_sqr() * a1 * a1;
    let k = 1.0 / d.sqrt();
    [z1 * a1 * k, z0 * a0 * k]
}

/// The torus orbit `M_{Q,i}` of the fiber over the curve point `X_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberCircle {
    pub index: usize,
    #[serde(with = "complex6")]
    pub base: [Complex64; 6],
    /// Row `k` gives the exponents of `(tau1, tau2, tau3)` on coordinate `k`.
    pub exponents: [[i32; 3]; 6],
    /// `mu_hat` of every point of the orbit.
    pub moment_image: RationalVector,
}

impl FiberCircle {
    /// The orbit point `tau . base`.
    pub fn sample(&self, tau: &TorusElement, orbit: ChamberOrbit) -> Result<MQ5Point> {
        if tau.len() != 3 {
            return Err(domain("fiber orbits are parametrized by T^3"));
        }
        let coords: Vec<Complex64> = self
            .base
            .iter()
            .zip(&self.exponents)
            .map(|(z, e)| {
                e.iter()
                    .zip(tau.phases())
                    .fold(*z, |acc, (&k, t)| acc * t.powi(k))
            })
            .collect();
        let moved = orbit.apply(&coords.try_into().expect("six"));
        MQ5Point::from_projective(&ProjectivePoint::new(moved.to_vec())?, orbit)
    }

    pub fn base_point(&self, orbit: ChamberOrbit) -> Result<MQ5Point> {
        self.sample(&TorusElement::identity(3), orbit)
    }
}

/// The three torus orbits `M_{Q,0}, M_{Q,1}, M_{Q,2}` over `X0, X1, X2`.
///
/// The base point of `M_{Q,1}` carries `z2 = -1/sqrt(6)` so that it lies on
/// the Plücker quadric.
pub fn mq5_fiber_circles() -> [FiberCircle; 3] {
    let (a, b, t) = (real(s6()), real(s518()), real(1.0 / 3.0));
    let zero = real(0.0);
    let rv = |xs: [(i128, i128); 6]| RationalVector::new(xs.iter().map(|&(n, d)| q(n, d)).collect());
    [
        FiberCircle {
            index: 0,
            base: [zero, a, a, b, b, t],
            exponents: [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, -1, 0], [-1, 0, 0], [0, 0, 1]],
            moment_image: rv([(0, 1), (1, 6), (1, 6), (5, 18), (5, 18), (1, 9)]),
        },
        FiberCircle {
            index: 1,
            base: [a, zero, -a, b, t, b],
            exponents: [[1, 0, 0], [0, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [-1, 0, 0]],
            moment_image: rv([(1, 6), (0, 1), (1, 6), (5, 18), (1, 9), (5, 18)]),
        },
        FiberCircle {
            index: 2,
            base: [a, a, zero, t, b, b],
            exponents: [[1, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 1], [0, -1, 0], [-1, 0, 0]],
            moment_image: rv([(1, 6), (1, 6), (0, 1), (1, 9), (5, 18), (5, 18)]),
        },
    ]
}

/// A random point of `M_Q^5` through `F`, with its parameters.
pub fn random_mq5_via_f<R: Rng + ?Sized>(
    rng: &mut R,
    orbit: ChamberOrbit,
) -> Result<(M2Point, TorusElement, MQ5Point)> {
    let m = random_m2(rng)?;
    let t = TorusElement::random(rng, 3);
    let p = f_param(&m, &t)?.with_orbit(orbit);
    Ok((m, t, p))
}

/// A random point of `M_Q^5` through `G`, with its parameters.
pub fn random_mq5_via_g<R: Rng + ?Sized>(
    rng: &mut R,
    orbit: ChamberOrbit,
) -> Result<(M3Point, TorusElement, MQ5Point)> {
    let m = m3_sample(rng)?;
    let t = TorusElement::random(rng, 2);
    let p = g_param(&m, &t)?.with_orbit(orbit);
    Ok((m, t, p))
}
