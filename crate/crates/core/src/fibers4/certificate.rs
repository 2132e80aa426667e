//! Seeded per-sample certificates for the four fiber families.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    chart_point, complete_intersection_f, jacobian_rank, m3_sample, random_m2, random_mq5_via_f, random_mq5_via_g,
    random_mq7, ChamberOrbit, M2Point, M3Point, MQ5Point, MQ7Point,
};
use crate::error::{Error, Result};
use crate::tolerances::{DERIVED, FIBER, FIBER_COORD_FLOOR, SVD_RANK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberKind {
    Mq7,
    Mq5,
    M2,
    M3,
}

impl FromStr for FiberKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mq7" => Ok(FiberKind::Mq7),
            "mq5" => Ok(FiberKind::Mq5),
            "m2" => Ok(FiberKind::M2),
            "m3" => Ok(FiberKind::M3),
            other => Err(Error::Parse(format!("unknown fiber kind {other:?}"))),
        }
    }
}

/// Residuals of one sample; `None` where the check does not apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub moment: Option<f64>,
    pub plucker: Option<f64>,
    pub surface: Option<f64>,
    /// Closed-form moduli of `z3, z4, z5` against the point.
    pub magnitude: Option<f64>,
}

impl Residuals {
    fn max(self, other: Residuals) -> Residuals {
        let m = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        };
        Residuals {
            moment: m(self.moment, other.moment),
            plucker: m(self.plucker, other.plucker),
            surface: m(self.surface, other.surface),
            magnitude: m(self.magnitude, other.magnitude),
        }
    }

    fn within(&self, tol: f64) -> bool {
        [self.moment, self.plucker, self.surface, self.magnitude]
            .iter()
            .flatten()
            .all(|r| *r <= tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberCertificate {
    pub index: usize,
    #[serde(with = "crate::plucker::complex_serde")]
    pub point: Vec<Complex64>,
    pub residuals: Residuals,
    pub jacobian_rank: Option<usize>,
    pub f_values: Option<[f64; 3]>,
    pub pass: bool,
}

impl FiberCertificate {
    pub fn mq7(index: usize, p: &MQ7Point) -> Self {
        let residuals = Residuals {
            moment: Some(p.moment_residual()),
            magnitude: Some(p.magnitude_residual()),
            ..Residuals::default()
        };
        let pass = residuals.within(FIBER) && p.min_tail_modulus() >= FIBER_COORD_FLOOR;
        FiberCertificate {
            index,
            point: p.coords().to_vec(),
            residuals,
            jacobian_rank: None,
            f_values: None,
            pass,
        }
    }

    pub fn mq5(index: usize, p: &MQ5Point) -> Self {
        let residuals = Residuals {
            moment: Some(p.moment_residual()),
            plucker: Some(p.plucker_residual()),
            surface: Some(p.surface_residual()),
            magnitude: None,
        };
        let (u, v) = chart_point(p).split();
        let f = complete_intersection_f(&u, &v);
        let rank = jacobian_rank(&u, &v, SVD_RANK);
        let f_ok = f[0].abs() <= DERIVED && (f[1] + 1.0).abs() <= DERIVED && f[2].abs() <= DERIVED;
        FiberCertificate {
            index,
            point: p.coords().to_vec(),
            residuals,
            jacobian_rank: Some(rank),
            f_values: Some(f),
            pass: residuals.within(FIBER) && f_ok && rank == 3,
        }
    }

    pub fn m2(index: usize, p: &M2Point) -> Self {
        let residuals = Residuals { surface: Some(p.surface_residual()), ..Residuals::default() };
        FiberCertificate {
            index,
            point: vec![p.z0(), p.z1()],
            residuals,
            jacobian_rank: None,
            f_values: None,
            pass: residuals.within(FIBER),
        }
    }

    pub fn m3(index: usize, p: &M3Point) -> Self {
        let residuals = Residuals { surface: Some(p.surface_residual()), ..Residuals::default() };
        FiberCertificate {
            index,
            point: p.z().to_vec(),
            residuals,
            jacobian_rank: None,
            f_values: None,
            pass: residuals.within(FIBER),
        }
    }
}

/// The generator for sample `index`: one ChaCha stream per index, so the
/// result does not depend on evaluation order.
fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Draws and certifies sample `index`. `M_Q^5` samples alternate between the
/// `F` and `G` parametrizations.
pub fn certify(kind: FiberKind, seed: u64, index: usize, orbit: ChamberOrbit) -> Result<FiberCertificate> {
    let mut rng = sample_rng(seed, index);
    Ok(match kind {
        FiberKind::Mq7 => FiberCertificate::mq7(index, &random_mq7(&mut rng, orbit).2),
        FiberKind::Mq5 if index % 2 == 0 => FiberCertificate::mq5(index, &random_mq5_via_f(&mut rng, orbit)?.2),
        FiberKind::Mq5 => FiberCertificate::mq5(index, &random_mq5_via_g(&mut rng, orbit)?.2),
        FiberKind::M2 => FiberCertificate::m2(index, &random_m2(&mut rng)?),
        FiberKind::M3 => FiberCertificate::m3(index, &m3_sample(&mut rng)?),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberSummary {
    pub kind: FiberKind,
    pub orbit: ChamberOrbit,
    pub seed: u64,
    pub samples: usize,
    pub max_residuals: Residuals,
    /// Largest `max(|f1|, |f2 + 1|, |f3|)`.
    pub max_f_deviation: Option<f64>,
    pub rank_histogram: BTreeMap<usize, usize>,
    pub all_pass: bool,
    pub certificates: Vec<FiberCertificate>,
}

impl FiberSummary {
    pub fn first_failure(&self) -> Option<&FiberCertificate> {
        self.certificates.iter().find(|c| !c.pass)
    }
}

/// Certifies `samples` seeded samples in parallel; certificates are ordered
/// by sample index.
pub fn sample_certificates(kind: FiberKind, samples: usize, seed: u64, orbit: ChamberOrbit) -> Result<FiberSummary> {
    let certificates = (0..samples)
        .into_par_iter()
        .map(|i| certify(kind, seed, i, orbit))
        .collect::<Result<Vec<_>>>()?;
    let max_residuals = certificates
        .iter()
        .fold(Residuals::default(), |acc, c| acc.max(c.residuals));
    let max_f_deviation = certificates
        .iter()
        .filter_map(|c| c.f_values)
        .map(|f| f[0].abs().max((f[1] + 1.0).abs()).max(f[2].abs()))
        .reduce(f64::max);
    let mut rank_histogram = BTreeMap::new();
    for r in certificates.iter().filter_map(|c| c.jacobian_rank) {
        *rank_histogram.entry(r).or_insert(0) += 1;
    }
    Ok(FiberSummary {
        kind,
        orbit,
        seed,
        samples,
        max_residuals,
        max_f_deviation,
        rank_histogram,
        all_pass: certificates.iter().all(|c| c.pass),
        certificates,
    })
}
