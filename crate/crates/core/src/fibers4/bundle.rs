//! The principal `T^3` bundle `M_Q^5 -> CP^1` over the two charts
//! `M0 = {P^{13} != 0}` and `M1 = {P^{12} != 0}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MQ5Point, TorusElement};
use crate::error::{domain, Error, Result};
use crate::tolerances::CHART_ZERO;

/// An integer matrix acting on `T^3` by `t'_i = prod_j t_j^{m_ij}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix(pub [[i64; 3]; 3]);

impl TransitionMatrix {
    /// The chart change from `M0` to `M1`:
    /// `t1' = t1 t2 / t3, t2' = t1, t3' = t3`.
    pub fn standard() -> Self {
        TransitionMatrix([[1, 1, -1], [1, 0, 0], [0, 0, 1]])
    }

    pub fn det(&self) -> i64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// The inverse through the adjugate; exists exactly when `det = ±1`.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::Degenerate(format!("determinant {d} is not a unit")));
        }
        let m = &self.0;
        let cof = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        Ok(TransitionMatrix(std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) * d))))
    }

    pub fn apply(&self, t: &TorusElement) -> Result<TorusElement> {
        if t.len() != 3 {
            return Err(domain("transition acts on T^3"));
        }
        let p = t.phases();
        let out = self
            .0
            .iter()
            .map(|row| {
                row.iter()
                    .zip(p)
                    .fold(Complex64::new(1.0, 0.0), |acc, (&k, z)| acc * z.powi(k as i32))
            })
            .collect();
        TorusElement::new(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransitionDirection {
    ZeroToOne,
    OneToZero,
}

/// Changes the torus coordinate of a point between the two charts.
pub fn bundle_transition(t: &TorusElement, direction: TransitionDirection) -> Result<TorusElement> {
    let m = TransitionMatrix::standard();
    match direction {
        TransitionDirection::ZeroToOne => m.apply(t),
        TransitionDirection::OneToZero => m.inverse()?.apply(t),
    }
}

/// Chart membership of one fiber point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartCoverage {
    /// `|P^{ij}|` in the order `12, 13, 14, 23, 24, 34`, base coordinates.
    pub moduli: [f64; 6],
    /// Which of `P^{12}, P^{13}, P^{14}` vanish.
    pub vanishing: Vec<String>,
    pub in_m0: bool,
    pub in_m1: bool,
}

/// Checks that `P^{23}, P^{24}, P^{34}` never vanish and classifies the
/// point into the charts `M0, M1`, cross-checked against the chart
/// coordinates `a1 = P^{13}/P^{23}` and `a3 = -P^{12}/P^{23}`.
pub fn verify_chart_coverage(p: &MQ5Point) -> Result<ChartCoverage> {
    let z = p.base();
    let moduli = z.map(|c| c.norm());
    if let Some(k) = (3..6).find(|&k| moduli[k] <= CHART_ZERO) {
        return Err(Error::Certificate(format!(
            "{} vanishes on a fiber point",
            ["P23", "P24", "P34"][k - 3]
        )));
    }
    let vanishing = ["P12", "P13", "P14"]
        .iter()
        .zip(&moduli)
        .filter(|(_, m)| **m <= CHART_ZERO)
        .map(|(name, _)| name.to_string())
        .collect();
    let (in_m0, in_m1) = (moduli[1] > CHART_ZERO, moduli[0] > CHART_ZERO);
    let a = p.chart().a;
    let ratio = z[3].norm();
    if (a[0].norm() * ratio > CHART_ZERO) != in_m0 || (a[2].norm() * ratio > CHART_ZERO) != in_m1 {
        return Err(Error::Certificate("chart coordinates disagree with Plücker moduli".into()));
    }
    Ok(ChartCoverage { moduli, vanishing, in_m0, in_m1 })
}
