//! The Grassmann fiber as a complete intersection in the chart `R^8`, and
//! tangent dimension counts on both fibers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MQ5Point, MQ7Point};
use crate::moment::weight_vectors;
use crate::plucker::ChartCoords4;

/// Chart coordinates `(a1, a2, a3, a4)` of a fiber point, read from its base
/// coordinates.
pub fn chart_point(p: &MQ5Point) -> ChartCoords4 {
    p.chart()
}

/// Real and imaginary parts of `a1 a4 - a2 a3`.
fn det_parts(u: &[f64; 4], v: &[f64; 4]) -> (f64, f64) {
    let a = u[0] * u[3] - v[0] * v[3] - u[1] * u[2] + v[1] * v[2];
    let b = u[0] * v[3] + v[0] * u[3] - u[1] * v[2] - v[1] * u[2];
    (a, b)
}

/// `(f1, f2, f3)` at `a_k = u_k + i v_k`. On the fiber the value is `(0, -1, 0)`.
pub fn complete_intersection_f(u: &[f64; 4], v: &[f64; 4]) -> [f64; 3] {
    let m: [f64; 4] = std::array::from_fn(|k| u[k] * u[k] + v[k] * v[k]);
    let (a, b) = det_parts(u, v);
    [
        m[0] + m[1] - m[2] - m[3],
        5.0 * m[0] + m[2] - 4.0 * m[3],
        4.0 * m[0] + m[2] - 3.0 * m[3] + a * a + b * b,
    ]
}

/// A 3 x 8 Jacobian, columns ordered `(u1, v1, u2, v2, u3, v3, u4, v4)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jacobian(pub [[f64; 8]; 3]);

impl Jacobian {
    pub fn max_diff(&self, other: &Jacobian) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Numerical rank: singular values above `tol` times the largest.
    pub fn rank(&self, tol: f64) -> usize {
        svd_rank(DMatrix::from_fn(3, 8, |i, j| self.0[i][j]), tol)
    }
}

/// Closed-form partial derivatives of `(f1, f2, f3)`.
pub fn jacobian(u: &[f64; 4], v: &[f64; 4]) -> Jacobian {
    let (a, b) = det_parts(u, v);
    let da = [u[3], -v[3], -u[2], v[2], -u[1], v[1], u[0], -v[0]];
    let db = [v[3], u[3], -v[2], -u[2], -v[1], -u[1], v[0], u[0]];
    let x = [u[0], v[0], u[1], v[1], u[2], v[2], u[3], v[3]];
    let w1 = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
    let w2 = [5.0, 5.0, 0.0, 0.0, 1.0, 1.0, -4.0, -4.0];
    let w3 = [4.0, 4.0, 0.0, 0.0, 1.0, 1.0, -3.0, -3.0];
    Jacobian([
        std::array::from_fn(|k| 2.0 * w1[k] * x[k]),
        std::array::from_fn(|k| 2.0 * w2[k] * x[k]),
        std::array::from_fn(|k| 2.0 * w3[k] * x[k] + 2.0 * a * da[k] + 2.0 * b * db[k]),
    ])
}

/// Central finite differences of [`complete_intersection_f`].
pub fn fd_jacobian(u: &[f64; 4], v: &[f64; 4], step: f64) -> Jacobian {
    let x = [u[0], v[0], u[1], v[1], u[2], v[2], u[3], v[3]];
    let eval = |x: &[f64; 8]| {
        complete_intersection_f(&[x[0], x[2], x[4], x[6]], &[x[1], x[3], x[5], x[7]])
    };
    let mut j = [[0.0; 8]; 3];
    for k in 0..8 {
        let (mut hi, mut lo) = (x, x);
        hi[k] += step;
        lo[k] -= step;
        let (fh, fl) = (eval(&hi), eval(&lo));
        for i in 0..3 {
            j[i][k] = (fh[i] - fl[i]) / (2.0 * step);
        }
    }
    Jacobian(j)
}

/// Rank of the analytic Jacobian at a chart point.
pub fn jacobian_rank(u: &[f64; 4], v: &[f64; 4], tol: f64) -> usize {
    jacobian(u, v).rank(tol)
}

fn svd_rank(m: DMatrix<f64>, tol: f64) -> usize {
    let s = m.singular_values();
    let top = s.max();
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * top).count()
}

/// Real row `h -> Re(conj(w) . h)` on `C^6 = R^12`, laid out as `(re, im)` pairs.
fn real_row(w: &[Complex64; 6]) -> Vec<f64> {
    w.iter().flat_map(|c| [c.re, c.im]).collect()
}

/// Rows of the differential of `mu_tilde` together with the sphere row.
fn moment_rows(z: &[Complex64; 6]) -> Vec<Vec<f64>> {
    let weights = weight_vectors(4).expect("n = 4");
    let mut rows = vec![real_row(z)];
    for j in 0..4 {
        let w: [Complex64; 6] = std::array::from_fn(|k| {
            let lam = weights[k].entries()[j] as f64;
            z[k] * lam
        });
        rows.push(real_row(&w));
    }
    rows
}

/// The two real rows of the differential of `z0 z5 + z2 z3 - z1 z4`.
fn quadric_rows(z: &[Complex64; 6]) -> Vec<Vec<f64>> {
    // dQ[h] = sum_k c_k h_k with the coefficients below; Re and Im of c h.
    let c = [z[5], -z[4], z[3], z[2], -z[1], z[0]];
    let re: Vec<f64> = c.iter().flat_map(|c| [c.re, -c.im]).collect();
    let im: Vec<f64> = c.iter().flat_map(|c| [c.im, c.re]).collect();
    vec![re, im]
}

fn fiber_dimension(rows: Vec<Vec<f64>>, tol: f64) -> usize {
    let m = DMatrix::from_fn(rows.len(), 12, |i, j| rows[i][j]);
    // Kernel on the unit sphere, minus the circle direction `i z`.
    12 - svd_rank(m, tol) - 1
}

/// Dimension of `M_Q^7` at `p` from rank-nullity of the moment differential.
pub fn mq7_tangent_dimension(p: &MQ7Point, tol: f64) -> usize {
    fiber_dimension(moment_rows(&p.coords()), tol)
}

/// Dimension of `M_Q^5` at `p`: the moment differential plus the quadric.
pub fn mq5_tangent_dimension(p: &MQ5Point, tol: f64) -> usize {
    let z = p.coords();
    let mut rows = moment_rows(&z);
    rows.extend(quadric_rows(&z));
    fiber_dimension(rows, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibers4::{mq5_fiber_circles, random_mq5_via_f, random_mq7, ChamberOrbit};
    use crate::tolerances::{FD_STEP, SVD_RANK};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn origin_and_circle_points() {
        assert_eq!(complete_intersection_f(&[0.0; 4], &[0.0; 4]), [0.0; 3]);
        for c in mq5_fiber_circles() {
            let p = c.base_point(ChamberOrbit::Minus).unwrap();
            let (u, v) = chart_point(&p).split();
            let f = complete_intersection_f(&u, &v);
            assert!(f[0].abs() < 1e-10 && (f[1] + 1.0).abs() < 1e-10 && f[2].abs() < 1e-10, "{f:?}");
            assert_eq!(jacobian_rank(&u, &v, SVD_RANK), 3);
        }
    }

    #[test]
    fn analytic_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let u: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
            let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
            assert!(jacobian(&u, &v).max_diff(&fd_jacobian(&u, &v, FD_STEP)) < 1e-6);
        }
    }

    #[test]
    fn fiber_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for orbit in [ChamberOrbit::Minus, ChamberOrbit::Plus] {
            for _ in 0..300 {
                let (_, _, p) = random_mq5_via_f(&mut rng, orbit).unwrap();
                let (u, v) = chart_point(&p).split();
                let f = complete_intersection_f(&u, &v);
                assert!(f[0].abs() < 1e-9 && (f[1] + 1.0).abs() < 1e-9 && f[2].abs() < 1e-9);
                assert_eq!(jacobian_rank(&u, &v, SVD_RANK), 3);
            }
        }
    }

    #[test]
    fn tangent_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for orbit in [ChamberOrbit::Minus, ChamberOrbit::Plus] {
            for _ in 0..50 {
                let (_, _, p) = random_mq7(&mut rng, orbit);
                assert_eq!(mq7_tangent_dimension(&p, SVD_RANK), 7);
                let (_, _, p) = random_mq5_via_f(&mut rng, orbit).unwrap();
                assert_eq!(mq5_tangent_dimension(&p, SVD_RANK), 5);
            }
        }
    }
}
