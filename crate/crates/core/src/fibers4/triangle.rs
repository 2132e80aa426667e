use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exactgeom::{solve_affine_system, AffineSolution, Rational, RationalVector};
use crate::moment::a_matrix;

use super::ChamberOrbit;

/// One edge `I_i = {x_i = 0}` of the triangle `P`, with its endpoints and the
/// point where the image of the Grassmann fiber meets it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleEdge {
    /// The coordinate that vanishes on the edge (0, 1 or 2).
    pub index: usize,
    pub endpoints: [RationalVector; 2],
    pub curve_point: RationalVector,
}

impl TriangleEdge {
    /// `endpoints[0] + s (endpoints[1] - endpoints[0])`.
    pub fn at(&self, s: Rational) -> RationalVector {
        let d = self.endpoints[1].checked_sub(&self.endpoints[0]).expect("same length");
        self.endpoints[0].checked_add(&d.scale(s)).expect("same length")
    }
}

/// Exact description of `P = mu_hat(M_Q^7)`: the solution space of `A x = Q`
/// intersected with the standard simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleP {
    /// General solution of `A x = Q` with `x4, x5` free.
    pub solution: AffineSolution,
    /// `X01, X02, X12`, where `X_ij` has `x_i = x_j = 0`.
    pub vertices: [RationalVector; 3],
    pub edges: [TriangleEdge; 3],
}

impl TriangleP {
    /// The curve points `X0, X1, X2` on edges `I0, I1, I2`.
    pub fn curve_points(&self) -> [RationalVector; 3] {
        std::array::from_fn(|i| self.edges[i].curve_point.clone())
    }
}

fn unit_row(k: usize) -> Vec<Rational> {
    (0..6).map(|j| if j == k { Rational::one() } else { Rational::zero() }).collect()
}

/// Solves `A x = Q` with `x_i = 0` for each `i` in `zeros`; the solution must
/// be unique.
fn vertex(q: &[Rational], zeros: &[usize]) -> Result<RationalVector> {
    let mut a = a_matrix(4);
    let mut b = q.to_vec();
    for &k in zeros {
        a.push(unit_row(k));
        b.push(Rational::zero());
    }
    match solve_affine_system(&a, &b)? {
        Some(sol) if sol.free.is_empty() => Ok(sol.particular),
        _ => Err(Error::NoSolution(format!("no unique vertex with zeros at {zeros:?}"))),
    }
}

/// Pairs `((a, b), (c, d))` such that the modulus relation on edge `I_i`
/// reads `x_a x_b = x_c x_d`: the two products of the Plücker relation that
/// survive when `z_i = 0`.
fn surviving_products(i: usize) -> ((usize, usize), (usize, usize)) {
    match i {
        0 => ((2, 3), (1, 4)),
        1 => ((0, 5), (2, 3)),
        _ => ((0, 5), (1, 4)),
    }
}

/// The point of an edge where `x_a x_b = x_c x_d`. Along the edge this is
/// a polynomial of degree at most two in the parameter; on P its quadratic
/// part cancels, leaving one rational root.
fn curve_point_on(p0: &RationalVector, p1: &RationalVector, i: usize) -> Result<RationalVector> {
    let ((a, b), (c, d)) = surviving_products(i);
    let dir = p1.checked_sub(p0)?;
    // (p_a + s d_a)(p_b + s d_b) - (p_c + s d_c)(p_d + s d_d)
    let quad = dir[a] * dir[b] - dir[c] * dir[d];
    let lin = p0[a] * dir[b] + dir[a] * p0[b] - p0[c] * dir[d] - dir[c] * p0[d];
    let cons = p0[a] * p0[b] - p0[c] * p0[d];
    if !quad.is_zero() {
        return Err(Error::Unsupported("edge relation is genuinely quadratic".into()));
    }
    if lin.is_zero() {
        return Err(Error::NoSolution(format!("edge {i} relation is constant")));
    }
    let s = -cons / lin;
    if s.is_negative() || s > Rational::one() {
        return Err(Error::NoSolution(format!("edge {i} root {s} outside the edge")));
    }
    p0.checked_add(&dir.scale(s))
}

/// The triangle `P` over the regular value of the given orbit, in base
/// coordinates.
pub fn solve_triangle_p() -> Result<TriangleP> {
    let q = ChamberOrbit::Minus.q();
    let solution = solve_affine_system(&a_matrix(4), q.entries())?
        .ok_or_else(|| Error::NoSolution("A x = Q is inconsistent".into()))?;
    let x01 = vertex(q.entries(), &[0, 1])?;
    let x02 = vertex(q.entries(), &[0, 2])?;
    let x12 = vertex(q.entries(), &[1, 2])?;
    // Edge I_i joins the two vertices with x_i = 0.
    let ends = [[x01.clone(), x02.clone()], [x01.clone(), x12.clone()], [x02.clone(), x12.clone()]];
    let edges = ends
        .into_iter()
        .enumerate()
        .map(|(index, endpoints)| {
            let curve_point = curve_point_on(&endpoints[0], &endpoints[1], index)?;
            Ok(TriangleEdge { index, endpoints, curve_point })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TriangleP {
        solution,
        vertices: [x01, x02, x12],
        edges: edges.try_into().expect("three edges"),
    })
}

fn check_domain(x0: f64, x1: f64) -> Result<()> {
    if !(x0 >= -1e-15 && x1 >= -1e-15 && x0 + x1 <= 1.0 / 3.0 + 1e-15) {
        return Err(domain(format!("({x0}, {x1}) is outside x0, x1 >= 0, x0 + x1 <= 1/3")));
    }
    Ok(())
}

/// Square roots of the three products `x0 x5`, `x2 x3`, `x1 x4` on `P`.
fn products(x0: f64, x1: f64) -> [f64; 3] {
    let x0 = x0.max(0.0);
    let x1 = x1.max(0.0);
    let rest = (1.0 / 3.0 - x0 - x1).max(0.0);
    [
        (x0 * (x0 + 1.0 / 9.0)).sqrt(),
        (rest * (rest + 1.0 / 9.0)).sqrt(),
        (x1 * (x1 + 1.0 / 9.0)).sqrt(),
    ]
}

/// `|sqrt(x0 (x0 + 1/9)) + sqrt((1/3 - x0 - x1)(4/9 - x0 - x1)) - sqrt(x1 (x1 + 1/9))|`:
/// the modulus relation with all three products in phase.
pub fn curve_pprime_residual(x0: f64, x1: f64) -> Result<f64> {
    check_domain(x0, x1)?;
    let [r0, c, r1] = products(x0, x1);
    Ok((r0 + c - r1).abs())
}

/// Failure of the three moduli `|z0||z5|, |z2||z3|, |z1||z4|` to close a
/// triangle, which is what `z0 z5 + z2 z3 = z1 z4` requires once phases are
/// free. Zero exactly on the moment image of the Grassmann fiber.
pub fn phase_closure_residual(x0: f64, x1: f64) -> Result<f64> {
    check_domain(x0, x1)?;
    let [r0, c, r1] = products(x0, x1);
    Ok((r0 - c - r1).max(c - r0 - r1).max(r1 - r0 - c).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::q;
    use crate::moment::a_map_exact;

    fn rv(xs: &[(i128, i128)]) -> RationalVector {
        RationalVector::new(xs.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn vertices_and_image() {
        let t = solve_triangle_p().unwrap();
        assert_eq!(t.vertices[0], rv(&[(0, 1), (0, 1), (1, 3), (4, 9), (1, 9), (1, 9)]));
        assert_eq!(t.vertices[1], rv(&[(0, 1), (1, 3), (0, 1), (1, 9), (4, 9), (1, 9)]));
        assert_eq!(t.vertices[2], rv(&[(1, 3), (0, 1), (0, 1), (1, 9), (1, 9), (4, 9)]));
        let qm = ChamberOrbit::Minus.q();
        for v in &t.vertices {
            assert_eq!(a_map_exact(v, 4).unwrap(), qm);
            assert_eq!(v.sum(), Rational::one());
        }
        for e in &t.edges {
            for s in [q(0, 1), q(1, 7), q(1, 2), q(1, 1)] {
                let x = e.at(s);
                assert_eq!(a_map_exact(&x, 4).unwrap(), qm);
                assert!(x[e.index].is_zero());
            }
        }
        assert_eq!(t.solution.free, [4, 5]);
    }

    #[test]
    fn curve_points() {
        let t = solve_triangle_p().unwrap();
        let [x0, x1, x2] = t.curve_points();
        assert_eq!(x0, rv(&[(0, 1), (1, 6), (1, 6), (5, 18), (5, 18), (1, 9)]));
        assert_eq!(x1, rv(&[(1, 6), (0, 1), (1, 6), (5, 18), (1, 9), (5, 18)]));
        assert_eq!(x2, rv(&[(1, 6), (1, 6), (0, 1), (1, 9), (5, 18), (5, 18)]));
        // Edge I0 parametrized by x1: the curve meets it at x1 = 1/6.
        let on_i0 = t.solution.at(&[q(1, 6) + q(1, 9), q(1, 9)]);
        assert_eq!(on_i0, x0);
    }

    #[test]
    fn curve_residuals() {
        assert!(curve_pprime_residual(0.0, 1.0 / 6.0).unwrap() < 1e-12);
        assert!(curve_pprime_residual(1.0 / 6.0, 1.0 / 6.0).unwrap() < 1e-12);
        let at_x1 = curve_pprime_residual(1.0 / 6.0, 0.0).unwrap();
        assert!((at_x1 - 2.0 * (5.0f64 / 108.0).sqrt()).abs() < 1e-12);
        for (a, b) in [(0.0, 1.0 / 6.0), (1.0 / 6.0, 0.0), (1.0 / 6.0, 1.0 / 6.0)] {
            assert!(phase_closure_residual(a, b).unwrap() < 1e-12);
        }
        assert!(phase_closure_residual(0.0, 0.0).unwrap() > 0.1);
        assert!(curve_pprime_residual(0.3, 0.3).is_err());
        assert!(curve_pprime_residual(-0.1, 0.0).is_err());
    }
}
