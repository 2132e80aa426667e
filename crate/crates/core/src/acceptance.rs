//! The reproduction suite: twelve pass/fail criteria with timings.

use std::time::Instant;

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::exactgeom::{q, relative_interior_membership, Rational, RationalVector};
use crate::fibers4::{
    bundle_transition, chart_point, complete_intersection_f, f_preimage, fd_jacobian, g_preimage, jacobian,
    jacobian_rank, lift_f, mq5_fiber_circles, mq5_tangent_dimension, mq7_tangent_dimension, proj_p,
    random_m2, random_mq5_via_f, random_mq5_via_g, random_mq7, solve_triangle_p, curve_pprime_residual,
    h_preimage, verify_chart_coverage, ChamberOrbit, M2Point, MQ5Point, SpherePoint, TorusElement,
    TransitionDirection, TransitionMatrix,
};
use crate::moment::{a_map_exact, mu_hat, weight_vertices};
use crate::plucker::ProjectivePoint;
use crate::regularity::{
    center_point_regular, classify_grid, enumerate_chambers, is_regular_mu, rational_grid, s4_chamber_orbits,
    MuTildeRegularity,
};
use crate::tolerances::{DERIVED, FD_AGREEMENT, FD_STEP, FIBER, FIBER_COORD_FLOOR, SVD_RANK};

/// Criterion ids and short names, in order.
pub const CRITERIA: [(usize, &str); 12] = [
    (1, "chambers"),
    (2, "triangle"),
    (3, "curve"),
    (4, "mq7"),
    (5, "regularity"),
    (6, "oracle"),
    (7, "mq5"),
    (8, "intersection"),
    (9, "transition"),
    (10, "parity"),
    (11, "dimension"),
    (12, "second-orbit"),
];

const SAMPLES: usize = 1000;
const DIMENSION_SAMPLES: usize = 100;
const ORACLE_POINTS: usize = 200;
const REGULARITY_DENOMINATOR: usize = 18;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub millis: f64,
    pub detail: Value,
}

/// Runs the selected criteria (all when `only` is empty), matching by name
/// or number.
pub fn run(seed: u64, only: &[String]) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter(|(id, name)| only.is_empty() || only.iter().any(|o| o == name || o == &id.to_string()))
        .map(|&(id, name)| {
            let start = Instant::now();
            let (pass, detail) = match evaluate(id, seed) {
                Ok(v) => v,
                Err(e) => (false, json!({ "error": e.to_string() })),
            };
            CriterionResult {
                id,
                name,
                pass,
                millis: start.elapsed().as_secs_f64() * 1e3,
                detail,
            }
        })
        .collect()
}

pub fn is_known(name: &str) -> bool {
    CRITERIA.iter().any(|(id, n)| *n == name || id.to_string() == name)
}

fn evaluate(id: usize, seed: u64) -> Result<(bool, Value)> {
    match id {
        1 => chambers(),
        2 => triangle(),
        3 => curve(),
        4 => mq7(seed, ChamberOrbit::Minus),
        5 => regularity(),
        6 => oracle(seed),
        7 => mq5(seed, ChamberOrbit::Minus),
        8 => intersection(seed, ChamberOrbit::Minus),
        9 => transition(seed),
        10 => parity(),
        11 => dimension(seed),
        12 => second_orbit(seed),
        _ => unreachable!("criterion ids are fixed"),
    }
}

fn rv(xs: &[(i128, i128)]) -> RationalVector {
    RationalVector::new(xs.iter().map(|&(a, b)| q(a, b)).collect())
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn chambers() -> Result<(bool, Value)> {
    let ch = enumerate_chambers(4)?;
    let orbits = s4_chamber_orbits()?;
    let sizes: Vec<usize> = orbits.iter().map(|o| o.members.len()).collect();
    let mut labels: Vec<&str> = orbits.iter().map(|o| o.label.as_str()).collect();
    labels.sort_unstable();
    let pass = ch.len() == 8 && ch.iter().all(|c| c.dimension == 3) && sizes == [4, 4] && labels == ["C+", "C-"];
    Ok((pass, json!({ "chambers": ch.len(), "orbit_sizes": sizes, "labels": labels })))
}

fn triangle() -> Result<(bool, Value)> {
    let t = solve_triangle_p()?;
    let expected = [
        rv(&[(0, 1), (0, 1), (1, 3), (4, 9), (1, 9), (1, 9)]),
        rv(&[(0, 1), (1, 3), (0, 1), (1, 9), (4, 9), (1, 9)]),
        rv(&[(1, 3), (0, 1), (0, 1), (1, 9), (1, 9), (4, 9)]),
    ];
    let qm = ChamberOrbit::Minus.q();
    let images_ok = t
        .vertices
        .iter()
        .map(|v| a_map_exact(v, 4))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|y| *y == qm);
    let pass = t.vertices == expected && images_ok;
    let vertices: Vec<String> = t.vertices.iter().map(ToString::to_string).collect();
    Ok((pass, json!({ "vertices": vertices, "a_map_equals_q": images_ok })))
}

fn curve() -> Result<(bool, Value)> {
    let s = 1.0 / 6f64.sqrt();
    let c = |x: f64| Complex64::new(x, 0.0);
    let inputs = [[c(0.0), c(s), c(s)], [c(s), c(0.0), c(s)], [c(s), c(s), c(0.0)]];
    let targets = [
        rv(&[(0, 1), (1, 6), (1, 6), (5, 18), (5, 18), (1, 9)]),
        rv(&[(1, 6), (0, 1), (1, 6), (5, 18), (1, 9), (5, 18)]),
        rv(&[(1, 6), (1, 6), (0, 1), (1, 9), (5, 18), (5, 18)]),
    ];
    let mut worst: f64 = 0.0;
    for (z, x) in inputs.iter().zip(&targets) {
        let p = lift_f(&SpherePoint::new(z[0], z[1], z[2])?)?;
        let got = mu_hat(&p.projective());
        worst = got.0.iter().zip(x.to_f64()).fold(worst, |m, (a, b)| m.max((a - b).abs()));
    }
    let r0 = curve_pprime_residual(0.0, 1.0 / 6.0)?;
    let r2 = curve_pprime_residual(1.0 / 6.0, 1.0 / 6.0)?;
    let pass = worst <= 1e-12 && r0 <= 1e-12 && r2 <= 1e-12;
    Ok((pass, json!({ "moment_deviation": worst, "residual_x0": r0, "residual_x2": r2 })))
}

fn mq7(seed: u64, orbit: ChamberOrbit) -> Result<(bool, Value)> {
    let mut rng = rng_for(seed, 4);
    let (mut moment, mut floor, mut round_trip) = (0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..SAMPLES {
        let (s, t, p) = random_mq7(&mut rng, orbit);
        moment = moment.max(p.moment_residual());
        floor = floor.min(p.min_tail_modulus());
        let (s2, t2) = h_preimage(&p)?;
        round_trip = round_trip.max(s2.max_diff(&s)).max(t2.max_diff(&t));
    }
    let pass = moment <= FIBER && floor >= FIBER_COORD_FLOOR && round_trip <= FIBER;
    Ok((pass, json!({
        "orbit": orbit.label(),
        "samples": SAMPLES,
        "max_moment_residual": moment,
        "min_tail_modulus": floor,
        "max_round_trip": round_trip,
    })))
}

fn regularity() -> Result<(bool, Value)> {
    let grid = rational_grid(4, REGULARITY_DENOMINATOR);
    let verdicts = classify_grid(&grid, 4)?;
    let disagreements = verdicts.iter().filter(|(a, b)| a != b).count();
    let regular = verdicts.iter().filter(|(a, _)| *a).count();
    let x5 = rv(&[(7, 10), (6, 10), (5, 10), (1, 10), (1, 10)]);
    let mu5 = is_regular_mu(&x5, 5)?;
    let tilde5 = MuTildeRegularity::new(5)?.is_regular(&x5)?;
    let pass = disagreements == 0 && mu5 && !tilde5;
    Ok((pass, json!({
        "grid_points": grid.len(),
        "regular_points": regular,
        "disagreements": disagreements,
        "n5_mu_regular": mu5,
        "n5_mu_tilde_regular": tilde5,
    })))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rank of an integer matrix by fraction-free elimination, each row kept
/// primitive.
fn integer_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in rank + 1..rows {
            let (a, b) = (m[rank][c], m[r][c]);
            for k in 0..cols {
                m[r][k] = a * m[r][k] - b * m[rank][k];
            }
            let g = m[r].iter().fold(0, |g, &v| gcd(g, v));
            if g > 1 {
                m[r].iter_mut().for_each(|v| *v /= g);
            }
        }
        rank += 1;
    }
    rank
}

/// Exhaustive check over all 63 supports: `x` is singular for `mu_tilde`
/// exactly when it lies in the relative interior of some admissible
/// polytope of dimension below 3.
fn brute_force_regular(x: &RationalVector, vertices: &[RationalVector], ints: &[Vec<i128>]) -> Result<bool> {
    for mask in 1u32..64 {
        let sigma: Vec<usize> = (0..6).filter(|k| mask & (1 << k) != 0).collect();
        let dim = integer_rank(sigma.iter().map(|&k| ints[k].clone()).collect()) - 1;
        if dim >= 3 {
            continue;
        }
        let s: Vec<RationalVector> = sigma.iter().map(|&k| vertices[k].clone()).collect();
        if relative_interior_membership(x, &s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn oracle(seed: u64) -> Result<(bool, Value)> {
    let grid = rational_grid(4, REGULARITY_DENOMINATOR);
    let mut rng = rng_for(seed, 6);
    let chosen: Vec<RationalVector> = grid.choose_multiple(&mut rng, ORACLE_POINTS).cloned().collect();
    let vertices = weight_vertices(4)?;
    let ints: Vec<Vec<i128>> = vertices.iter().map(|v| v.iter().map(Rational::numer).collect()).collect();
    let tilde = MuTildeRegularity::new(4)?;
    let (mut agree, mut singular) = (0, 0);
    for x in &chosen {
        let brute = brute_force_regular(x, &vertices, &ints)?;
        if brute == tilde.is_regular(x)? {
            agree += 1;
        }
        if !brute {
            singular += 1;
        }
    }
    Ok((agree == chosen.len(), json!({ "points": chosen.len(), "agreements": agree, "singular_points": singular })))
}

fn one_one() -> ProjectivePoint {
    ProjectivePoint::new(vec![Complex64::new(1.0, 0.0); 2]).expect("nonzero")
}

fn mq5(seed: u64, orbit: ChamberOrbit) -> Result<(bool, Value)> {
    let mut rng = rng_for(seed, 7);
    let (mut plucker, mut moment, mut f_trip, mut g_trip) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..SAMPLES {
        let (m, t, p) = random_mq5_via_f(&mut rng, orbit)?;
        plucker = plucker.max(p.plucker_residual());
        moment = moment.max(p.moment_residual());
        let (m2, t2) = f_preimage(&p)?;
        f_trip = f_trip.max(m2.max_diff(&m)).max(t2.max_diff(&t));

        let (m, t, p) = random_mq5_via_g(&mut rng, orbit)?;
        plucker = plucker.max(p.plucker_residual());
        moment = moment.max(p.moment_residual());
        let (m3, t3) = g_preimage(&p)?;
        g_trip = g_trip.max(m3.max_diff(&m)).max(t3.max_diff(&t));
    }
    let collapse = (0..SAMPLES)
        .map(|k| {
            let psi = std::f64::consts::TAU * k as f64 / SAMPLES as f64;
            Ok(proj_p(&M2Point::circle(psi).to_m3())?.distance(&one_one()))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut off_circle: Vec<M2Point> = Vec::with_capacity(SAMPLES + 1);
    while off_circle.len() <= SAMPLES {
        let m = random_m2(&mut rng)?;
        if !m.on_circle() {
            off_circle.push(m);
        }
    }
    let mut min_separation = f64::INFINITY;
    for pair in off_circle.windows(2) {
        if pair[0].max_diff(&pair[1]) > 0.0 {
            let d = proj_p(&pair[0].to_m3())?.chordal_distance(&proj_p(&pair[1].to_m3())?);
            min_separation = min_separation.min(d);
        }
    }
    let pass = plucker <= FIBER
        && moment <= FIBER
        && f_trip <= FIBER
        && g_trip <= FIBER
        && collapse <= FIBER
        && min_separation > 0.0;
    Ok((pass, json!({
        "orbit": orbit.label(),
        "samples_per_map": SAMPLES,
        "max_plucker_residual": plucker,
        "max_moment_residual": moment,
        "max_f_round_trip": f_trip,
        "max_g_round_trip": g_trip,
        "circle_collapse": collapse,
        "min_off_circle_separation": min_separation,
    })))
}

fn fiber_samples(seed: u64, stream: u64, orbit: ChamberOrbit, count: usize) -> Result<Vec<MQ5Point>> {
    let mut rng = rng_for(seed, stream);
    let mut pts = mq5_fiber_circles()
        .iter()
        .map(|c| c.base_point(orbit))
        .collect::<Result<Vec<_>>>()?;
    for k in 0..count {
        let p = if k % 2 == 0 { random_mq5_via_f(&mut rng, orbit)?.2 } else { random_mq5_via_g(&mut rng, orbit)?.2 };
        pts.push(p);
    }
    Ok(pts)
}

fn intersection(seed: u64, orbit: ChamberOrbit) -> Result<(bool, Value)> {
    let pts = fiber_samples(seed, 8, orbit, SAMPLES)?;
    let (mut f_dev, mut fd_dev, mut bad_rank) = (0.0f64, 0.0f64, 0);
    for p in &pts {
        let (u, v) = chart_point(p).split();
        let f = complete_intersection_f(&u, &v);
        f_dev = f_dev.max(f[0].abs()).max((f[1] + 1.0).abs()).max(f[2].abs());
        if jacobian_rank(&u, &v, SVD_RANK) != 3 {
            bad_rank += 1;
        }
        fd_dev = fd_dev.max(jacobian(&u, &v).max_diff(&fd_jacobian(&u, &v, FD_STEP)));
    }
    let pass = f_dev <= DERIVED && bad_rank == 0 && fd_dev <= FD_AGREEMENT;
    Ok((pass, json!({
        "orbit": orbit.label(),
        "points": pts.len(),
        "max_f_deviation": f_dev,
        "rank_failures": bad_rank,
        "max_fd_deviation": fd_dev,
    })))
}

fn transition(seed: u64) -> Result<(bool, Value)> {
    let det = TransitionMatrix::standard().det();
    let mut rng = rng_for(seed, 9);
    let mut cocycle = 0.0f64;
    for _ in 0..SAMPLES {
        let t = TorusElement::random(&mut rng, 3);
        let there = bundle_transition(&t, TransitionDirection::ZeroToOne)?;
        let back = bundle_transition(&there, TransitionDirection::OneToZero)?;
        cocycle = cocycle.max(back.max_diff(&t));
    }
    let pts = fiber_samples(seed, 10, ChamberOrbit::Minus, SAMPLES)?;
    let reports = pts.iter().map(verify_chart_coverage).collect::<Result<Vec<_>>>();
    let (coverage_ok, classification_ok) = match &reports {
        Ok(r) => (
            true,
            r[0].in_m0 && !r[0].in_m1 && r[1].in_m1 && !r[1].in_m0 && r.iter().all(|c| c.in_m0 || c.in_m1),
        ),
        Err(_) => (false, false),
    };
    let pass = det == -1 && cocycle <= 1e-12 && coverage_ok && classification_ok;
    Ok((pass, json!({
        "determinant": det,
        "max_cocycle_deviation": cocycle,
        "coverage_points": pts.len(),
        "coverage_holds": coverage_ok,
        "classification_consistent": classification_ok,
    })))
}

fn parity() -> Result<(bool, Value)> {
    let verdicts: Vec<(usize, bool)> = (4..=10).map(|n| Ok((n, center_point_regular(n)?))).collect::<Result<_>>()?;
    let pass = verdicts.iter().all(|&(n, r)| r == (n % 2 == 1));
    Ok((pass, json!({ "centre_regular": verdicts })))
}

fn dimension(seed: u64) -> Result<(bool, Value)> {
    let mut rng = rng_for(seed, 11);
    let mut d7 = std::collections::BTreeMap::new();
    let mut d5 = std::collections::BTreeMap::new();
    for _ in 0..DIMENSION_SAMPLES {
        let (_, _, p) = random_mq7(&mut rng, ChamberOrbit::Minus);
        *d7.entry(mq7_tangent_dimension(&p, SVD_RANK)).or_insert(0) += 1;
        let (_, _, p) = random_mq5_via_f(&mut rng, ChamberOrbit::Minus)?;
        *d5.entry(mq5_tangent_dimension(&p, SVD_RANK)).or_insert(0) += 1;
    }
    let pass = d7.keys().eq([7].iter()) && d5.keys().eq([5].iter());
    Ok((pass, json!({ "mq7_dimensions": d7, "mq5_dimensions": d5 })))
}

fn second_orbit(seed: u64) -> Result<(bool, Value)> {
    let (p4, d4) = mq7(seed, ChamberOrbit::Plus)?;
    let (p7, d7) = mq5(seed, ChamberOrbit::Plus)?;
    let (p8, d8) = intersection(seed, ChamberOrbit::Plus)?;
    Ok((p4 && p7 && p8, json!({ "mq7": d4, "mq5": d7, "intersection": d8 })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ranks() {
        assert_eq!(integer_rank(vec![vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]), 3);
        assert_eq!(integer_rank(vec![vec![0, 0]]), 0);
    }

    #[test]
    fn cheap_criteria_pass() {
        let r = run(1, &["triangle".into(), "3".into(), "transition".into()]);
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|c| c.pass), "{r:?}");
        assert!(is_known("oracle") && !is_known("nope"));
    }
}
