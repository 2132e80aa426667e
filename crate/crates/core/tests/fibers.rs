use std::f64::consts::TAU;

use grassfiber::fibers4::*;
use grassfiber::moment::{mu_hat, mu_tilde};
use grassfiber::plucker::ProjectivePoint;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Root of `sqrt((1/3 - s)(4/9 - s)) = sqrt(s (s + 1/9))` in `s = r1^2` by bisection.
fn edge_root() -> f64 {
    let g = |s: f64| ((1.0 / 3.0 - s) * (4.0 / 9.0 - s)).sqrt() - (s * (s + 1.0 / 9.0)).sqrt();
    let (mut lo, mut hi) = (0.0, 1.0 / 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn edge_point_matches_bisection() {
    let s = edge_root();
    assert!((s - 1.0 / 6.0).abs() < 1e-12);
    let m = m2_sample(0.0, s.sqrt(), 1).unwrap();
    assert!((m.z1().norm_sqr() - 1.0 / 6.0).abs() < 1e-12);
    let p = f_param(&m, &TorusElement::identity(3)).unwrap();
    let x = mu_hat(&p.projective());
    let x0 = [0.0, 1.0 / 6.0, 1.0 / 6.0, 5.0 / 18.0, 5.0 / 18.0, 1.0 / 9.0];
    assert!(x.0.iter().zip(x0).all(|(a, b)| (a - b).abs() < 1e-10));
}

#[test]
fn magnitudes_agree_with_both_closed_forms() {
    let r = 1.0 / 3f64.sqrt();
    let [m3, m4, m5] = mq7_magnitudes(c(r), c(0.0), c(0.0)).unwrap();
    let (s0, s1, s2) = (1.0 / 3.0, 0.0, 0.0);
    let first = [(s0 + s1 + 4.0 * s2) / 3.0, (s0 + 4.0 * s1 + s2) / 3.0, (4.0 * s0 + s1 + s2) / 3.0];
    let second = [4.0 / 9.0 - s0 - s1, s1 + 1.0 / 9.0, s0 + 1.0 / 9.0];
    for (k, m) in [m3, m4, m5].iter().enumerate() {
        assert!((m * m - first[k]).abs() < 1e-15);
        assert!((m * m - second[k]).abs() < 1e-15);
    }
    assert!((m5 * m5 - 4.0 / 9.0).abs() < 1e-15);
}

#[test]
fn circle_base_points_on_the_quadric() {
    for circle in mq5_fiber_circles() {
        let p = circle.base_point(ChamberOrbit::Minus).unwrap();
        let z = p.coords();
        let relation = z[0] * z[5] + z[2] * z[3] - z[1] * z[4];
        assert!(relation.norm() < 1e-12, "circle {}", circle.index);
        let got = mu_tilde(&p.projective(), 4).unwrap();
        let q = [1.0 / 3.0, 5.0 / 9.0, 5.0 / 9.0, 5.0 / 9.0];
        assert!(got.0.iter().zip(q).all(|(a, b)| (a - b).abs() < 1e-12));
    }
}

#[test]
fn g_map_on_the_circle() {
    let g = g_map(&m3_circle(2, 0.0).unwrap());
    // Equal magnitudes give equal components, so both are 1/sqrt(2).
    let h = 0.5f64.sqrt();
    assert!((g[0] - c(h)).norm() < 1e-15 && (g[1] - c(h)).norm() < 1e-15);
}

#[test]
fn transition_by_substitution() {
    let i = Complex64::new(0.0, 1.0);
    let t = TorusElement::new(vec![i, c(1.0), c(1.0)]).unwrap();
    let p = t.phases();
    let expected = TorusElement::new(vec![p[0] * p[1] / p[2], p[0], p[2]]).unwrap();
    let got = bundle_transition(&t, TransitionDirection::ZeroToOne).unwrap();
    assert!(got.max_diff(&expected) < 1e-15);
    // Cofactor expansion along the last row.
    let m = TransitionMatrix::standard().0;
    let det = m[2][2] * (m[0][0] * m[1][1] - m[0][1] * m[1][0]);
    assert_eq!(det, TransitionMatrix::standard().det());
}

#[test]
fn chart_coordinates_on_fiber() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..300 {
        let (_, _, p) = random_mq5_via_g(&mut rng, ChamberOrbit::Minus).unwrap();
        let a = chart_point(&p).a;
        assert!(a[1].norm() > 1e-10 && a[3].norm() > 1e-10);
        for i in 0..4 {
            for j in i + 1..4 {
                assert!(a[i].norm_sqr() + a[j].norm_sqr() > 1e-20);
            }
        }
    }
}

#[test]
fn certificates_round_trip_through_json() {
    let s = sample_certificates(FiberKind::Mq5, 10, 3, ChamberOrbit::Plus).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    let back: FiberSummary = serde_json::from_str(&text).unwrap();
    assert_eq!(back, s);
}

#[test]
fn phase_closure_residual_vanishes_on_fiber_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..300 {
        let (_, _, p) = random_mq5_via_f(&mut rng, ChamberOrbit::Minus).unwrap();
        let x = mu_hat(&p.projective());
        assert!(phase_closure_residual(x.0[0], x.0[1]).unwrap() < 1e-9);
    }
}

fn unit() -> impl Strategy<Value = Complex64> {
    (0.0..TAU).prop_map(|a| Complex64::from_polar(1.0, a))
}

proptest! {
    #[test]
    fn f_round_trip(r0 in 0.0f64..0.577, r1 in 0.0f64..0.577, up in any::<bool>(), t in prop::array::uniform3(unit())) {
        prop_assume!(r0 * r0 + r1 * r1 <= 1.0 / 3.0);
        let Ok(m) = m2_sample(r0, r1, if up { 1 } else { -1 }) else { return Ok(()) };
        let t = TorusElement::new(t.to_vec()).unwrap();
        let p = f_param(&m, &t).unwrap();
        prop_assert!(p.plucker_residual() < 1e-10 && p.moment_residual() < 1e-10);
        let (m2, t2) = f_preimage(&p).unwrap();
        prop_assert!(f_param(&m2, &t2).unwrap().max_diff(&p) < 1e-10);
    }

    #[test]
    fn h_is_torus_equivariant(seed in any::<u64>(), tau in prop::array::uniform5(unit())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s, t, p) = random_mq7(&mut rng, ChamberOrbit::Minus);
        let [t1, t2, t3, t4, t5] = tau;
        let moved = SpherePoint::new(s.z[0] * t1, s.z[1] * t2, s.z[2] * t3).unwrap();
        let tt = TorusElement::new(vec![t.phases()[0] * t4, t.phases()[1] * t5]).unwrap();
        let lhs = h_param(&moved, &tt).unwrap();
        let rhs = p.act(&[t1, t2, t3, c(1.0), t4, t5]).unwrap();
        prop_assert!(lhs.max_diff(&rhs) < 1e-10);
    }

    #[test]
    fn hopf_and_g_are_compatible(seed in any::<u64>(), lam in unit()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = m3_sample(&mut rng).unwrap();
        let q = hopf_q(&m);
        let cs = q.coords();
        prop_assert!((cs[0] - cs[1] - cs[2]).norm() < 1e-10);
        let g = g_map(&m);
        let gl = g_map(&m.rotate(lam));
        prop_assert!((gl[0] - lam * g[0]).norm() < 1e-10 && (gl[1] - lam * g[1]).norm() < 1e-10);
        let first_two = ProjectivePoint::new(cs[..2].to_vec()).unwrap();
        prop_assert!(ProjectivePoint::new(g.to_vec()).unwrap().distance(&first_two) < 1e-10);
    }

    #[test]
    fn complete_intersection_values(seed in any::<u64>(), plus in any::<bool>()) {
        let orbit = if plus { ChamberOrbit::Plus } else { ChamberOrbit::Minus };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, _, p) = random_mq5_via_g(&mut rng, orbit).unwrap();
        let (u, v) = chart_point(&p).split();
        let f = complete_intersection_f(&u, &v);
        prop_assert!(f[0].abs() < 1e-9 && (f[1] + 1.0).abs() < 1e-9 && f[2].abs() < 1e-9);
        prop_assert_eq!(jacobian_rank(&u, &v, 1e-6), 3);
        prop_assert!(jacobian(&u, &v).max_diff(&fd_jacobian(&u, &v, 1e-6)) < 1e-6);
    }
}
