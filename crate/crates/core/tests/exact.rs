use grassfiber::exactgeom::{convex_membership, q, solve_affine_system, Membership, Rational, RationalVector};
use grassfiber::moment::{a_matrix, mu_tilde, weight_vectors};
use grassfiber::plucker::{from_chart, plucker_embed, plucker_relation_residual, ChartCoords4, GrassmannPoint};
use grassfiber::regularity::{is_regular_mu, is_regular_mu_tilde, stabilizer_dim, StratumSupport};
use num_complex::Complex64;
use proptest::prelude::*;

fn rv(xs: &[(i128, i128)]) -> RationalVector {
    RationalVector::new(xs.iter().map(|&(a, b)| q(a, b)).collect())
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn n5_example_weights_reproduce_the_point() {
    let x = rv(&[(7, 10), (6, 10), (5, 10), (1, 10), (1, 10)]);
    let w = weight_vectors(5).unwrap();
    let labels = ["12", "13", "23", "45"];
    let s: Vec<RationalVector> = labels
        .iter()
        .map(|l| w.iter().find(|v| v.label() == *l).unwrap().to_rational())
        .collect();
    let lambda = [q(4, 10), q(3, 10), q(2, 10), q(1, 10)];
    // Exact matrix-vector product of the vertex matrix with the weights.
    let prod: Vec<Rational> = (0..5).map(|i| (0..4).map(|k| s[k][i] * lambda[k]).sum()).collect();
    assert_eq!(RationalVector::new(prod), x);
    match convex_membership(&x, &s).unwrap() {
        Membership::Member(l) => assert_eq!(l, lambda),
        Membership::NotMember => panic!("expected membership"),
    }
    assert!(is_regular_mu(&x, 5).unwrap());
    assert!(!is_regular_mu_tilde(&x, 5).unwrap());
    let sigma: Vec<usize> = labels
        .iter()
        .map(|l| w.iter().position(|v| v.label() == *l).unwrap())
        .collect();
    let r = stabilizer_dim(&StratumSupport::new(sigma, 5).unwrap()).unwrap();
    assert_eq!((r.dim_polytope, r.dim_stabilizer), (3, 2));
}

#[test]
fn triangle_parametrization_with_free_x4_x5() {
    let a = a_matrix(4);
    let b = [q(1, 3), q(5, 9), q(5, 9), q(5, 9)];
    let sol = solve_affine_system(&a, &b).unwrap().unwrap();
    assert_eq!(sol.free, [4, 5]);
    for (x4, x5) in [(q(0, 1), q(0, 1)), (q(1, 9), q(2, 9)), (q(7, 3), q(-1, 5))] {
        let x = sol.at(&[x4, x5]);
        let expected = [q(-1, 9) + x5, q(-1, 9) + x4, q(5, 9) - x4 - x5, q(2, 3) - x4 - x5, x4, x5];
        assert_eq!(x.entries(), expected);
    }
}

/// 2 x 2 minors by the Leibniz formula over the two rows.
fn minors_by_hand(r0: &[Complex64], r1: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for i in 0..r0.len() {
        for j in i + 1..r0.len() {
            out.push(r0[i] * r1[j] - r1[i] * r0[j]);
        }
    }
    out
}

#[test]
fn embedding_matches_hand_minors() {
    let r0 = vec![c(1.), c(0.), c(1.), c(0.)];
    let r1 = vec![c(0.), c(1.), c(0.), c(1.)];
    let m = minors_by_hand(&r0, &r1);
    let expected = [1.0, 0.0, 1.0, -1.0, 0.0, 1.0];
    assert!(m.iter().zip(expected).all(|(a, b)| (a - c(b)).norm() < 1e-15));
    let p = plucker_embed(&GrassmannPoint::new(r0, r1).unwrap()).unwrap();
    assert!(p.coords().iter().zip(expected).all(|(a, b)| (a - c(b / 2.0)).norm() < 1e-12));
}

#[test]
fn moment_of_equal_weight_n5_point() {
    let mut z = vec![c(0.0); 10];
    for k in [0, 1, 4, 9] {
        z[k] = c(0.5);
    }
    let p = grassfiber::plucker::ProjectivePoint::new(z).unwrap();
    let got = mu_tilde(&p, 5).unwrap();
    let x = [0.5, 0.5, 0.5, 0.25, 0.25];
    assert!(got.0.iter().zip(x).all(|(a, b)| (a - b).abs() < 1e-12));
}

proptest! {
    #[test]
    fn chart_images_satisfy_the_relation(a in prop::array::uniform8(-3.0f64..3.0)) {
        let chart = ChartCoords4::from_real([a[0], a[1], a[2], a[3]], [a[4], a[5], a[6], a[7]]);
        let l = from_chart(&chart);
        let (r0, r1) = l.rows();
        let hand = minors_by_hand(r0, r1);
        prop_assert!(hand.iter().zip(l.minors()).all(|(x, y)| (x - y).norm() < 1e-12));
        let p = plucker_embed(&l).unwrap();
        prop_assert!(plucker_relation_residual(&p).unwrap() < 1e-12);
    }
}
