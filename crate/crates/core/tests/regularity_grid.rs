use grassfiber::exactgeom::{arrangement_for_n, q, sign_vector, Rational, RationalVector};
use grassfiber::regularity::{classify_grid, rational_grid};
use proptest::prelude::*;

fn rv(xs: &[(i128, i128)]) -> RationalVector {
    RationalVector::new(xs.iter().map(|&(a, b)| q(a, b)).collect())
}

#[test]
fn n4_regular_sets_coincide_on_grid() {
    let grid = rational_grid(4, 18);
    assert!(grid.len() >= 1000);
    let v = classify_grid(&grid, 4).unwrap();
    assert!(v.iter().all(|(a, b)| a == b));
    assert!(v.iter().any(|(a, _)| *a) && v.iter().any(|(a, _)| !*a));
}

#[test]
fn n5_tilde_regular_implies_regular() {
    let full = rational_grid(5, 15);
    let step = (full.len() / 1200).max(1);
    let grid: Vec<RationalVector> = full.into_iter().step_by(step).collect();
    assert!(grid.len() >= 1000);
    let v = classify_grid(&grid, 5).unwrap();
    assert!(v.iter().all(|(mu, tilde)| !tilde || *mu));
    assert!(v.iter().any(|(mu, tilde)| *mu && !tilde));
}

#[test]
fn second_orbit_point_is_regular_for_both() {
    let x = rv(&[(2, 3), (4, 9), (4, 9), (4, 9)]);
    let v = classify_grid(&[x], 4).unwrap();
    assert_eq!(v, [(true, true)]);
}

fn hypersimplex_point(n: usize) -> impl Strategy<Value = RationalVector> {
    // Numerators in [0, d] nudged one unit at a time until they sum to 2d.
    prop::collection::vec(0i128..=12, n).prop_filter_map("not on the slice", move |mut k| {
        let d = 12i128;
        let target = 2 * d;
        let mut sum: i128 = k.iter().sum();
        let mut i = 0;
        while sum != target && i < 20 * n {
            let j = i % n;
            if sum < target && k[j] < d {
                k[j] += 1;
                sum += 1;
            } else if sum > target && k[j] > 0 {
                k[j] -= 1;
                sum -= 1;
            }
            i += 1;
        }
        (sum == target).then(|| RationalVector::new(k.into_iter().map(|v| Rational::new(v, d)).collect()))
    })
}

proptest! {
    #[test]
    fn sign_vector_is_permutation_equivariant(x in hypersimplex_point(5), shift in 1usize..5) {
        let n = 5;
        let arr = arrangement_for_n(n).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let moved = RationalVector::new((0..n).map(|i| x[perm[i]]).collect());
        let mut a: Vec<i8> = sign_vector(&x, &arr).unwrap().signs().to_vec();
        let mut b: Vec<i8> = sign_vector(&moved, &arr).unwrap().signs().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn half_supports_have_opposite_signs(x in hypersimplex_point(6), mask in 0u32..64) {
        let t: Vec<usize> = (0..6).filter(|k| mask & (1 << k) != 0).collect();
        prop_assume!(t.len() == 3);
        let s: Rational = t.iter().map(|&k| x[k]).sum();
        let c: Rational = (0..6).filter(|k| !t.contains(k)).map(|k| x[k]).sum();
        prop_assert_eq!((s - Rational::one()).signum(), -(c - Rational::one()).signum());
    }
}
