//! Property-based invariants on randomized inputs.

use frobkit::frobenius::{self, FrobeniusLevel};
use frobkit::lattice::{cokernel_invariants, smith_normal_form, solve_in_image, IntMatrix};
use frobkit::registry;
use frobkit::DEFAULT_CAP;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_certifies(rows in small_matrix()) {
        let a = IntMatrix::from_rows_i64(&rows);
        let s = smith_normal_form(&a);
        let lhs = s.u.mul(&a).mul(&s.v);
        prop_assert_eq!(&lhs, &s.d);
        prop_assert_eq!(s.u.det().abs(), BigInt::from(1));
        prop_assert_eq!(s.v.det().abs(), BigInt::from(1));
        // divisibility chain
        for i in 1..s.rank {
            let prev = s.d.get(i - 1, i - 1);
            prop_assert!(num_traits::Zero::is_zero(&(s.d.get(i, i) % prev)), "chain broken");
        }
    }

    #[test]
    fn cokernel_stable_under_column_permutation(rows in small_matrix()) {
        let a = IntMatrix::from_rows_i64(&rows);
        let mut rev: Vec<Vec<i64>> = rows.clone();
        for row in &mut rev {
            row.reverse();
        }
        let b = IntMatrix::from_rows_i64(&rev);
        prop_assert_eq!(cokernel_invariants(&a), cokernel_invariants(&b));
    }

    #[test]
    fn solve_in_image_witnesses_verify(rows in small_matrix(), x in prop::collection::vec(-3i64..=3, 4)) {
        let a = IntMatrix::from_rows_i64(&rows);
        let x: Vec<BigInt> = x[..a.cols()].iter().map(|&v| BigInt::from(v)).collect();
        let c: Vec<BigInt> = a.mul_vec(&x);
        let sol = solve_in_image(&a, &c).expect("dims fine").expect("c in image by construction");
        prop_assert_eq!(a.mul_vec(&sol), c);
    }

    #[test]
    fn class_of_respects_linear_equivalence(coeffs in prop::collection::vec(-5i64..=5, 2), u in prop::collection::vec(-4i64..=4, 2)) {
        let r = registry::a1(3).unwrap();
        let shifted: Vec<i64> = coeffs
            .iter()
            .zip(r.div_of(&u))
            .map(|(a, d)| a + d)
            .collect();
        prop_assert_eq!(r.class_of(&coeffs), r.class_of(&shifted));
    }

    #[test]
    fn decomposition_conserves_rank(coeffs in prop::collection::vec(-4i64..=4, 2), e in 1u32..=3) {
        let r = registry::a1(3).unwrap();
        let level = FrobeniusLevel::new(3, e);
        let d = frobenius::decompose_pushforward(&r, &coeffs, level, DEFAULT_CAP).unwrap();
        prop_assert_eq!(u128::from(d.total()), level.q() * level.q());
    }

    #[test]
    fn representative_maps_back(c0 in -6i64..=6, c1 in -6i64..=6) {
        let r = registry::quadric3(2).unwrap();
        let class = r.class_of(&[c0, c1, 0, 0]);
        let rep = r.representative(&class);
        prop_assert_eq!(r.class_of(&rep), class);
    }
}
