use digitsum_core::arith::{rat, CycloField, CycloNum, Rational};
use digitsum_core::digits::{digit_sum, digit_sum_table};
use digitsum_core::findiff::{lhs_sum, weighted_rhs};
use digitsum_core::pte::{cancel_common, Classes, generalized_partition, verify_power_sums};
use digitsum_core::RationalPoly;
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn element(b: u32) -> impl Strategy<Value = CycloNum> {
    let field = CycloField::get(b).unwrap();
    proptest::collection::vec(small_rational(), field.degree()).prop_map(move |c| field.from_poly(c))
}

fn triple() -> impl Strategy<Value = (CycloNum, CycloNum, CycloNum)> {
    (2u32..=12).prop_flat_map(|b| (element(b), element(b), element(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &a), &a.field().zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn digit_recurrence(b in 2u32..=16, n in 0u64..1_000_000) {
        let expect = digit_sum(n / b as u64, b).unwrap() + (n % b as u64) as u32;
        prop_assert_eq!(digit_sum(n, b).unwrap(), expect);
    }

    #[test]
    fn streaming_matches_direct(b in 2u32..=7, len in 1usize..2000) {
        let table = digit_sum_table(b, len).unwrap();
        for (n, s) in table.iter().enumerate() {
            prop_assert_eq!(*s, digit_sum(n as u64, b).unwrap());
        }
    }

    #[test]
    fn generalized_pte_holds(
        (b, order) in prop_oneof![Just((2u32, 2u32)), Just((2, 3)), Just((2, 4)), Just((3, 2)), Just((4, 2)), Just((3, 3))],
        x in small_rational(),
        y in small_rational(),
    ) {
        let p = generalized_partition(b, order, &x, &y).unwrap();
        prop_assert!(verify_power_sums(&p, order - 1).valid);
        let r = cancel_common(&p);
        prop_assert!(r.reduced_size() <= p.total_size());
        let full = verify_power_sums(&p, order + 2);
        let reduced = verify_power_sums(&r, order + 2);
        // Cancelling shared values shifts every class by the same amount.
        for k in 0..=(order + 2) as usize {
            let same_full = full.power_sums.iter().all(|row| row[k] == full.power_sums[0][k]);
            let same_reduced = reduced.power_sums.iter().all(|row| row[k] == reduced.power_sums[0][k]);
            prop_assert_eq!(same_full, same_reduced);
        }
    }

    #[test]
    fn weighted_difference_random(
        (b, order) in prop_oneof![Just((2u32, 1u32)), Just((2, 3)), Just((3, 2)), Just((4, 2)), Just((5, 1))],
        coeffs in proptest::collection::vec(small_rational(), 1..7),
        x in small_rational(),
        y in small_rational(),
    ) {
        let f = RationalPoly::new(coeffs);
        prop_assert_eq!(lhs_sum(&f, &x, &y, b, order).unwrap(), weighted_rhs(&f, &x, &y, b, order).unwrap());
    }
}
