use num_bigint::BigUint;
use proptest::prelude::*;
use vdw_core::bounds::{
    a_of, binary_power_check, k_from_a, n_from_a, relative_eq, sqrt_implication_check, square_test,
    trichotomy_check, PowerBound, REAL_TOLERANCE,
};
use vdw_core::expansion::exponent_n;
use vdw_core::registry::{Registry, Source, VdwRecord};

#[test]
fn square_test_sides_always_agree() {
    for n in 0..=200u64 {
        for k in 0..=20u64 {
            let t = square_test(n, k);
            assert!(t.agree(), "n={n} k={k}");
            assert_eq!(t.rhs, k * k > n + 1);
        }
    }
}

fn record() -> impl Strategy<Value = VdwRecord> {
    (2u64..50, 3u64..50, 0u64..1_000_000, "[ -~]{0,20}").prop_map(|(r, k, extra, note)| VdwRecord {
        r,
        k,
        w: r.max(k) + 1 + extra,
        source: Source::ComputedBySearch,
        note,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn sqrt_implication_on_random_triples(r in 2u64..=64, k in 2u64..=64, n in 0u64..=512) {
        let a = a_of(n, r, k).unwrap();
        let c = sqrt_implication_check(r, k, n, a);
        prop_assert!(c.holds(), "{:?}", c);
        prop_assert_eq!(c.conclusion, k * k > n + 1);
    }

    #[test]
    fn sqrt_implication_at_exact_squares(r in 2u64..=64, k in 2u64..=64) {
        let n = k * k - 1;
        let c = sqrt_implication_check(r, k, n, a_of(n, r, k).unwrap());
        prop_assert!(c.holds(), "{:?}", c);
    }

    #[test]
    fn a_roundtrips(r in 2u64..=64, k in 2u64..=64, n in 0u64..=512) {
        let a = a_of(n, r, k).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!(relative_eq(n_from_a(a, r, k).unwrap(), n as f64, REAL_TOLERANCE));
        prop_assert!(relative_eq(k_from_a(a, r, n).unwrap(), k as f64, REAL_TOLERANCE));
    }

    #[test]
    fn trichotomy_follows_r_against_k(r in 2u64..=64, k in 2u64..=64, n in 0u64..=64) {
        let a = a_of(n, r, k).unwrap();
        prop_assert!(trichotomy_check(a, n, r, k).holds);
    }

    #[test]
    fn power_comparison_matches_big_integers(base in 2u64..=20, exp in 0u64..=40, w in 1u64..u64::MAX) {
        let p = PowerBound::new(base, exp).unwrap();
        let exact = BigUint::from(base).pow(exp as u32);
        prop_assert_eq!(p.exceeds(w), BigUint::from(w) < exact);
    }

    #[test]
    fn binary_power_bound_on_brackets(w in 2u64..1_000_000) {
        let n = u64::from(exponent_n(w, 2).unwrap());
        // Any k with k^2 >= n + 1 gives W < 2^(n+1) <= 2^(k^2).
        let k = (1..).find(|k: &u64| k * k > n).unwrap();
        prop_assert!(binary_power_check(w, k).unwrap().holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn registry_roundtrip(records in prop::collection::vec(record(), 0..12)) {
        let mut reg = Registry::default();
        for rec in records {
            let _ = reg.append(rec);
        }
        let text = reg.to_csv();
        let back: Registry = text.parse().unwrap();
        prop_assert_eq!(&back, &reg);
        prop_assert_eq!(back.to_csv(), text);
    }
}
