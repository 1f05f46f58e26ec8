use proptest::prelude::*;
use vdw_core::search::{
    compute_w, find_witness, find_witness_with, has_mono_ap, verify_unavoidable_exhaustive, Coloring,
    SearchConfig, WitnessFile, WitnessResult,
};

const TWO_POW_20: u64 = 1 << 20;

fn dfs_finds_witness(n: usize, r: usize, k: usize) -> bool {
    match find_witness(n, r, k, u64::MAX).unwrap().result {
        WitnessResult::Found(c) => {
            assert_eq!(c.n_points(), n);
            assert!(!has_mono_ap(&c, k), "n={n} r={r} k={k}: {c}");
            true
        }
        WitnessResult::Refuted => false,
        WitnessResult::Exhausted => unreachable!("unlimited budget"),
    }
}

#[test]
fn search_agrees_with_exhaustive_enumeration() {
    for r in 2usize..=6 {
        for k in 2usize..=5 {
            let mut n = 0;
            while (r as u64).pow(n as u32) <= TWO_POW_20 {
                let unavoidable = verify_unavoidable_exhaustive(n, r, k).unwrap();
                assert_eq!(dfs_finds_witness(n, r, k), !unavoidable, "n={n} r={r} k={k}");
                n += 1;
            }
        }
    }
}

/// Least coloring in lexicographic order with no monochromatic progression,
/// by plain enumeration.
fn least_witness(n: usize, r: usize, k: usize) -> Option<Vec<u8>> {
    let total = (r as u64).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut a = vec![0u8; n];
            for slot in a.iter_mut().rev() {
                *slot = (code % r as u64) as u8;
                code /= r as u64;
            }
            a
        })
        .find(|a| !has_mono_ap(&Coloring::new(r, a.clone()).unwrap(), k))
}

#[test]
fn found_witness_is_lexicographically_least() {
    for (r, k, max_n) in [(2, 3, 9), (3, 3, 11), (2, 4, 16), (4, 2, 5)] {
        for n in 0..=max_n {
            let expected = least_witness(n, r, k);
            let got = match find_witness(n, r, k, u64::MAX).unwrap().result {
                WitnessResult::Found(c) => Some(c.assignment().to_vec()),
                _ => None,
            };
            assert_eq!(got, expected, "n={n} r={r} k={k}");
        }
    }
}

#[test]
fn refutation_is_monotone_around_w() {
    for (r, k, w) in [(2, 3, 9), (3, 3, 27), (2, 4, 35)] {
        for n in w - 3..w {
            assert!(dfs_finds_witness(n, r, k), "n={n}");
        }
        for n in w..w + 3 {
            assert!(!dfs_finds_witness(n, r, k), "n={n}");
        }
    }
}

#[test]
fn computed_witness_survives_file_roundtrip() {
    let out = compute_w(3, 3, &SearchConfig::default()).unwrap();
    let file = WitnessFile::new(3, out.witness.unwrap());
    let back: WitnessFile = file.to_string().parse().unwrap();
    assert_eq!(back, file);
    assert!(back.is_valid());
    assert_eq!(back.coloring.n_points(), 26);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn workers_never_change_find_witness(n in 0usize..40, r in 2usize..=3, k in 3usize..=4, budget in 1u64..5000, workers in 2usize..=6) {
        let one = find_witness(n, r, k, budget).unwrap();
        let many = find_witness_with(n, r, k, budget, workers).unwrap();
        prop_assert_eq!(one, many);
    }

    #[test]
    fn workers_never_change_compute_w(budget in 1u64..20_000, workers in 2usize..=6) {
        let one = compute_w(2, 4, &SearchConfig { budget, ..SearchConfig::default() }).unwrap();
        let many = compute_w(2, 4, &SearchConfig { budget, workers, max_n: None }).unwrap();
        prop_assert_eq!((one.w_value, one.witness, one.nodes_explored), (many.w_value, many.witness, many.nodes_explored));
    }
}
