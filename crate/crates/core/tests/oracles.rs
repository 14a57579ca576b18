use std::collections::BTreeSet;

use logdp::search::SearchOptions;
use logdp::wps::{monomials_of_degree, validate_weights, WeightVector};
use logdp::{brute_force_oracle, run_search};
use proptest::prelude::*;

/// Coefficients of prod 1/(1 - t^a_i) up to t^max.
fn hilbert_series(weights: &[u64], max: usize) -> Vec<u64> {
    let mut c = vec![0u64; max + 1];
    c[0] = 1;
    for &a in weights {
        for m in a as usize..=max {
            c[m] += c[m - a as usize];
        }
    }
    c
}

#[test]
fn small_oracles() {
    let ws = |v: &[[i64; 4]]| v.iter().map(|&a| validate_weights(a).unwrap()).collect::<BTreeSet<_>>();
    assert_eq!(
        brute_force_oracle(5),
        ws(&[[1, 1, 1, 1], [1, 1, 1, 2], [1, 1, 2, 3], [2, 3, 3, 5], [1, 2, 3, 5], [3, 3, 5, 5]])
    );
    assert!(brute_force_oracle(0).is_empty());
}

#[test]
fn search_agrees_with_the_exhaustive_scan_up_to_150() {
    let out = run_search(&SearchOptions::default()).unwrap();
    let oracle = brute_force_oracle(150);
    let restricted = out.restricted_to(150);
    assert_eq!(restricted, oracle);
    // 22 sporadic rows and the series members with 4k+1 <= 150
    assert_eq!(oracle.len(), 22 + 37);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomial_counts_match_the_hilbert_series(a in prop::array::uniform4(1i64..40)) {
        let Ok(w) = validate_weights(a) else { return Ok(()) };
        let c = hilbert_series(&w.weights(), 120);
        for m in 0..=120i64 {
            prop_assert_eq!(monomials_of_degree(&w, m).len() as u64, c[m as usize]);
        }
    }

    #[test]
    fn validation_ignores_order(a in prop::array::uniform4(-5i64..60), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let b: [i64; 4] = std::array::from_fn(|i| a[perm[i]]);
        prop_assert_eq!(validate_weights(a), validate_weights(b));
    }

    #[test]
    fn oracle_members_are_sorted_and_valid(n in 1u64..25) {
        for w in brute_force_oracle(n) {
            let a = w.as_i64();
            prop_assert_eq!(WeightVector::new(a), Ok(w));
            prop_assert!(w.weight(3) <= n);
        }
    }
}
