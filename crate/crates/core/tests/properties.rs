//! Cross-module invariants checked against brute-force oracles and by
//! property testing.

mod common;

use common::{bfs_continuants, bfs_count, bfs_pairs};
use proptest::prelude::*;
use std::collections::HashSet;
use zaremba_core::{
    cf_eval, cf_expand, continuant_bitset, enumerate, exp_sum_many, orbit_count,
    rational_membership, to_matrix, ArcPoint, Digits, ExecOptions,
};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[test]
fn roundtrip_exhaustive_small() {
    for q in 1..=300u64 {
        for p in 0..=q {
            if gcd(p, q) != 1 {
                continue;
            }
            let digits = cf_expand(p, q).unwrap();
            let ev = cf_eval(&digits).unwrap();
            assert_eq!((ev.pair.p, ev.pair.q), (p, q));
        }
    }
}

proptest! {
    /// Expansion and evaluation invert each other on coprime pairs.
    #[test]
    fn roundtrip_random(q in 1..=100_000u64, p_seed in 0u64..=100_000) {
        let p = p_seed % (q + 1);
        let g = gcd(p.max(1), q);
        let (p, q) = (p / g, q / g);
        prop_assume!(gcd(p, q) == 1 && p <= q);
        let digits = cf_expand(p, q).unwrap();
        prop_assert!(digits.is_canonical());
        let ev = cf_eval(&digits).unwrap();
        prop_assert_eq!((ev.pair.p, ev.pair.q), (p, q));
    }

    /// The generator product carries the convergents in its columns and has
    /// determinant (-1)^k.
    #[test]
    fn matrix_equivalence(entries in prop::collection::vec(1..=5u64, 0..=12)) {
        let digits = Digits::new(entries.clone()).unwrap();
        let ev = cf_eval(&digits).unwrap();
        let m = to_matrix(&digits).unwrap();
        prop_assert_eq!(m.second_column(), (ev.pair.p, ev.pair.q));
        let prev = &ev.convergents[ev.convergents.len().saturating_sub(2)];
        if !digits.is_empty() {
            prop_assert_eq!(m.first_column(), (prev.p, prev.q));
        }
        let expected_det = if entries.len() % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(m.det(), expected_det);
    }

    /// Continuants grow at least as fast as Fibonacci numbers.
    #[test]
    fn continuant_fibonacci_growth(entries in prop::collection::vec(1..=6u64, 1..=20)) {
        let digits = Digits::new(entries).unwrap();
        let ev = cf_eval(&digits).unwrap();
        let mut fib = (1u64, 1u64); // F_1, F_2
        for _ in 1..digits.len() {
            fib = (fib.1, fib.0 + fib.1);
        }
        prop_assert!(ev.pair.q >= fib.1, "q = {} below F_{}", ev.pair.q, digits.len() + 1);
    }
}

/// `rational_membership` answers exactly like an exhaustive enumeration of
/// every bounded digit string (the two code paths share nothing).
#[test]
fn two_representation_completeness() {
    for a_max in 1..=3u64 {
        let reachable: HashSet<(u64, u64)> = bfs_pairs(a_max, 500).into_iter().collect();
        for q in 1..=500u64 {
            for p in 1..=q {
                if gcd(p, q) != 1 {
                    continue;
                }
                let by_expansion = rational_membership(p, q, a_max).unwrap().is_some();
                let by_enumeration = reachable.contains(&(p, q));
                assert_eq!(
                    by_expansion, by_enumeration,
                    "disagreement at p/q = {p}/{q}, a_max = {a_max}"
                );
            }
        }
    }
}

/// Pruned depth-first counts match the naive breadth-first reference.
#[test]
fn pruning_is_exact() {
    for a_max in 1..=3u64 {
        for limit in (1..=60).chain([100, 250, 500]) {
            assert_eq!(
                orbit_count(a_max, limit).unwrap(),
                bfs_count(a_max, limit),
                "a_max = {a_max}, limit = {limit}"
            );
        }
    }
}

#[test]
fn bitset_matches_bfs_membership() {
    for (a_max, limit) in [(2u64, 300u64), (3, 300)] {
        let set = continuant_bitset(a_max, limit).unwrap();
        let members: Vec<u64> = set.iter_members().collect();
        assert_eq!(members, bfs_continuants(a_max, limit));
    }
}

#[test]
fn enumeration_order_is_lexicographic_dfs() {
    let mut strings: Vec<Vec<u64>> = Vec::new();
    enumerate(2, 30, |node| strings.push(node.digits.to_vec())).unwrap();
    let mut sorted = strings.clone();
    // Lexicographic order with the prefix-before-extension convention is
    // exactly what Vec::sort gives on the digit vectors.
    sorted.sort();
    assert_eq!(strings, sorted);
    let unique: HashSet<_> = strings.iter().cloned().collect();
    assert_eq!(unique.len(), strings.len(), "a string was visited twice");
}

/// Averaging `|S(j/M)|^2` over a full residue level recovers the continuant
/// multiset autocorrelation when `M` exceeds every continuant.
#[test]
fn mean_square_identity_small_scale() {
    let (a_max, limit, modulus) = (2u64, 10u64, 64u64);
    let points: Vec<ArcPoint> = (0..modulus)
        .map(|j| ArcPoint::rational(j, modulus).unwrap())
        .collect();
    let sums = exp_sum_many(a_max, limit, &points, &ExecOptions::serial()).unwrap();
    let mean_square: f64 = sums.iter().map(|v| v.abs() * v.abs()).sum::<f64>() / modulus as f64;

    // Brute-force autocorrelation of the continuant multiset.
    let mut counts = std::collections::HashMap::new();
    for (_, q) in bfs_pairs(a_max, limit) {
        *counts.entry(q).or_insert(0u64) += 1;
    }
    let autocorrelation: u64 = counts.values().map(|&c| c * c).sum();
    assert!(
        (mean_square - autocorrelation as f64).abs() < 1e-9 * autocorrelation as f64,
        "mean square {mean_square} vs autocorrelation {autocorrelation}"
    );
}

/// The empirical counting exponent at bound 3 lands on 2*delta_3.
#[test]
fn counting_fit_matches_dimension_at_bound_three() {
    let fit = zaremba_core::counting_fit(3, &[1_000, 10_000, 100_000, 1_000_000]).unwrap();
    let gap = (fit.slope - fit.reference).abs();
    assert!(
        gap <= 0.05,
        "slope {} vs reference {}",
        fit.slope,
        fit.reference
    );
}

/// Mass concentrates on low-denominator frequencies: the ratio at 1/2
/// dominates the mean ratio over the denominator-7 rows.
#[test]
fn major_arc_mass_concentration() {
    let profile = zaremba_core::arc_profile(2, 100_000, 8).unwrap();
    let half = profile
        .rows
        .iter()
        .find(|row| (row.r, row.s) == (1, 2))
        .unwrap()
        .ratio;
    let sevens: Vec<f64> = profile
        .rows
        .iter()
        .filter(|row| row.s == 7)
        .map(|row| row.ratio)
        .collect();
    assert_eq!(sevens.len(), 6);
    let mean = sevens.iter().sum::<f64>() / sevens.len() as f64;
    assert!(half > mean, "ratio(1/2) = {half} vs mean(s=7) = {mean}");
}

/// Monotonicity of the whole sieve in the digit bound.
#[test]
fn bitsets_nested_in_bound() {
    let limit = 2_000;
    let mut prev = continuant_bitset(1, limit).unwrap();
    for a_max in 2..=5 {
        let next = continuant_bitset(a_max, limit).unwrap();
        assert!(
            prev.is_subset_of(&next),
            "Q_{} not inside Q_{}",
            a_max - 1,
            a_max
        );
        prev = next;
    }
}
