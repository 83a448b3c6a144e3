//! Shared inputs for the criterion benchmarks.

/// (a_max, limit) pairs spanning the regimes the benchmarks care about:
/// Fibonacci-thin, the classic bound-2 sieve, and a bushy bound-5 tree.
pub const ORBIT_CASES: &[(u64, u64)] = &[(1, 1_000_000), (2, 100_000), (5, 3_000)];
