//! Reference oracles shared by the integration suites. Everything here is
//! deliberately independent of the library's traversal code: breadth-first
//! with an explicit queue, no pruning tricks beyond the continuant bound.

use std::collections::VecDeque;

/// All `(p, q)` convergent pairs of digit strings over `[1, a_max]` with
/// `q <= limit`, as a multiset in breadth-first order.
pub fn bfs_pairs(a_max: u64, limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    // (p_prev, p_cur, q_prev, q_cur), seeded at the empty string.
    let mut queue = VecDeque::new();
    queue.push_back((1u64, 0u64, 0u64, 1u64));
    while let Some((p_prev, p_cur, q_prev, q_cur)) = queue.pop_front() {
        for a in 1..=a_max {
            let q_next = match a.checked_mul(q_cur).and_then(|t| t.checked_add(q_prev)) {
                Some(q) if q <= limit => q,
                _ => continue,
            };
            let p_next = a * p_cur + p_prev;
            out.push((p_next, q_next));
            queue.push_back((p_cur, p_next, q_cur, q_next));
        }
    }
    out
}

pub fn bfs_count(a_max: u64, limit: u64) -> u64 {
    bfs_pairs(a_max, limit).len() as u64
}

/// Distinct continuants visited, sorted.
pub fn bfs_continuants(a_max: u64, limit: u64) -> Vec<u64> {
    let mut qs: Vec<u64> = bfs_pairs(a_max, limit)
        .into_iter()
        .map(|(_, q)| q)
        .collect();
    qs.sort_unstable();
    qs.dedup();
    qs
}

/// SplitMix64: tiny deterministic generator for reproducible sampling.
#[allow(dead_code)]
pub struct SplitMix64(pub u64);

#[allow(dead_code)]
impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, bound)`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}
