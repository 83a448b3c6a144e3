//! Depth-first enumeration of the semigroup orbit restricted to continuants
//! below a limit.
//!
//! Every non-empty digit string over `[1, a_max]` whose continuant `q` is at
//! most `limit` is visited exactly once. Pruning is exact: the continuant is
//! strictly increasing along any descent and increasing in each digit, so a
//! subtree is abandoned as soon as its root exceeds the limit.
//!
//! The hot loop keeps the `(q_{k-1}, q_k)` state in place, undoes it on
//! backtrack, and never allocates per node. Parallel runs split the top of
//! the tree: all strings sharing a fixed prefix of length `prefix_len` form
//! an independent subtree. Counts and bitsets merge by integer addition and
//! bitwise OR, so any thread count produces identical results; callers with
//! floating-point accumulators get one partial per prefix and fold them in
//! prefix order.

use crate::cf::Pair;
use crate::error::{Error, Result};
use rayon::prelude::*;

pub const MAX_LIMIT: u64 = 1 << 62;

/// One visited orbit element: the digit string, its convergent pair, and the
/// parent continuant `q_{k-1}`.
#[derive(Debug)]
pub struct OrbitNode<'a> {
    pub digits: &'a [u64],
    pub pair: Pair,
    pub parent_q: u64,
}

/// Execution knobs for the parallel enumerators.
#[derive(Debug, Clone)]
pub struct ExecOptions {
    /// Worker threads; `None` uses the ambient rayon pool, `Some(1)` runs
    /// strictly sequentially.
    pub threads: Option<usize>,
    /// Length of the fixed prefixes that define parallel subtrees.
    pub prefix_len: usize,
    /// Largest bitset, in bits, that [`continuant_bitset_with`] may allocate.
    pub bitset_budget_bits: u64,
}

impl Default for ExecOptions {
    fn default() -> Self {
        ExecOptions {
            threads: None,
            prefix_len: 3,
            bitset_budget_bits: 1 << 31,
        }
    }
}

impl ExecOptions {
    pub fn serial() -> Self {
        ExecOptions {
            threads: Some(1),
            ..ExecOptions::default()
        }
    }

    pub fn with_threads(threads: usize) -> Self {
        ExecOptions {
            threads: Some(threads),
            ..ExecOptions::default()
        }
    }
}

/// The set `Q_A ∩ [1, N]` as a bit array. Bit `q` is set iff some digit
/// string over `[1, a_max]` has continuant `q`; bit 1 is always set by the
/// empty-product convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuantSet {
    a_max: u64,
    limit: u64,
    words: Vec<u64>,
}

impl ContinuantSet {
    fn with_capacity(a_max: u64, limit: u64) -> Self {
        let words = vec![0u64; Self::word_count(limit)];
        let mut set = ContinuantSet {
            a_max,
            limit,
            words,
        };
        set.set_bit(1);
        set
    }

    pub fn word_count(limit: u64) -> usize {
        (limit / 64 + 1) as usize
    }

    /// Rebuild a set from raw words (the on-disk layout). Rejects a word
    /// vector of the wrong length and any set bit outside `[1, limit]`.
    pub fn from_words(a_max: u64, limit: u64, words: Vec<u64>) -> Result<Self> {
        if a_max == 0 {
            return Err(Error::InvalidBound { bound: a_max });
        }
        if limit == 0 || limit > MAX_LIMIT {
            return Err(Error::InvalidLimit { limit });
        }
        if words.len() != Self::word_count(limit) {
            return Err(Error::WordCountMismatch {
                expected: Self::word_count(limit),
                actual: words.len(),
            });
        }
        if words[0] & 1 != 0 {
            return Err(Error::OutOfRangeBit { index: 0 });
        }
        let tail_mask = match limit % 64 {
            63 => !0u64,
            r => (1u64 << (r + 1)) - 1,
        };
        let tail = words[words.len() - 1] & !tail_mask;
        if tail != 0 {
            let index = (words.len() - 1) as u64 * 64 + tail.trailing_zeros() as u64;
            return Err(Error::OutOfRangeBit { index });
        }
        Ok(ContinuantSet {
            a_max,
            limit,
            words,
        })
    }

    pub fn a_max(&self) -> u64 {
        self.a_max
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    fn set_bit(&mut self, q: u64) {
        self.words[(q / 64) as usize] |= 1u64 << (q % 64);
    }

    #[inline]
    pub fn contains(&self, q: u64) -> bool {
        if q > self.limit {
            return false;
        }
        self.words[(q / 64) as usize] >> (q % 64) & 1 == 1
    }

    /// Number of set bits, i.e. `#(Q_A ∩ [1, N])`.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter_members(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.limit).filter(move |&q| self.contains(q))
    }

    pub fn iter_missing(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.limit).filter(move |&q| !self.contains(q))
    }

    /// Bitwise inclusion; both sets must span the same limit.
    pub fn is_subset_of(&self, other: &ContinuantSet) -> bool {
        self.limit == other.limit
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    fn or_assign(&mut self, other: &ContinuantSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }
}

fn validate(a_max: u64, limit: u64) -> Result<()> {
    if a_max == 0 {
        return Err(Error::InvalidBound { bound: a_max });
    }
    if limit == 0 || limit > MAX_LIMIT {
        return Err(Error::InvalidLimit { limit });
    }
    Ok(())
}

/// Continuants at least double every two levels, so the tree depth is
/// bounded by `2*log2(limit) + 2`.
fn depth_cap(limit: u64) -> usize {
    2 * (64 - limit.leading_zeros() as usize) + 2
}

/// Mutable DFS state: digit stack plus the shifted convergent stacks, where
/// slot `k+1` holds `(p_k, q_k)` and slots 0, 1 seed the recurrence.
struct Cursor {
    digits: Vec<u64>,
    ps: Vec<u64>,
    qs: Vec<u64>,
}

impl Cursor {
    fn new(limit: u64) -> Self {
        let cap = depth_cap(limit);
        let mut ps = vec![0u64; cap + 2];
        let mut qs = vec![0u64; cap + 2];
        ps[0] = 1; // p_{-1}
        qs[1] = 1; // q_0
        Cursor {
            digits: vec![0u64; cap],
            ps,
            qs,
        }
    }

    fn seed(&mut self, task: &PrefixTask) {
        let base = task.digits.len();
        self.digits[..base].copy_from_slice(&task.digits);
        self.ps[base] = task.p_parent;
        self.ps[base + 1] = task.p;
        self.qs[base] = task.q_parent;
        self.qs[base + 1] = task.q;
    }
}

/// A length-`prefix_len` string with its convergent state; the root of one
/// parallel subtree.
#[derive(Debug, Clone)]
struct PrefixTask {
    digits: Vec<u64>,
    p_parent: u64,
    p: u64,
    q_parent: u64,
    q: u64,
}

/// Visit every strict extension of the depth-`base` node currently in the
/// cursor. Returns the number of nodes visited.
fn dfs_below<F: FnMut(&OrbitNode)>(
    a_max: u64,
    limit: u64,
    cur: &mut Cursor,
    base: usize,
    visit: &mut F,
) -> u64 {
    let mut count = 0u64;
    let mut k = base;
    let mut a = 1u64;
    loop {
        let mut descended = false;
        if a <= a_max {
            let q_next = a.saturating_mul(cur.qs[k + 1]).saturating_add(cur.qs[k]);
            if q_next <= limit {
                // p <= q along the whole orbit, so p cannot overflow here.
                let p_next = a * cur.ps[k + 1] + cur.ps[k];
                k += 1;
                cur.digits[k - 1] = a;
                cur.qs[k + 1] = q_next;
                cur.ps[k + 1] = p_next;
                count += 1;
                visit(&OrbitNode {
                    digits: &cur.digits[..k],
                    pair: Pair::new_unchecked(p_next, q_next),
                    parent_q: cur.qs[k],
                });
                a = 1;
                descended = true;
            }
        }
        if !descended {
            // Either the digit range is exhausted or every remaining sibling
            // has a larger continuant; pop one level.
            if k == base {
                return count;
            }
            a = cur.digits[k - 1] + 1;
            k -= 1;
        }
    }
}

/// Serial pass over depths `1..prefix_len`; surviving depth-`prefix_len`
/// nodes are recorded as tasks instead of being visited.
fn dfs_shallow<F: FnMut(&OrbitNode)>(
    a_max: u64,
    limit: u64,
    prefix_len: usize,
    visit: &mut F,
    tasks: &mut Vec<PrefixTask>,
) -> u64 {
    let mut cur = Cursor::new(limit);
    let mut count = 0u64;
    let mut k = 0usize;
    let mut a = 1u64;
    loop {
        let mut descended = false;
        if a <= a_max {
            let q_next = a.saturating_mul(cur.qs[k + 1]).saturating_add(cur.qs[k]);
            if q_next <= limit {
                let p_next = a * cur.ps[k + 1] + cur.ps[k];
                if k + 1 == prefix_len {
                    let mut digits = cur.digits[..k].to_vec();
                    digits.push(a);
                    tasks.push(PrefixTask {
                        digits,
                        p_parent: cur.ps[k + 1],
                        p: p_next,
                        q_parent: cur.qs[k + 1],
                        q: q_next,
                    });
                    a += 1;
                    continue;
                }
                k += 1;
                cur.digits[k - 1] = a;
                cur.qs[k + 1] = q_next;
                cur.ps[k + 1] = p_next;
                count += 1;
                visit(&OrbitNode {
                    digits: &cur.digits[..k],
                    pair: Pair::new_unchecked(p_next, q_next),
                    parent_q: cur.qs[k],
                });
                a = 1;
                descended = true;
            }
        }
        if !descended {
            if k == 0 {
                return count;
            }
            a = cur.digits[k - 1] + 1;
            k -= 1;
        }
    }
}

/// Count of nodes in one task's subtree (the prefix node itself included),
/// folding each node into `visit`.
fn run_task<F: FnMut(&OrbitNode)>(a_max: u64, limit: u64, task: &PrefixTask, visit: &mut F) -> u64 {
    let mut cur = Cursor::new(limit);
    cur.seed(task);
    let base = task.digits.len();
    visit(&OrbitNode {
        digits: &cur.digits[..base],
        pair: Pair::new_unchecked(task.p, task.q),
        parent_q: task.q_parent,
    });
    1 + dfs_below(a_max, limit, &mut cur, base, visit)
}

fn run_in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build worker pool")
        .install(f)
}

/// Depth-first traversal of the whole orbit below `limit`, visiting nodes in
/// lexicographic order. Returns the number of nodes visited.
pub fn enumerate<F: FnMut(&OrbitNode)>(a_max: u64, limit: u64, mut visit: F) -> Result<u64> {
    validate(a_max, limit)?;
    let mut cur = Cursor::new(limit);
    Ok(dfs_below(a_max, limit, &mut cur, 0, &mut visit))
}

/// Like [`enumerate`], but subtrees may run on multiple workers, so the
/// visitor must tolerate concurrent invocation and no visit order is
/// promised. The returned count is deterministic.
pub fn enumerate_parallel<F>(a_max: u64, limit: u64, opts: &ExecOptions, visit: F) -> Result<u64>
where
    F: Fn(&OrbitNode) + Sync,
{
    validate(a_max, limit)?;
    let prefix_len = opts.prefix_len.max(1);
    let mut tasks = Vec::new();
    let shallow = dfs_shallow(
        a_max,
        limit,
        prefix_len,
        &mut |node| visit(node),
        &mut tasks,
    );
    let run_one = |task: &PrefixTask| run_task(a_max, limit, task, &mut |node| visit(node));
    let subtree_total: u64 = match opts.threads {
        Some(1) => tasks.iter().map(run_one).sum(),
        Some(t) => run_in_pool(t, || tasks.par_iter().map(run_one).sum()),
        None => tasks.par_iter().map(run_one).sum(),
    };
    Ok(shallow + subtree_total)
}

/// Ordered parallel reduction: one partial per subtree, returned as
/// `(total_count, partials)` with the shallow partial first and task
/// partials in prefix order. The caller folds the partials sequentially, so
/// floating-point results are identical for every thread count.
pub(crate) fn reduce_ordered<T, MK, V>(
    a_max: u64,
    limit: u64,
    opts: &ExecOptions,
    make: MK,
    visit: V,
) -> Result<(u64, Vec<T>)>
where
    T: Send,
    MK: Fn() -> T + Sync,
    V: Fn(&mut T, &OrbitNode) + Sync,
{
    validate(a_max, limit)?;
    let prefix_len = opts.prefix_len.max(1);
    let mut tasks = Vec::new();
    let mut shallow = make();
    let count = dfs_shallow(
        a_max,
        limit,
        prefix_len,
        &mut |node| visit(&mut shallow, node),
        &mut tasks,
    );
    let run_one = |task: &PrefixTask| {
        let mut partial = make();
        let c = run_task(a_max, limit, task, &mut |node| visit(&mut partial, node));
        (c, partial)
    };
    let results: Vec<(u64, T)> = match opts.threads {
        Some(1) => tasks.iter().map(run_one).collect(),
        Some(t) => run_in_pool(t, || tasks.par_iter().map(run_one).collect()),
        None => tasks.par_iter().map(run_one).collect(),
    };
    let mut total = count;
    let mut partials = Vec::with_capacity(results.len() + 1);
    partials.push(shallow);
    for (c, partial) in results {
        total += c;
        partials.push(partial);
    }
    Ok((total, partials))
}

/// Number of digit strings over `[1, a_max]` with continuant at most `limit`.
pub fn orbit_count(a_max: u64, limit: u64) -> Result<u64> {
    orbit_count_with(a_max, limit, &ExecOptions::default())
}

pub fn orbit_count_with(a_max: u64, limit: u64, opts: &ExecOptions) -> Result<u64> {
    validate(a_max, limit)?;
    let prefix_len = opts.prefix_len.max(1);
    let mut tasks = Vec::new();
    let shallow = dfs_shallow(a_max, limit, prefix_len, &mut |_| {}, &mut tasks);
    let count_one = |task: &PrefixTask| run_task(a_max, limit, task, &mut |_| {});
    let subtree_total: u64 = match opts.threads {
        Some(1) => tasks.iter().map(count_one).sum(),
        Some(t) => run_in_pool(t, || tasks.par_iter().map(count_one).sum()),
        None => tasks.par_iter().map(count_one).sum(),
    };
    Ok(shallow + subtree_total)
}

/// Build `Q_A ∩ [1, N]` as a bitset. Independent of traversal order and
/// thread count: partial bitsets merge by bitwise OR.
pub fn continuant_bitset(a_max: u64, limit: u64) -> Result<ContinuantSet> {
    continuant_bitset_with(a_max, limit, &ExecOptions::default())
}

pub fn continuant_bitset_with(a_max: u64, limit: u64, opts: &ExecOptions) -> Result<ContinuantSet> {
    validate(a_max, limit)?;
    if limit + 1 > opts.bitset_budget_bits {
        return Err(Error::BitsetBudget {
            requested: limit + 1,
            budget: opts.bitset_budget_bits,
        });
    }
    let prefix_len = opts.prefix_len.max(1);
    let mut tasks = Vec::new();
    let mut set = ContinuantSet::with_capacity(a_max, limit);
    dfs_shallow(
        a_max,
        limit,
        prefix_len,
        &mut |node| set.set_bit(node.pair.q),
        &mut tasks,
    );
    match opts.threads {
        Some(1) => {
            for task in &tasks {
                run_task(a_max, limit, task, &mut |node| set.set_bit(node.pair.q));
            }
        }
        threads => {
            let fold_all = || {
                tasks
                    .par_iter()
                    .fold(
                        || ContinuantSet::with_capacity(a_max, limit),
                        |mut acc, task| {
                            run_task(a_max, limit, task, &mut |node| acc.set_bit(node.pair.q));
                            acc
                        },
                    )
                    .reduce(
                        || ContinuantSet::with_capacity(a_max, limit),
                        |mut a, b| {
                            a.or_assign(&b);
                            a
                        },
                    )
            };
            let merged = match threads {
                Some(t) => run_in_pool(t, fold_all),
                None => fold_all(),
            };
            set.or_assign(&merged);
        }
    }
    Ok(set)
}
