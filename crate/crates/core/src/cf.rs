//! Exact continued-fraction, continuant, and 2x2 matrix arithmetic.
//!
//! A finite digit string `[a_1, ..., a_k]` (all `a_j >= 1`) addresses the
//! rational `p/q = 1/(a_1 + 1/(a_2 + ...))` in the unit interval. The
//! convergents obey the continuant recurrences
//!
//! ```text
//! q_j = a_j * q_{j-1} + q_{j-2}    q_0 = 1, q_{-1} = 0
//! p_j = a_j * p_{j-1} + p_{j-2}    p_0 = 0, p_{-1} = 1
//! ```
//!
//! and the same data is the second column of the generator product
//! `[[0,1],[1,a_1]] * ... * [[0,1],[1,a_k]]`. Everything here is checked
//! 64-bit arithmetic; overflow is an error, never a wrap.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A finite partial-quotient string. May be empty (the rational 0/1).
///
/// Canonical strings produced by [`cf_expand`] end in a digit >= 2 whenever
/// the length is >= 2; the trailing-1 variant of a rational only arises from
/// the explicit rewrite inside [`rational_membership`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Digits(Vec<u64>);

impl Digits {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if let Some(index) = entries.iter().position(|&a| a == 0) {
            return Err(Error::ZeroDigit { index });
        }
        Ok(Digits(entries))
    }

    pub fn empty() -> Self {
        Digits(Vec::new())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest digit, or 0 for the empty string.
    pub fn max_digit(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// True when the string is the canonical Euclidean expansion of its value.
    pub fn is_canonical(&self) -> bool {
        match self.0.len() {
            0 | 1 => true,
            k => self.0[k - 1] >= 2,
        }
    }
}

impl std::fmt::Display for Digits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// A coprime pair `(p, q)` with `0 <= p <= q`, `q >= 1`: the convergent `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub p: u64,
    pub q: u64,
}

impl Pair {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p > q {
            return Err(Error::InvalidPair { p, q });
        }
        if gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(Pair { p, q })
    }

    /// Constructor for pairs that are coprime by construction (orbit nodes,
    /// convergents of a valid digit string).
    pub(crate) fn new_unchecked(p: u64, q: u64) -> Self {
        debug_assert!(q >= 1 && p <= q && gcd(p, q) == 1);
        Pair { p, q }
    }
}

/// A 2x2 non-negative integer matrix; products of the generators
/// `[[0,1],[1,a]]` have determinant +/-1 and carry a convergent pair in the
/// second column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2 {
    pub m11: u64,
    pub m12: u64,
    pub m21: u64,
    pub m22: u64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m11: 1,
        m12: 0,
        m21: 0,
        m22: 1,
    };

    /// The semigroup generator `[[0,1],[1,a]]`.
    pub fn generator(a: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::ZeroDigit { index: 0 });
        }
        Ok(Mat2 {
            m11: 0,
            m12: 1,
            m21: 1,
            m22: a,
        })
    }

    pub fn checked_mul(&self, rhs: &Mat2) -> Option<Mat2> {
        let term = |a: u64, b: u64, c: u64, d: u64| -> Option<u64> {
            a.checked_mul(b)?.checked_add(c.checked_mul(d)?)
        };
        Some(Mat2 {
            m11: term(self.m11, rhs.m11, self.m12, rhs.m21)?,
            m12: term(self.m11, rhs.m12, self.m12, rhs.m22)?,
            m21: term(self.m21, rhs.m11, self.m22, rhs.m21)?,
            m22: term(self.m21, rhs.m12, self.m22, rhs.m22)?,
        })
    }

    pub fn det(&self) -> i128 {
        self.m11 as i128 * self.m22 as i128 - self.m12 as i128 * self.m21 as i128
    }

    /// Second column `(m12, m22)`; for a generator product this is the
    /// convergent pair of the digit string.
    pub fn second_column(&self) -> (u64, u64) {
        (self.m12, self.m22)
    }

    pub fn first_column(&self) -> (u64, u64) {
        (self.m11, self.m21)
    }
}

/// Result of evaluating a digit string: the final convergent plus every
/// intermediate `(p_j, q_j)`, starting with `(p_0, q_0) = (0, 1)` for the
/// empty prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub pair: Pair,
    pub convergents: Vec<Pair>,
}

/// Euclidean expansion of `p/q` into its canonical digit string.
///
/// `cf_expand(0, 1)` is the empty string, `cf_expand(1, 1)` is `[1]`, and
/// every other output of length >= 2 ends in a digit >= 2.
pub fn cf_expand(p: u64, q: u64) -> Result<Digits> {
    if q == 0 || p > q {
        return Err(Error::InvalidPair { p, q });
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let mut digits = Vec::new();
    let (mut hi, mut lo) = (q, p);
    while lo != 0 {
        digits.push(hi / lo);
        let r = hi % lo;
        hi = lo;
        lo = r;
    }
    Ok(Digits(digits))
}

/// Run the continuant recurrences over `digits`.
pub fn cf_eval(digits: &Digits) -> Result<Evaluation> {
    let mut convergents = Vec::with_capacity(digits.len() + 1);
    convergents.push(Pair { p: 0, q: 1 });
    let (mut p_prev, mut q_prev) = (1u64, 0u64); // (p_{-1}, q_{-1})
    let (mut p_cur, mut q_cur) = (0u64, 1u64); // (p_0, q_0)
    for (i, &a) in digits.as_slice().iter().enumerate() {
        if a == 0 {
            return Err(Error::ZeroDigit { index: i });
        }
        let overflow = Error::Overflow { index: i + 1 };
        let q_next = a
            .checked_mul(q_cur)
            .and_then(|t| t.checked_add(q_prev))
            .ok_or(overflow.clone())?;
        let p_next = a
            .checked_mul(p_cur)
            .and_then(|t| t.checked_add(p_prev))
            .ok_or(overflow)?;
        (p_prev, q_prev) = (p_cur, q_cur);
        (p_cur, q_cur) = (p_next, q_next);
        convergents.push(Pair::new_unchecked(p_cur, q_cur));
    }
    Ok(Evaluation {
        pair: Pair::new_unchecked(p_cur, q_cur),
        convergents,
    })
}

/// Product of `[[0,1],[1,a_j]]` over the digit string, left to right.
///
/// The second column equals `cf_eval(digits).pair`, the first column is the
/// previous convergent `(p_{k-1}, q_{k-1})`.
pub fn to_matrix(digits: &Digits) -> Result<Mat2> {
    let mut acc = Mat2::IDENTITY;
    for (i, &a) in digits.as_slice().iter().enumerate() {
        if a == 0 {
            return Err(Error::ZeroDigit { index: i });
        }
        let g = Mat2::generator(a)?;
        acc = acc
            .checked_mul(&g)
            .ok_or(Error::Overflow { index: i + 1 })?;
    }
    Ok(acc)
}

/// Witness that `p/q` has an expansion with all digits <= `a_max`, if any.
///
/// A rational has exactly two expansions: the canonical one and, when the
/// canonical last digit is >= 2, the trailing-1 rewrite
/// `[..., a_k] = [..., a_k - 1, 1]`. The canonical string is admissible iff
/// all digits are <= `a_max`; the rewrite only helps when the canonical
/// string fails solely because its last digit equals `a_max + 1`.
pub fn rational_membership(p: u64, q: u64, a_max: u64) -> Result<Option<Digits>> {
    if a_max == 0 {
        return Err(Error::InvalidBound { bound: a_max });
    }
    let digits = cf_expand(p, q)?;
    if digits.max_digit() <= a_max {
        return Ok(Some(digits));
    }
    let entries = digits.as_slice();
    let k = entries.len();
    let body_ok = entries[..k - 1].iter().all(|&a| a <= a_max);
    if body_ok && entries[k - 1] == a_max + 1 {
        let mut rewritten = entries.to_vec();
        rewritten[k - 1] -= 1;
        rewritten.push(1);
        return Ok(Some(Digits(rewritten)));
    }
    Ok(None)
}
