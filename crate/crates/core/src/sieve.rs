//! Integer-side questions about `Q_A`: density below a limit, exceptional
//! integers, per-integer witnesses, power checks, and the empirical counting
//! exponent.
//!
//! Witness search walks numerators with [`rational_membership`], a code path
//! fully independent of the orbit enumerator; the two must agree wherever
//! both are run, and the acceptance suite checks exactly that.

use crate::cf::{gcd, rational_membership, Digits};
use crate::dimension::delta_transfer;
use crate::error::{Error, Result};
use crate::orbit::{continuant_bitset_with, orbit_count_with, ContinuantSet, ExecOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// An exact rational, kept unreduced as `count / limit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub num: u64,
    pub den: u64,
    pub value: f64,
}

impl Density {
    fn new(num: u64, den: u64) -> Self {
        Density {
            num,
            den,
            value: num as f64 / den as f64,
        }
    }
}

/// The integers in `[1, N]` missing from `Q_A`, with the resulting density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionReport {
    pub a_max: u64,
    pub limit: u64,
    pub exceptions: Vec<u64>,
    pub density: Density,
}

/// `#(Q_A ∩ [1, N]) / N` as an exact rational.
pub fn density(a_max: u64, limit: u64) -> Result<Density> {
    density_with(a_max, limit, &ExecOptions::default())
}

pub fn density_with(a_max: u64, limit: u64, opts: &ExecOptions) -> Result<Density> {
    let set = continuant_bitset_with(a_max, limit, opts)?;
    Ok(Density::new(set.count(), limit))
}

/// Sorted list of integers in `[1, N]` with no `A`-bounded expansion.
pub fn exceptions(a_max: u64, limit: u64) -> Result<ExceptionReport> {
    exceptions_with(a_max, limit, &ExecOptions::default())
}

pub fn exceptions_with(a_max: u64, limit: u64, opts: &ExecOptions) -> Result<ExceptionReport> {
    let set = continuant_bitset_with(a_max, limit, opts)?;
    Ok(exception_report(&set))
}

/// Report from an already-built bitset.
pub fn exception_report(set: &ContinuantSet) -> ExceptionReport {
    let exceptions: Vec<u64> = set.iter_missing().collect();
    let density = Density::new(set.limit() - exceptions.len() as u64, set.limit());
    ExceptionReport {
        a_max: set.a_max(),
        limit: set.limit(),
        exceptions,
        density,
    }
}

/// Smallest coprime numerator whose expansion stays within the digit bound,
/// with its witness string. `q = 1` is `(0, [])` by the empty-product
/// convention.
pub fn witness(q: u64, a_max: u64) -> Result<Option<(u64, Digits)>> {
    if a_max == 0 {
        return Err(Error::InvalidBound { bound: a_max });
    }
    if q == 0 {
        return Err(Error::InvalidPair { p: 0, q });
    }
    if q == 1 {
        return Ok(Some((0, Digits::empty())));
    }
    for p in 1..q {
        if gcd(p, q) != 1 {
            continue;
        }
        if let Some(digits) = rational_membership(p, q, a_max)? {
            return Ok(Some((p, digits)));
        }
    }
    Ok(None)
}

/// One row of a power-membership report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub exponent: u32,
    pub q: u64,
    pub p: Option<u64>,
    pub digits: Option<Digits>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub base: u64,
    pub max_exp: u32,
    pub a_max: u64,
    pub rows: Vec<PowerRow>,
    pub failures: usize,
}

/// Witness search over `base^j` for `j = 1..=max_exp`; rows are checked in
/// parallel and collected in exponent order.
pub fn niederreiter_check(base: u64, max_exp: u32, a_max: u64) -> Result<PowerReport> {
    if base < 2 {
        return Err(Error::InvalidBound { bound: base });
    }
    if max_exp == 0 {
        return Err(Error::InvalidBound { bound: 0 });
    }
    let mut powers = Vec::with_capacity(max_exp as usize);
    let mut q: u64 = 1;
    for exponent in 1..=max_exp {
        q = q
            .checked_mul(base)
            .ok_or(Error::PowerOverflow { base, exponent })?;
        if q > crate::orbit::MAX_LIMIT {
            return Err(Error::PowerOverflow { base, exponent });
        }
        powers.push((exponent, q));
    }
    let rows: Vec<PowerRow> = powers
        .par_iter()
        .map(|&(exponent, q)| {
            let found = witness(q, a_max)?;
            Ok(PowerRow {
                exponent,
                q,
                p: found.as_ref().map(|(p, _)| *p),
                digits: found.map(|(_, d)| d),
            })
        })
        .collect::<Result<_>>()?;
    let failures = rows.iter().filter(|r| r.p.is_none()).count();
    Ok(PowerReport {
        base,
        max_exp,
        a_max,
        rows,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub limit: u64,
    pub count: u64,
}

/// Least-squares slope of `log count` against `log N`, with the
/// transfer-operator value `2*delta_A` as reference.
///
/// Counts are over digit strings, not deduplicated fractions; each fraction
/// has at most two witnessing strings, so the multiplicity cannot move a
/// log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub a_max: u64,
    pub points: Vec<FitPoint>,
    pub slope: f64,
    pub reference: f64,
    pub note: String,
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - x_mean) * (y - y_mean);
        den += (x - x_mean) * (x - x_mean);
    }
    num / den
}

/// Fit the counting exponent from orbit counts at the given limits.
pub fn counting_fit(a_max: u64, limits: &[u64]) -> Result<SlopeFit> {
    counting_fit_with(a_max, limits, &ExecOptions::default())
}

pub fn counting_fit_with(a_max: u64, limits: &[u64], opts: &ExecOptions) -> Result<SlopeFit> {
    if limits.len() < 3 || limits.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadFitInput { needed: 3 });
    }
    let points: Vec<FitPoint> = limits
        .iter()
        .map(|&limit| {
            Ok(FitPoint {
                limit,
                count: orbit_count_with(a_max, limit, opts)?,
            })
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = points.iter().map(|p| (p.limit as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| (p.count as f64).ln()).collect();
    let slope = least_squares_slope(&xs, &ys);
    let reference = 2.0 * delta_transfer(a_max, 48, 1e-10)?.value;
    Ok(SlopeFit {
        a_max,
        points,
        slope,
        reference,
        note: "string counts; per-fraction multiplicity <= 2 does not affect the slope".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::cf_eval;

    #[test]
    fn density_examples() {
        let d = density(2, 10).unwrap();
        assert_eq!((d.num, d.den), (8, 10));
        let d = density(1, 100).unwrap();
        assert_eq!((d.num, d.den), (10, 100));
        let d = density(3, 5).unwrap();
        assert_eq!((d.num, d.den), (5, 5));
    }

    #[test]
    fn exception_examples() {
        assert_eq!(exceptions(2, 10).unwrap().exceptions, vec![6, 9]);
        assert_eq!(exceptions(1, 10).unwrap().exceptions, vec![4, 6, 7, 9, 10]);
        let report = exceptions(2, 10).unwrap();
        assert_eq!(
            report.density.num,
            report.limit - report.exceptions.len() as u64
        );
    }

    #[test]
    fn witness_examples() {
        let (p, d) = witness(7, 5).unwrap().unwrap();
        assert_eq!(p, 2);
        assert_eq!(d.as_slice(), &[3, 2]);
        assert_eq!(witness(6, 3).unwrap(), None);
        let (p, d) = witness(8, 3).unwrap().unwrap();
        assert_eq!(p, 3);
        assert_eq!(d.as_slice(), &[2, 1, 2]);
        assert_eq!(witness(1, 5).unwrap(), Some((0, Digits::empty())));
    }

    #[test]
    fn witnesses_are_valid_and_smallest() {
        for q in 2..=300u64 {
            for a_max in [2u64, 3] {
                let found = witness(q, a_max).unwrap();
                if let Some((p, digits)) = &found {
                    assert_eq!(gcd(*p, q), 1);
                    assert!(digits.max_digit() <= a_max);
                    let ev = cf_eval(digits).unwrap();
                    assert_eq!((ev.pair.p, ev.pair.q), (*p, q));
                    // nothing smaller works
                    for smaller in 1..*p {
                        if gcd(smaller, q) == 1 {
                            assert_eq!(rational_membership(smaller, q, a_max).unwrap(), None);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn power_check_examples() {
        let report = niederreiter_check(2, 10, 3).unwrap();
        assert_eq!(report.failures, 0);
        assert_eq!(report.rows.len(), 10);
        assert_eq!(report.rows[9].q, 1024);
        let report = niederreiter_check(3, 7, 3).unwrap();
        assert_eq!(report.failures, 0);
        // Q_1 is the Fibonacci set; most powers of two fail.
        let report = niederreiter_check(2, 10, 1).unwrap();
        assert!(report.failures > 0);
        assert!(report.rows[1].p.is_none(), "4 has no bound-1 expansion");
    }

    #[test]
    fn power_check_overflow() {
        assert!(matches!(
            niederreiter_check(2, 64, 3),
            Err(Error::PowerOverflow { .. })
        ));
    }

    #[test]
    fn slope_fit_recovers_synthetic_exponent() {
        // count = 3.7 * N^1.25, slope must come back to 1e-9.
        let limits: Vec<u64> = vec![100, 1_000, 10_000, 100_000];
        let xs: Vec<f64> = limits.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = limits
            .iter()
            .map(|&n| (3.7 * (n as f64).powf(1.25)).ln())
            .collect();
        let slope = least_squares_slope(&xs, &ys);
        assert!((slope - 1.25).abs() < 1e-9);
    }

    #[test]
    fn counting_fit_flat_for_fibonacci() {
        // Q_1 grows logarithmically, so the log-log slope is near zero.
        let fit = counting_fit(1, &[100, 1_000, 10_000, 100_000, 1_000_000]).unwrap();
        assert!(fit.slope < 0.2, "slope {}", fit.slope);
        assert_eq!(fit.reference, 0.0);
    }

    #[test]
    fn counting_fit_rejects_bad_input() {
        assert!(matches!(
            counting_fit(2, &[10, 100]),
            Err(Error::BadFitInput { .. })
        ));
        assert!(matches!(
            counting_fit(2, &[10, 10, 100]),
            Err(Error::BadFitInput { .. })
        ));
    }

    #[test]
    fn dual_path_membership_small() {
        let set = continuant_bitset_with(3, 400, &ExecOptions::default()).unwrap();
        for q in 1..=400u64 {
            let by_orbit = set.contains(q);
            let by_witness = witness(q, 3).unwrap().is_some();
            assert_eq!(by_orbit, by_witness, "q = {q}");
        }
    }
}
