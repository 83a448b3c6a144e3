//! Exponential sums `S_N(theta) = sum e(theta q)` over the orbit strings
//! with continuant `q <= N`, where `e(t) = exp(2 pi i t)`.
//!
//! Sums stream over the orbit enumeration with compensated (Kahan)
//! accumulation. Parallel runs produce one partial per subtree and fold them
//! in fixed prefix order, so results are bit-identical for every thread
//! count.
//!
//! Rational frequencies `r/s` are evaluated through residue tables: the term
//! for `q` depends only on `q mod s`, and the table entries come from an
//! octant-folded `cos/sin` so that quarter-circle points are exact. That
//! makes `S_N(0)` exactly the orbit count and `S_N(1/2)` an exact signed
//! count of even versus odd continuants.

use crate::cf::gcd;
use crate::error::{Error, Result};
use crate::orbit::{reduce_ordered, ExecOptions, OrbitNode};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Largest denominator for which a residue table is built.
pub const MAX_TABLE_DENOMINATOR: u64 = 1 << 22;

/// `(cos 2 pi t, sin 2 pi t)` for `t` in `[0, 1)`, folded into the first
/// octant so the symmetries are exact: multiples of 1/4 give exact results,
/// and complementary arguments give exactly conjugate results. All folding
/// subtractions are exact by the Sterbenz lemma.
pub fn e_unit(t: f64) -> (f64, f64) {
    debug_assert!((0.0..1.0).contains(&t), "t = {t} outside [0, 1)");
    if t > 0.5 {
        let (c, s) = e_unit_half(1.0 - t);
        (c, -s)
    } else {
        e_unit_half(t)
    }
}

fn e_unit_half(t: f64) -> (f64, f64) {
    if t > 0.25 {
        let (c, s) = e_unit_quarter(0.5 - t);
        (-c, s)
    } else {
        e_unit_quarter(t)
    }
}

fn e_unit_quarter(t: f64) -> (f64, f64) {
    if t > 0.125 {
        let (c, s) = e_unit_octant(0.25 - t);
        (s, c)
    } else {
        e_unit_octant(t)
    }
}

fn e_unit_octant(t: f64) -> (f64, f64) {
    let angle = TAU * t;
    (angle.cos(), angle.sin())
}

/// A frequency on the circle: a plain real, or a tagged rational `r/s`
/// (optionally offset by `beta`, the major-arc coordinate).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcPoint {
    pub theta: f64,
    /// Reduced `(r, s)` with `0 <= r < s` when the frequency is rational.
    pub rational: Option<(u64, u64)>,
    pub beta: f64,
}

impl ArcPoint {
    /// A plain real frequency, wrapped into `[0, 1)`.
    pub fn real(theta: f64) -> Self {
        let mut t = theta.rem_euclid(1.0);
        if t >= 1.0 {
            t = 0.0;
        }
        ArcPoint {
            theta: t,
            rational: None,
            beta: 0.0,
        }
    }

    /// The exact rational `r/s`, reduced and wrapped into `[0, 1)`.
    pub fn rational(r: u64, s: u64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidPair { p: r, q: s });
        }
        let r = r % s;
        let g = gcd(r, s).max(1);
        let (r, s) = (r / g, s / g);
        Ok(ArcPoint {
            theta: r as f64 / s as f64,
            rational: Some((r, s)),
            beta: 0.0,
        })
    }

    /// Major-arc point `r/s + beta`. Evaluation treats it as the plain real
    /// `theta` whenever `beta != 0`.
    pub fn rational_offset(r: u64, s: u64, beta: f64) -> Result<Self> {
        let base = Self::rational(r, s)?;
        Ok(ArcPoint {
            theta: base.theta + beta,
            rational: base.rational,
            beta,
        })
    }

    pub fn zero() -> Self {
        ArcPoint {
            theta: 0.0,
            rational: Some((0, 1)),
            beta: 0.0,
        }
    }
}

/// `S_N(theta)` with the run parameters it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpSumValue {
    pub a_max: u64,
    pub limit: u64,
    pub theta: ArcPoint,
    pub re: f64,
    pub im: f64,
    /// Number of orbit strings summed over; equals `S_N(0)`.
    pub terms: u64,
}

impl ExpSumValue {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// One row of a major-arc profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcProfileRow {
    pub r: u64,
    pub s: u64,
    pub theta: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// `|S_N(r/s)| / S_N(0)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcProfile {
    pub a_max: u64,
    pub limit: u64,
    pub s_max: u64,
    pub terms: u64,
    pub rows: Vec<ArcProfileRow>,
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    #[inline]
    fn add(&mut self, term: f64) {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

enum FreqEval {
    /// Tagged rational with zero offset: look up `e((q mod s) r / s)`.
    Table { table: usize, r: u64 },
    /// Everything else: `e(fract(q * theta))` in double precision.
    Real { theta: f64 },
}

struct Plan {
    evals: Vec<FreqEval>,
    /// Residue tables, one per distinct denominator: `tables[k][m] = e(m/s)`.
    tables: Vec<Vec<(f64, f64)>>,
    denominators: Vec<u64>,
}

impl Plan {
    fn build(points: &[ArcPoint]) -> Plan {
        let mut tables: Vec<Vec<(f64, f64)>> = Vec::new();
        let mut denominators: Vec<u64> = Vec::new();
        let mut evals = Vec::with_capacity(points.len());
        for point in points {
            match point.rational {
                Some((r, s)) if point.beta == 0.0 && s <= MAX_TABLE_DENOMINATOR => {
                    let table = match denominators.iter().position(|&d| d == s) {
                        Some(idx) => idx,
                        None => {
                            denominators.push(s);
                            tables.push((0..s).map(|m| e_unit(m as f64 / s as f64)).collect());
                            tables.len() - 1
                        }
                    };
                    evals.push(FreqEval::Table { table, r });
                }
                _ => evals.push(FreqEval::Real {
                    theta: point.theta.rem_euclid(1.0),
                }),
            }
        }
        Plan {
            evals,
            tables,
            denominators,
        }
    }
}

/// Per-subtree accumulator: one complex Kahan pair per frequency plus a
/// scratch slot per distinct denominator.
struct Partial {
    acc: Vec<(Kahan, Kahan)>,
    residues: Vec<u64>,
}

impl Partial {
    fn new(plan: &Plan) -> Partial {
        Partial {
            acc: vec![(Kahan::default(), Kahan::default()); plan.evals.len()],
            residues: vec![0; plan.denominators.len()],
        }
    }

    #[inline]
    fn visit(&mut self, plan: &Plan, node: &OrbitNode) {
        let q = node.pair.q;
        for (slot, &s) in self.residues.iter_mut().zip(&plan.denominators) {
            *slot = q % s;
        }
        for (eval, (re, im)) in plan.evals.iter().zip(self.acc.iter_mut()) {
            let (c, s_val) = match eval {
                FreqEval::Table { table, r } => {
                    let s = plan.denominators[*table];
                    let idx = (self.residues[*table] * r) % s;
                    plan.tables[*table][idx as usize]
                }
                FreqEval::Real { theta } => {
                    let t = (q as f64 * theta).fract();
                    e_unit(t)
                }
            };
            re.add(c);
            im.add(s_val);
        }
    }
}

/// Evaluate several frequencies in a single orbit pass.
pub fn exp_sum_many(
    a_max: u64,
    limit: u64,
    points: &[ArcPoint],
    opts: &ExecOptions,
) -> Result<Vec<ExpSumValue>> {
    let plan = Plan::build(points);
    let (terms, partials) = reduce_ordered(
        a_max,
        limit,
        opts,
        || Partial::new(&plan),
        |partial, node| partial.visit(&plan, node),
    )?;
    let mut out = Vec::with_capacity(points.len());
    for (i, point) in points.iter().enumerate() {
        let mut re = Kahan::default();
        let mut im = Kahan::default();
        for partial in &partials {
            let (pre, pim) = &partial.acc[i];
            re.add(pre.sum);
            re.add(pre.comp);
            im.add(pim.sum);
            im.add(pim.comp);
        }
        out.push(ExpSumValue {
            a_max,
            limit,
            theta: *point,
            re: re.sum,
            im: im.sum,
            terms,
        });
    }
    Ok(out)
}

/// `S_N(theta)` for a single frequency.
pub fn exp_sum(a_max: u64, limit: u64, theta: ArcPoint) -> Result<ExpSumValue> {
    exp_sum_with(a_max, limit, theta, &ExecOptions::default())
}

pub fn exp_sum_with(
    a_max: u64,
    limit: u64,
    theta: ArcPoint,
    opts: &ExecOptions,
) -> Result<ExpSumValue> {
    Ok(exp_sum_many(a_max, limit, &[theta], opts)?.pop().unwrap())
}

/// `|S_N(r/s)|` over all reduced fractions with `s <= s_max`, from one orbit
/// pass. Rows are sorted by denominator, then numerator.
pub fn arc_profile(a_max: u64, limit: u64, s_max: u64) -> Result<ArcProfile> {
    arc_profile_with(a_max, limit, s_max, &ExecOptions::default())
}

pub fn arc_profile_with(
    a_max: u64,
    limit: u64,
    s_max: u64,
    opts: &ExecOptions,
) -> Result<ArcProfile> {
    if s_max == 0 || s_max > 4096 {
        return Err(Error::InvalidBound { bound: s_max });
    }
    let mut points = Vec::new();
    for s in 1..=s_max {
        for r in 0..s {
            if gcd(r, s) <= 1 {
                points.push(ArcPoint::rational(r, s)?);
            }
        }
    }
    let sums = exp_sum_many(a_max, limit, &points, opts)?;
    let terms = sums.first().map_or(0, |v| v.terms);
    let rows = sums
        .iter()
        .map(|v| {
            let (r, s) = v.theta.rational.expect("profile points are rational");
            let abs = v.abs();
            ArcProfileRow {
                r,
                s,
                theta: v.theta.theta,
                re: v.re,
                im: v.im,
                abs,
                ratio: abs / terms as f64,
            }
        })
        .collect();
    Ok(ArcProfile {
        a_max,
        limit,
        s_max,
        terms,
        rows,
    })
}
