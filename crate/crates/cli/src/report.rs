//! Report envelopes: every command emits `{ "meta": ..., ...payload }` as
//! JSON, or the same numbers as CSV (meta as leading `#` comment lines).

use serde::Serialize;
use std::io::Write;
use zaremba_core::{
    ArcProfile, Density, Digits, DimensionEstimate, ExceptionReport, ExpSumValue, Pair,
    PowerReport, SlopeFit,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Audit block attached to every report.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub a: Option<u64>,
    pub n: Option<u64>,
    pub version: String,
    pub threads: usize,
    pub wall_ms: u64,
}

impl Meta {
    pub fn new(a: Option<u64>, n: Option<u64>, threads: usize, wall_ms: u64) -> Meta {
        Meta {
            a,
            n,
            version: env!("CARGO_PKG_VERSION").to_string(),
            threads,
            wall_ms,
        }
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = Vec::new();
        if let Some(a) = self.a {
            lines.push(format!("# a={a}"));
        }
        if let Some(n) = self.n {
            lines.push(format!("# n={n}"));
        }
        lines.push(format!("# version={}", self.version));
        lines.push(format!("# threads={}", self.threads));
        lines.push(format!("# wall_ms={}", self.wall_ms));
        lines
    }
}

/// A report payload that knows its tabular form. Scalar fields that have no
/// column of their own surface as `# key=value` comment lines, so the CSV
/// carries every number the JSON does.
pub trait Report: Serialize {
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
    fn csv_comments(&self) -> Vec<String> {
        Vec::new()
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: &'a Meta,
    #[serde(flatten)]
    payload: &'a T,
}

/// Write the report in the chosen format. JSON is pretty-printed with a
/// trailing newline; CSV quotes nothing (no cell ever contains a comma).
pub fn emit<T: Report>(
    payload: &T,
    meta: &Meta,
    format: Format,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let envelope = Envelope { meta, payload };
            serde_json::to_writer_pretty(&mut *out, &envelope)?;
            out.write_all(b"\n")
        }
        Format::Csv => {
            for line in meta.comment_lines() {
                writeln!(out, "{line}")?;
            }
            for line in payload.csv_comments() {
                writeln!(out, "# {line}")?;
            }
            writeln!(out, "{}", payload.csv_header().join(","))?;
            for row in payload.csv_rows() {
                writeln!(out, "{}", row.join(","))?;
            }
            Ok(())
        }
    }
}

fn digits_cell(digits: &Digits) -> String {
    digits
        .as_slice()
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn opt_cell<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map_or(String::new(), |v| v.to_string())
}

// ---------------------------------------------------------------------------
// Per-command payloads
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct ExpandReport {
    pub p: u64,
    pub q: u64,
    pub digits: Digits,
}

impl Report for ExpandReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["p", "q", "digits"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.p.to_string(),
            self.q.to_string(),
            digits_cell(&self.digits),
        ]]
    }
}

#[derive(Serialize)]
pub struct EvalReport {
    pub digits: Digits,
    pub p: u64,
    pub q: u64,
    pub convergents: Vec<Pair>,
}

impl Report for EvalReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["j", "p", "q"]
    }
    fn csv_comments(&self) -> Vec<String> {
        vec![format!("digits={}", digits_cell(&self.digits))]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.convergents
            .iter()
            .enumerate()
            .map(|(j, c)| vec![j.to_string(), c.p.to_string(), c.q.to_string()])
            .collect()
    }
}

#[derive(Serialize)]
pub struct SieveReport {
    pub a: u64,
    pub n: u64,
    pub count: u64,
    pub density: Density,
    pub words: usize,
    pub path: String,
}

impl Report for SieveReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec![
            "a",
            "n",
            "count",
            "density_num",
            "density_den",
            "density",
            "words",
            "path",
        ]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.a.to_string(),
            self.n.to_string(),
            self.count.to_string(),
            self.density.num.to_string(),
            self.density.den.to_string(),
            self.density.value.to_string(),
            self.words.to_string(),
            self.path.clone(),
        ]]
    }
}

#[derive(Serialize)]
pub struct DensityReport {
    pub a: u64,
    pub n: u64,
    pub density: Density,
}

impl Report for DensityReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["a", "n", "density_num", "density_den", "density"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.a.to_string(),
            self.n.to_string(),
            self.density.num.to_string(),
            self.density.den.to_string(),
            self.density.value.to_string(),
        ]]
    }
}

#[derive(Serialize)]
pub struct ExceptionsReport {
    pub a: u64,
    pub n: u64,
    pub count: usize,
    pub density: Density,
    pub exceptions: Vec<u64>,
}

impl ExceptionsReport {
    pub fn from_core(report: ExceptionReport) -> Self {
        ExceptionsReport {
            a: report.a_max,
            n: report.limit,
            count: report.exceptions.len(),
            density: report.density,
            exceptions: report.exceptions,
        }
    }
}

impl Report for ExceptionsReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["exception"]
    }
    fn csv_comments(&self) -> Vec<String> {
        vec![
            format!("count={}", self.count),
            format!("density_num={}", self.density.num),
            format!("density_den={}", self.density.den),
            format!("density={}", self.density.value),
        ]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.exceptions
            .iter()
            .map(|q| vec![q.to_string()])
            .collect()
    }
}

#[derive(Serialize)]
pub struct WitnessReport {
    pub q: u64,
    pub a: u64,
    pub p: Option<u64>,
    pub digits: Option<Digits>,
}

impl Report for WitnessReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["q", "a", "p", "digits"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.q.to_string(),
            self.a.to_string(),
            opt_cell(&self.p),
            self.digits.as_ref().map_or(String::new(), digits_cell),
        ]]
    }
}

#[derive(Serialize)]
pub struct NiederReport {
    pub base: u64,
    pub max_exp: u32,
    pub a: u64,
    pub failures: usize,
    pub rows: Vec<NiederRow>,
}

#[derive(Serialize)]
pub struct NiederRow {
    pub exponent: u32,
    pub q: u64,
    pub p: Option<u64>,
    pub digits: Option<Digits>,
}

impl NiederReport {
    pub fn from_core(report: PowerReport) -> Self {
        NiederReport {
            base: report.base,
            max_exp: report.max_exp,
            a: report.a_max,
            failures: report.failures,
            rows: report
                .rows
                .into_iter()
                .map(|r| NiederRow {
                    exponent: r.exponent,
                    q: r.q,
                    p: r.p,
                    digits: r.digits,
                })
                .collect(),
        }
    }
}

impl Report for NiederReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["exponent", "q", "p", "digits"]
    }
    fn csv_comments(&self) -> Vec<String> {
        vec![
            format!("base={}", self.base),
            format!("max_exp={}", self.max_exp),
            format!("failures={}", self.failures),
        ]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.exponent.to_string(),
                    r.q.to_string(),
                    opt_cell(&r.p),
                    r.digits.as_ref().map_or(String::new(), digits_cell),
                ]
            })
            .collect()
    }
}

#[derive(Serialize)]
pub struct FitReport {
    pub a: u64,
    pub slope: f64,
    pub reference: f64,
    pub note: String,
    pub points: Vec<FitPointOut>,
}

#[derive(Serialize)]
pub struct FitPointOut {
    pub n: u64,
    pub count: u64,
}

impl FitReport {
    pub fn from_core(fit: SlopeFit) -> Self {
        FitReport {
            a: fit.a_max,
            slope: fit.slope,
            reference: fit.reference,
            note: fit.note,
            points: fit
                .points
                .into_iter()
                .map(|p| FitPointOut {
                    n: p.limit,
                    count: p.count,
                })
                .collect(),
        }
    }
}

impl Report for FitReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["n", "count", "slope", "reference"]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.points
            .iter()
            .map(|p| {
                vec![
                    p.n.to_string(),
                    p.count.to_string(),
                    self.slope.to_string(),
                    self.reference.to_string(),
                ]
            })
            .collect()
    }
}

#[derive(Serialize)]
pub struct DimReport {
    pub a: u64,
    pub method: zaremba_core::Method,
    pub value: f64,
    pub diagnostics: zaremba_core::dimension::Diagnostics,
}

impl DimReport {
    pub fn from_core(est: DimensionEstimate) -> Self {
        DimReport {
            a: est.a_max,
            method: est.method,
            value: est.value,
            diagnostics: est.diagnostics,
        }
    }
}

impl Report for DimReport {
    fn csv_comments(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(iterations) = self.diagnostics.iterations {
            out.push(format!("iterations={iterations}"));
        }
        if let Some(prev) = self.diagnostics.prev_estimate {
            out.push(format!("prev_root={prev}"));
        }
        if let Some(note) = &self.diagnostics.note {
            out.push(format!("note={note}"));
        }
        out
    }
    fn csv_header(&self) -> Vec<&'static str> {
        vec![
            "a",
            "method",
            "value",
            "residual",
            "order",
            "depth",
            "depth_root",
        ]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        let d = &self.diagnostics;
        vec![vec![
            self.a.to_string(),
            format!("{:?}", self.method).to_lowercase(),
            self.value.to_string(),
            opt_cell(&d.residual),
            opt_cell(&d.order),
            opt_cell(&d.depth),
            opt_cell(&d.depth_root),
        ]]
    }
}

#[derive(Serialize)]
pub struct ExpSumReport {
    pub a: u64,
    pub n: u64,
    pub theta: ThetaOut,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub terms: u64,
}

#[derive(Serialize)]
pub struct ThetaOut {
    pub value: f64,
    pub r: Option<u64>,
    pub s: Option<u64>,
    pub beta: f64,
}

impl ExpSumReport {
    pub fn from_core(v: ExpSumValue) -> Self {
        ExpSumReport {
            a: v.a_max,
            n: v.limit,
            theta: ThetaOut {
                value: v.theta.theta,
                r: v.theta.rational.map(|(r, _)| r),
                s: v.theta.rational.map(|(_, s)| s),
                beta: v.theta.beta,
            },
            abs: v.abs(),
            re: v.re,
            im: v.im,
            terms: v.terms,
        }
    }
}

impl Report for ExpSumReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["r", "s", "theta", "re", "im", "abs", "ratio"]
    }
    fn csv_comments(&self) -> Vec<String> {
        vec![
            format!("terms={}", self.terms),
            format!("beta={}", self.theta.beta),
        ]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            opt_cell(&self.theta.r),
            opt_cell(&self.theta.s),
            self.theta.value.to_string(),
            self.re.to_string(),
            self.im.to_string(),
            self.abs.to_string(),
            (self.abs / self.terms as f64).to_string(),
        ]]
    }
}

#[derive(Serialize)]
pub struct ProfileReport {
    pub a: u64,
    pub n: u64,
    pub s_max: u64,
    pub terms: u64,
    pub rows: Vec<ProfileRowOut>,
}

#[derive(Serialize)]
pub struct ProfileRowOut {
    pub r: u64,
    pub s: u64,
    pub theta: f64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub ratio: f64,
}

impl ProfileReport {
    pub fn from_core(profile: ArcProfile) -> Self {
        ProfileReport {
            a: profile.a_max,
            n: profile.limit,
            s_max: profile.s_max,
            terms: profile.terms,
            rows: profile
                .rows
                .into_iter()
                .map(|row| ProfileRowOut {
                    r: row.r,
                    s: row.s,
                    theta: row.theta,
                    re: row.re,
                    im: row.im,
                    abs: row.abs,
                    ratio: row.ratio,
                })
                .collect(),
        }
    }
}

impl Report for ProfileReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["r", "s", "theta", "re", "im", "abs", "ratio"]
    }
    fn csv_comments(&self) -> Vec<String> {
        vec![
            format!("s_max={}", self.s_max),
            format!("terms={}", self.terms),
        ]
    }
    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|row| {
                vec![
                    row.r.to_string(),
                    row.s.to_string(),
                    row.theta.to_string(),
                    row.re.to_string(),
                    row.im.to_string(),
                    row.abs.to_string(),
                    row.ratio.to_string(),
                ]
            })
            .collect()
    }
}
