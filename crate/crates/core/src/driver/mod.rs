//! Problem library, bound orchestration across `r`, and reports.

mod oracle;
mod table1;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jacobi::{monic_recurrence_from_moments, tau_from_recurrence, MonicRecurrence};
use crate::measures::{pushforward_moments, MeasureKind, MeasureSpec, MomentSequence};
use crate::mvbounds::theta_pencil;
use crate::pencil::{pencil_bounds, PencilOptions};
use crate::poly::{Poly, PolyJson};

pub use oracle::{oracle_minmax, OracleResult, DEFAULT_BUDGET};
pub use table1::{
    match_tolerance, reproduce_table1, reproduce_table1_with, table1_checks, table1_csv, table1_render, Table1Check, Table1Output,
    TABLE1_ASSUMPTION, TABLE1_REFERENCE,
};

/// Absolute slack of the sandwich and monotonicity checks, scaled by
/// `max(1, |value|)`.
pub const REPORT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Jacobi,
    Pencil,
    Theta,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Jacobi => "jacobi",
            Method::Pencil => "pencil",
            Method::Theta => "theta",
        }
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jacobi" => Ok(Method::Jacobi),
            "pencil" => Ok(Method::Pencil),
            "theta" => Ok(Method::Theta),
            other => Err(Error::Invalid(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Comma-separated method list, e.g. `jacobi,theta`.
pub fn parse_methods(s: &str) -> Result<BTreeSet<Method>> {
    let set: BTreeSet<Method> = s.split(',').filter(|t| !t.trim().is_empty()).map(Method::from_str).collect::<Result<_>>()?;
    if set.is_empty() {
        return Err(Error::Invalid("no method given".into()));
    }
    Ok(set)
}

/// `a..b` (inclusive), a comma list, or a single integer.
pub fn parse_r_values(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Invalid(format!("cannot parse r values from {s:?}"));
    let s = s.trim();
    let mut out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?
    };
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub f: Poly,
    pub measure: MeasureSpec,
    r_values: Vec<usize>,
    pub methods: BTreeSet<Method>,
}

impl ProblemSpec {
    pub fn new(
        name: impl Into<String>,
        f: Poly,
        measure: MeasureSpec,
        r_values: Vec<usize>,
        methods: impl IntoIterator<Item = Method>,
    ) -> Result<Self> {
        if f.n() != measure.n {
            return Err(Error::DimensionMismatch {
                expected: measure.n,
                found: f.n(),
            });
        }
        let mut r_values = r_values;
        r_values.sort_unstable();
        r_values.dedup();
        if r_values.is_empty() {
            return Err(Error::Invalid("at least one r value is required".into()));
        }
        let methods: BTreeSet<Method> = methods.into_iter().collect();
        if methods.is_empty() {
            return Err(Error::Invalid("at least one method is required".into()));
        }
        Ok(ProblemSpec {
            name: name.into(),
            f,
            measure,
            r_values,
            methods,
        })
    }

    pub fn r_values(&self) -> &[usize] {
        &self.r_values
    }

    pub fn max_r(&self) -> usize {
        *self.r_values.last().expect("nonempty")
    }

    pub fn with_r_values(mut self, r_values: Vec<usize>) -> Result<Self> {
        let p = ProblemSpec::new(self.name.clone(), self.f.clone(), self.measure, r_values, self.methods.clone())?;
        self.r_values = p.r_values;
        Ok(self)
    }

    pub fn with_methods(mut self, methods: impl IntoIterator<Item = Method>) -> Result<Self> {
        let p = ProblemSpec::new(self.name.clone(), self.f.clone(), self.measure, self.r_values.clone(), methods)?;
        self.methods = p.methods;
        Ok(self)
    }
}

/// Problem file: `{"name": ..., "f": <poly>, "measure": {"kind": ..., "n": ...}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProblemFile {
    pub name: String,
    pub f: PolyJson,
    pub measure: MeasureSpec,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("problem file: {e}")))?;
        if file.measure.n == 0 {
            return Err(Error::Invalid("measure dimension must be at least 1".into()));
        }
        Ok(file)
    }

    pub fn from_problem(p: &ProblemSpec) -> Self {
        ProblemFile {
            name: p.name.clone(),
            f: p.f.to_json(),
            measure: p.measure,
        }
    }

    pub fn into_problem(self, r_values: Vec<usize>, methods: impl IntoIterator<Item = Method>) -> Result<ProblemSpec> {
        let f = Poly::from_json(&self.f)?;
        ProblemSpec::new(self.name, f, self.measure, r_values, methods)
    }
}

fn ints(n: usize, terms: &[(i64, i64, &[u32])]) -> Poly {
    Poly::from_int_terms(n, terms).expect("library polynomial")
}

fn spec(kind: MeasureKind, n: usize) -> MeasureSpec {
    MeasureSpec::new(kind, n).expect("library measure")
}

pub fn motzkin() -> Poly {
    ints(2, &[(64, 1, &[4, 2]), (64, 1, &[2, 4]), (-48, 1, &[2, 2]), (1, 1, &[0, 0])])
}

pub fn matyas() -> Poly {
    ints(2, &[(26, 1, &[2, 0]), (26, 1, &[0, 2]), (-48, 1, &[1, 1])])
}

/// `(10x₁+20x₂−7)² + (20x₁+10x₂−5)²`.
pub fn booth() -> Poly {
    ints(
        2,
        &[
            (500, 1, &[2, 0]),
            (800, 1, &[1, 1]),
            (500, 1, &[0, 2]),
            (-340, 1, &[1, 0]),
            (-380, 1, &[0, 1]),
            (74, 1, &[0, 0]),
        ],
    )
}

/// Three-hump camel `2y₁² − 1.05y₁⁴ + y₁⁶/6 + y₁y₂ + y₂²` at `y = 5x`.
pub fn three_hump_camel() -> Poly {
    ints(
        2,
        &[
            (15625, 6, &[6, 0]),
            (-2625, 4, &[4, 0]),
            (50, 1, &[2, 0]),
            (25, 1, &[1, 1]),
            (25, 1, &[0, 2]),
        ],
    )
}

/// `(x₁x₂ − 1)² + x₂²`: infimum 0, not attained.
pub fn nonattained() -> Poly {
    ints(2, &[(1, 1, &[2, 2]), (-2, 1, &[1, 1]), (1, 1, &[0, 0]), (1, 1, &[0, 2])])
}

/// Built-in problems, all with `r = 1..=6` and methods `{jacobi, theta}`.
pub fn library() -> Vec<ProblemSpec> {
    let both = [Method::Jacobi, Method::Theta];
    let r: Vec<usize> = (1..=6).collect();
    let box2 = spec(MeasureKind::BoxUniform, 2);
    let entries = vec![
        ("legendre", Poly::var(1, 0).expect("n = 1"), spec(MeasureKind::BoxUniform, 1)),
        ("motzkin", motzkin(), box2),
        ("matyas", matyas(), box2),
        ("booth", booth(), box2),
        ("camel", three_hump_camel(), box2),
        ("nonattained-gaussian", nonattained(), spec(MeasureKind::GaussianStd, 2)),
        ("cube01-sum", ints(2, &[(1, 1, &[1, 0]), (1, 1, &[0, 1])]), spec(MeasureKind::HypercubeCounting01, 2)),
    ];
    entries
        .into_iter()
        .map(|(name, f, m)| ProblemSpec::new(name, f, m, r.clone(), both).expect("library problem"))
        .collect()
}

pub fn library_problem(name: &str) -> Option<ProblemSpec> {
    library().into_iter().find(|p| p.name == name)
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub oracle_budget: usize,
    pub pencil: PencilOptions,
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oracle_budget: DEFAULT_BUDGET,
            pencil: PencilOptions::default(),
            parallel: true,
        }
    }
}

/// Seconds spent per method on one row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub jacobi: Option<f64>,
    pub pencil: Option<f64>,
    pub theta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    /// Requested order.
    pub r: usize,
    /// Order used for the univariate bounds, `min(r, max_valid_r)`.
    pub r_used: usize,
    pub tau_lower: Option<f64>,
    pub tau_upper: Option<f64>,
    pub pencil_lower: Option<f64>,
    pub pencil_upper: Option<f64>,
    pub pencil_residual: Option<f64>,
    pub theta_lower: Option<f64>,
    pub theta_upper: Option<f64>,
    pub oracle_min: f64,
    pub oracle_max: f64,
    /// Check violations.
    pub flags: Vec<String>,
    /// Methods that failed on this row.
    pub errors: Vec<String>,
    #[serde(skip)]
    pub timings: Timings,
}

impl BoundsRow {
    pub fn clamped(&self) -> bool {
        self.r_used != self.r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub problem: String,
    pub measure: MeasureSpec,
    pub methods: Vec<Method>,
    pub oracle: OracleResult,
    /// Largest `r` with a positive definite Hankel matrix, when the
    /// pushforward has finite support.
    pub max_valid_r: Option<usize>,
    pub notes: Vec<String>,
    pub rows: Vec<BoundsRow>,
}

fn slack(v: f64) -> f64 {
    REPORT_TOL * v.abs().max(1.0)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

struct Shared<'a> {
    problem: &'a ProblemSpec,
    seq: Option<MomentSequence>,
    rec: Option<MonicRecurrence>,
    opts: &'a RunOptions,
    oracle: OracleResult,
}

impl Shared<'_> {
    fn row(&self, r: usize) -> BoundsRow {
        let methods = &self.problem.methods;
        let r_used = match &self.rec {
            Some(rec) => r.min(rec.max_valid_r),
            None => r,
        };
        let mut row = BoundsRow {
            r,
            r_used,
            tau_lower: None,
            tau_upper: None,
            pencil_lower: None,
            pencil_upper: None,
            pencil_residual: None,
            theta_lower: None,
            theta_upper: None,
            oracle_min: self.oracle.min_est,
            oracle_max: self.oracle.max_est,
            flags: Vec::new(),
            errors: Vec::new(),
            timings: Timings::default(),
        };
        if methods.contains(&Method::Jacobi) {
            if let Some(rec) = &self.rec {
                let (res, secs) = timed(|| tau_from_recurrence(rec, r_used));
                row.timings.jacobi = Some(secs);
                match res {
                    Ok((lo, hi)) => {
                        row.tau_lower = Some(lo);
                        row.tau_upper = Some(hi);
                    }
                    Err(e) => row.errors.push(format!("jacobi: {e}")),
                }
            }
        }
        if methods.contains(&Method::Pencil) {
            if let Some(seq) = &self.seq {
                let (res, secs) = timed(|| pencil_bounds(seq, r_used, &self.opts.pencil));
                row.timings.pencil = Some(secs);
                match res {
                    Ok(p) => {
                        row.pencil_lower = Some(p.lambda_min);
                        row.pencil_upper = Some(p.lambda_max);
                        row.pencil_residual = Some(p.residual);
                        if row.tau_lower.is_none() && !methods.contains(&Method::Jacobi) {
                            row.tau_lower = Some(p.lambda_min);
                            row.tau_upper = Some(p.lambda_max);
                        }
                    }
                    Err(e) => row.errors.push(format!("pencil: {e}")),
                }
            }
        }
        if methods.contains(&Method::Theta) {
            let (res, secs) = timed(|| theta_pencil(&self.problem.f, &self.problem.measure, r, &self.opts.pencil));
            row.timings.theta = Some(secs);
            match res {
                Ok(p) => {
                    row.theta_lower = Some(p.lambda_min);
                    row.theta_upper = Some(p.lambda_max);
                }
                Err(e) => row.errors.push(format!("theta: {e}")),
            }
        }
        row
    }
}

/// Sandwich checks are meaningful against an exact oracle, or against any
/// oracle on a compact set (the estimate there is itself attained).
fn check_rows(rows: &mut [BoundsRow], oracle: &OracleResult, measure: &MeasureSpec) {
    let sandwich = oracle.certified || measure.is_compact();
    for i in 0..rows.len() {
        let mut flags = Vec::new();
        let row = &rows[i];
        if sandwich {
            let pairs = [
                ("tau", row.tau_lower, row.tau_upper),
                ("pencil", row.pencil_lower, row.pencil_upper),
                ("theta", row.theta_lower, row.theta_upper),
            ];
            for (name, lo, hi) in pairs {
                if let Some(lo) = lo {
                    if lo < oracle.min_est - slack(oracle.min_est) {
                        flags.push(format!("{name}_lower below oracle min"));
                    }
                }
                if let Some(hi) = hi {
                    if hi > oracle.max_est + slack(oracle.max_est) {
                        flags.push(format!("{name}_upper above oracle max"));
                    }
                }
            }
        }
        if i > 0 {
            let prev = &rows[i - 1];
            let pairs = [
                ("tau", prev.tau_lower, row.tau_lower, prev.tau_upper, row.tau_upper),
                ("theta", prev.theta_lower, row.theta_lower, prev.theta_upper, row.theta_upper),
            ];
            for (name, plo, lo, phi, hi) in pairs {
                if let (Some(plo), Some(lo)) = (plo, lo) {
                    if lo > plo + slack(plo) {
                        flags.push(format!("{name}_lower increased"));
                    }
                }
                if let (Some(phi), Some(hi)) = (phi, hi) {
                    if hi < phi - slack(phi) {
                        flags.push(format!("{name}_upper decreased"));
                    }
                }
            }
        }
        rows[i].flags = flags;
    }
}

/// Runs every requested method at every `r` of `problem`.
///
/// The pushforward moments are computed once up to `2·max r + 1`. Orders
/// beyond the rank of the Hankel matrix are clamped to `max_valid_r`. Method
/// failures at a particular `r` are recorded in the row, not returned.
pub fn run_bounds(problem: &ProblemSpec) -> Result<BoundsReport> {
    run_bounds_with(problem, &RunOptions::default())
}

pub fn run_bounds_with(problem: &ProblemSpec, opts: &RunOptions) -> Result<BoundsReport> {
    let methods = &problem.methods;
    let univariate = methods.contains(&Method::Jacobi) || methods.contains(&Method::Pencil);
    let mut notes = Vec::new();
    let (seq, rec) = if univariate {
        let max_r = problem.max_r();
        let seq = pushforward_moments(&problem.f, &problem.measure, 2 * max_r + 1)?;
        let rec = monic_recurrence_from_moments(&seq, max_r)?;
        if rec.rank_limited && rec.max_valid_r < max_r {
            notes.push(format!(
                "pushforward has {} support points; r clamped to {}",
                rec.max_valid_r + 1,
                rec.max_valid_r
            ));
        }
        (Some(seq), Some(rec))
    } else {
        (None, None)
    };
    let oracle = oracle_minmax(&problem.f, &problem.measure, opts.oracle_budget.max(1));
    if !oracle.certified {
        notes.push("oracle values are estimates".into());
    }
    let shared = Shared {
        problem,
        seq,
        rec,
        opts,
        oracle,
    };
    let mut rows: Vec<BoundsRow> = if opts.parallel {
        problem.r_values.par_iter().map(|&r| shared.row(r)).collect()
    } else {
        problem.r_values.iter().map(|&r| shared.row(r)).collect()
    };
    check_rows(&mut rows, &oracle, &problem.measure);
    let max_valid_r = shared.rec.as_ref().filter(|r| r.rank_limited).map(|r| r.max_valid_r);
    Ok(BoundsReport {
        problem: problem.name.clone(),
        measure: problem.measure,
        methods: methods.iter().copied().collect(),
        oracle,
        max_valid_r,
        notes,
        rows,
    })
}

/// Shortest round-trip form, in scientific notation outside `[1e-4, 1e15)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

impl BoundsReport {
    /// True when some method failed at the smallest requested `r`.
    pub fn failed_at_min_r(&self) -> bool {
        self.rows.first().is_some_and(|r| !r.errors.is_empty())
    }

    /// True when any row carries a check violation.
    pub fn has_violations(&self) -> bool {
        self.rows.iter().any(|r| !r.flags.is_empty())
    }

    pub fn to_csv(&self, with_timings: bool) -> String {
        let mut out = String::from(
            "problem,r,r_used,tau_lower,tau_upper,pencil_lower,pencil_upper,pencil_residual,theta_lower,theta_upper,oracle_min,oracle_max,certified,flags,errors",
        );
        if with_timings {
            out.push_str(",jacobi_s,pencil_s,theta_s");
        }
        out.push('\n');
        for row in &self.rows {
            let fields = [
                self.problem.clone(),
                row.r.to_string(),
                row.r_used.to_string(),
                cell(row.tau_lower),
                cell(row.tau_upper),
                cell(row.pencil_lower),
                cell(row.pencil_upper),
                cell(row.pencil_residual),
                cell(row.theta_lower),
                cell(row.theta_upper),
                format_float(row.oracle_min),
                format_float(row.oracle_max),
                self.oracle.certified.to_string(),
                row.flags.join(";"),
                row.errors.join(";").replace(',', " "),
            ];
            out.push_str(&fields.join(","));
            if with_timings {
                for t in [row.timings.jacobi, row.timings.pencil, row.timings.theta] {
                    out.push(',');
                    out.push_str(&cell(t));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self, with_timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if with_timings {
            if let Some(rows) = v.get_mut("rows").and_then(Value::as_array_mut) {
                for (jr, row) in rows.iter_mut().zip(&self.rows) {
                    jr["timings"] = json!(row.timings);
                }
            }
        }
        v
    }

    pub fn to_json(&self, with_timings: bool) -> String {
        serde_json::to_string_pretty(&self.to_json_value(with_timings)).expect("report serializes")
    }
}
