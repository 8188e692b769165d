//! Threshold functions, the finite case list for a fixed `s`, and the sweep
//! that certifies every case.
//!
//! For fixed `s`, nondefectivity of `sigma_s(Split_d(P^n))` for all `(n, d)`
//! reduces to finitely many rank computations: three families of `(n, d)`
//! bounded by the thresholds [`s1`] and [`s2`] and by the first subabundant
//! `n`. Quadrics are handled by their closed form.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff_linalg::PrimeModulus;
use crate::monomials::binomial;
use crate::serde_dec::{decimal, decimal_prime};
use crate::terracini::{
    ambient_dimension, d2_dimension, expected_dimension, secant_dimension, Statement,
    TerraciniError,
};

/// Guard for the ascending scans; the real bounds are tiny.
pub const SCAN_CEILING: u32 = 10_000;

/// Quadric cases up to this `n` are also confirmed by rank, not only by the
/// closed form.
pub const D2_RANK_CHECK_MAX_N: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConjectureError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("scan for {0} passed {SCAN_CEILING} without terminating")]
    ScanCeiling(&'static str),
    #[error("could not build a worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Terracini(#[from] TerraciniError),
}

/// A nonnegative rational with denominator dividing 18, stored as a count of
/// eighteenths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThresholdValue {
    eighteenths: u64,
}

impl ThresholdValue {
    pub fn from_eighteenths(eighteenths: u64) -> Self {
        ThresholdValue { eighteenths }
    }

    pub fn from_integer(k: u64) -> Self {
        ThresholdValue {
            eighteenths: 18 * k,
        }
    }

    pub fn eighteenths(&self) -> u64 {
        self.eighteenths
    }

    /// `(numerator, denominator)` in lowest terms.
    pub fn fraction(&self) -> (u64, u64) {
        let g = gcd(self.eighteenths, 18);
        (self.eighteenths / g, 18 / g)
    }

    pub fn to_f64(&self) -> f64 {
        self.eighteenths as f64 / 18.0
    }

    /// Compares with the integer `k` exactly.
    pub fn cmp_integer(&self, k: u64) -> Ordering {
        self.eighteenths.cmp(&(18 * k))
    }
}

impl fmt::Display for ThresholdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fraction() {
            (num, 1) => write!(f, "{num}"),
            (num, den) => write!(f, "{num}/{den}"),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn check_degree(d: u32) -> Result<u64, ConjectureError> {
    if d < 3 {
        return Err(ConjectureError::InvalidArgument(format!(
            "threshold functions need d >= 3, got {d}"
        )));
    }
    Ok(d as u64)
}

/// Lower threshold `s1(d)`, piecewise in `d mod 6`.
pub fn s1(d: u32) -> Result<ThresholdValue, ConjectureError> {
    let d = check_degree(d)?;
    let sq = d * d;
    let num = match d % 6 {
        0 => sq + 3 * d + 18,
        1 => sq + 4 * d - 5,
        2 | 5 => sq + 5 * d + 4,
        3 => sq + 3 * d,
        _ => sq + 4 * d + 4,
    };
    Ok(ThresholdValue::from_eighteenths(num))
}

/// Upper threshold `s2(d)`, piecewise in `d mod 6`.
pub fn s2(d: u32) -> Result<ThresholdValue, ConjectureError> {
    let d = check_degree(d)?;
    let sq = d * d;
    let num = match d % 6 {
        0 => sq + 6 * d + 18,
        1 => sq + 7 * d + 28,
        2 => sq + 8 * d + 16,
        3 => sq + 6 * d + 9,
        4 => sq + 7 * d + 10,
        _ => sq + 8 * d + 7,
    };
    Ok(ThresholdValue::from_eighteenths(num))
}

/// Which family of the case list an `(n, d)` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Clause {
    /// Cubics, `n` between the first `n` with `s < s2(n)` and the first
    /// subabundant `n`.
    I,
    /// `4 <= d <= max{d : s >= s2(d)}`, `4 <= n <=` first subabundant `n`.
    Ii,
    /// `min{d : s < s2(d)} <= d <= max{d : s > s1(d)}`, `3 <= n <=` first subabundant `n`.
    Iii,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::I => "i",
            Clause::Ii => "ii",
            Clause::Iii => "iii",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Case {
    pub n: u32,
    pub d: u32,
    pub clause: Clause,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseList {
    pub s: u32,
    pub cases: Vec<Case>,
}

/// Least `n >= 1` with `s(dn+1) <= binom(n+d, d)`.
pub fn first_subabundant_n(d: u32, s: u32) -> Result<u32, ConjectureError> {
    (1..=SCAN_CEILING)
        .find(|&n| {
            let count = s as u64 * (d as u64 * n as u64 + 1);
            count <= ambient_dimension(n, d)
        })
        .ok_or(ConjectureError::ScanCeiling("first subabundant n"))
}

/// Least `x >= 3` with `pred(x)`.
fn scan_min(
    what: &'static str,
    pred: impl Fn(u32) -> Result<bool, ConjectureError>,
) -> Result<u32, ConjectureError> {
    for x in 3..=SCAN_CEILING {
        if pred(x)? {
            return Ok(x);
        }
    }
    Err(ConjectureError::ScanCeiling(what))
}

/// Greatest `d >= 3` with `pred(d)`, if any. Both thresholds exceed `d^2/18`,
/// so nothing past `d^2 > 18s` can qualify.
fn scan_max(
    s: u32,
    pred: impl Fn(u32) -> Result<bool, ConjectureError>,
) -> Result<Option<u32>, ConjectureError> {
    let mut best = None;
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= 18 * s as u64 {
        if pred(d)? {
            best = Some(d);
        }
        d += 1;
    }
    Ok(best)
}

/// The finite list of `(n, d)` whose nondefectivity for this `s`, together
/// with the cubic and three-variable results and induction on `n`, settles
/// every `(n, d)` with `d >= 3`. A pair satisfying several clauses is listed
/// once, under the first.
pub fn enumerate_cases(s: u32) -> Result<CaseList, ConjectureError> {
    if s < 1 {
        return Err(ConjectureError::InvalidArgument(
            "s must be at least 1".into(),
        ));
    }
    let sv = s as u64;
    let mut cases: Vec<Case> = Vec::new();
    let mut push = |n: u32, d: u32, clause: Clause| {
        if !cases.iter().any(|c| c.n == n && c.d == d) {
            cases.push(Case { n, d, clause });
        }
    };

    // clause (i): the threshold is applied to n
    let n_lo = scan_min("clause (i) lower n", |n| Ok(s2(n)?.cmp_integer(sv).is_gt()))?;
    for n in n_lo..=first_subabundant_n(3, s)? {
        push(n, 3, Clause::I);
    }

    if let Some(d_hi) = scan_max(s, |d| Ok(s2(d)?.cmp_integer(sv).is_le()))? {
        for d in 4..=d_hi {
            for n in 4..=first_subabundant_n(d, s)? {
                push(n, d, Clause::Ii);
            }
        }
    }

    let d_lo = scan_min("clause (iii) lower d", |d| {
        Ok(s2(d)?.cmp_integer(sv).is_gt())
    })?;
    if let Some(d_hi) = scan_max(s, |d| Ok(s1(d)?.cmp_integer(sv).is_lt()))? {
        for d in d_lo..=d_hi {
            for n in 3..=first_subabundant_n(d, s)? {
                push(n, d, Clause::Iii);
            }
        }
    }
    Ok(CaseList { s, cases })
}

/// Every `(n, d)` with `d >= 3` and `2 <= n <=` first subabundant `n`, for
/// degrees up to the first one whose first subabundant `n` is at most 2.
/// Superset of [`enumerate_cases`] that does not lean on the cubic and
/// three-variable results.
pub fn enumerate_wide(s: u32) -> Result<Vec<(u32, u32)>, ConjectureError> {
    if s < 1 {
        return Err(ConjectureError::InvalidArgument(
            "s must be at least 1".into(),
        ));
    }
    let mut out = Vec::new();
    for d in 3..=SCAN_CEILING {
        let n_hi = first_subabundant_n(d, s)?;
        for n in 2..=n_hi {
            out.push((n, d));
        }
        if n_hi <= 2 {
            return Ok(out);
        }
    }
    Err(ConjectureError::ScanCeiling("widened degree range"))
}

/// `ceil(binom(n+d, d) / (dn+1))`, the generic Chow rank when
/// `Split_d(P^n)` has nondefective secants. Quadrics need [`generic_chow_rank_d2`].
pub fn generic_chow_rank(n: u32, d: u32) -> Result<u64, ConjectureError> {
    if n < 1 || d < 1 {
        return Err(ConjectureError::InvalidArgument(format!(
            "need n, d >= 1, got n={n} d={d}"
        )));
    }
    if d == 2 {
        return Err(ConjectureError::InvalidArgument(
            "quadric Chow varieties are defective; use generic_chow_rank_d2".into(),
        ));
    }
    let size = binomial(n as u64 + d as u64, d as u64)
        .ok_or_else(|| ConjectureError::InvalidArgument("binomial overflow".into()))?;
    Ok(size.div_ceil(d as u64 * n as u64 + 1))
}

/// Least `s` for which the quadric secant variety fills the ambient space.
pub fn generic_chow_rank_d2(n: u32) -> Result<u64, ConjectureError> {
    if n < 1 {
        return Err(ConjectureError::InvalidArgument(
            "n must be at least 1".into(),
        ));
    }
    let full = ambient_dimension(n, 2) - 1;
    (1..=SCAN_CEILING)
        .find(|&s| d2_dimension(n, s) == full)
        .map(u64::from)
        .ok_or(ConjectureError::ScanCeiling("quadric rank"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseMethod {
    /// Modular rank of the Terracini matrix.
    Rank,
    /// Quadric closed form.
    ClosedForm,
    /// Quadric closed form, also matched by modular rank.
    ClosedFormAndRank,
}

/// One `(n, d, s)` examined by the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub n: u32,
    pub d: u32,
    pub s: u32,
    /// `None` for quadrics and for widened cases outside the three clauses.
    pub clause: Option<Clause>,
    pub method: CaseMethod,
    pub dim: u64,
    pub expected: u64,
    pub nondefective: bool,
    #[serde(with = "decimal")]
    pub seed: u64,
    pub trials_used: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjectureOptions {
    pub s_max: u32,
    pub trials: u32,
    pub seed: u64,
    pub prime: PrimeModulus,
    pub jobs: usize,
    pub no_trust: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub s_max: u32,
    #[serde(with = "decimal_prime")]
    pub prime: PrimeModulus,
    #[serde(with = "decimal")]
    pub root_seed: u64,
    pub no_trust: bool,
    /// Nondefective cases, sorted by `(s, d, n)`.
    pub verified: Vec<CaseRecord>,
    /// Quadric cases with `2 <= s <= n/2`, which are defective.
    pub exceptions_confirmed: Vec<CaseRecord>,
    /// Cases whose outcome disagrees with the conjectured one.
    pub failures: Vec<CaseRecord>,
}

impl ConjectureReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The expected exception set for quadrics.
pub fn is_quadric_exception(n: u32, s: u32) -> bool {
    s >= 2 && 2 * s <= n
}

enum Job {
    Case {
        n: u32,
        d: u32,
        s: u32,
        clause: Option<Clause>,
    },
    Quadric {
        n: u32,
        s: u32,
    },
}

fn run_job(job: &Job, opts: &ConjectureOptions) -> Result<CaseRecord, ConjectureError> {
    match *job {
        Job::Case { n, d, s, clause } => {
            let seed = Statement::secant(n, d, s)?.seed(opts.seed);
            let r = secant_dimension(n, d, s, opts.trials, seed, opts.prime)?;
            Ok(CaseRecord {
                n,
                d,
                s,
                clause,
                method: CaseMethod::Rank,
                dim: r.dim_lower_bound,
                expected: r.expected,
                nondefective: r.nondefective_certified,
                seed: r.seed,
                trials_used: r.trials_used,
            })
        }
        Job::Quadric { n, s } => {
            let expected = expected_dimension(n, 2, s);
            let closed = d2_dimension(n, s);
            let mut record = CaseRecord {
                n,
                d: 2,
                s,
                clause: None,
                method: CaseMethod::ClosedForm,
                dim: closed,
                expected,
                nondefective: closed == expected,
                seed: 0,
                trials_used: 0,
            };
            if n <= D2_RANK_CHECK_MAX_N {
                let seed = Statement::secant(n, 2, s)?.seed(opts.seed);
                let r = secant_dimension(n, 2, s, opts.trials, seed, opts.prime)?;
                record.seed = r.seed;
                record.trials_used = r.trials_used;
                if r.dim_lower_bound == closed {
                    record.method = CaseMethod::ClosedFormAndRank;
                } else {
                    // rank disagrees with the closed form: surface it as a failure
                    record.method = CaseMethod::Rank;
                    record.dim = r.dim_lower_bound;
                }
            }
            Ok(record)
        }
    }
}

fn jobs_for(opts: &ConjectureOptions) -> Result<Vec<Job>, ConjectureError> {
    let mut jobs = Vec::new();
    for s in 1..=opts.s_max {
        let list = enumerate_cases(s)?;
        for c in &list.cases {
            jobs.push(Job::Case {
                n: c.n,
                d: c.d,
                s,
                clause: Some(c.clause),
            });
        }
        if opts.no_trust {
            for (n, d) in enumerate_wide(s)? {
                if !list.cases.iter().any(|c| c.n == n && c.d == d) {
                    jobs.push(Job::Case {
                        n,
                        d,
                        s,
                        clause: None,
                    });
                }
            }
        }
        for n in 1..=2 * opts.s_max + 1 {
            jobs.push(Job::Quadric { n, s });
        }
    }
    Ok(jobs)
}

/// Runs [`verify_conjecture_with`] without progress reporting.
pub fn verify_conjecture(opts: &ConjectureOptions) -> Result<ConjectureReport, ConjectureError> {
    verify_conjecture_with(opts, |_| {})
}

/// Certifies every listed case for `s <= s_max` and checks the quadric
/// closed form over `1 <= n <= 2 s_max + 1`. `progress` sees each record as
/// it completes, in completion order; the report itself is sorted.
pub fn verify_conjecture_with<F>(
    opts: &ConjectureOptions,
    progress: F,
) -> Result<ConjectureReport, ConjectureError>
where
    F: Fn(&CaseRecord) + Sync,
{
    if opts.s_max < 1 {
        return Err(ConjectureError::InvalidArgument(
            "s_max must be at least 1".into(),
        ));
    }
    if opts.jobs < 1 {
        return Err(ConjectureError::InvalidArgument(
            "jobs must be at least 1".into(),
        ));
    }
    let jobs = jobs_for(opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| ConjectureError::Pool(e.to_string()))?;
    let records: Vec<CaseRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let r = run_job(job, opts)?;
                progress(&r);
                Ok(r)
            })
            .collect::<Result<_, ConjectureError>>()
    })?;

    let mut report = ConjectureReport {
        s_max: opts.s_max,
        prime: opts.prime,
        root_seed: opts.seed,
        no_trust: opts.no_trust,
        verified: Vec::new(),
        exceptions_confirmed: Vec::new(),
        failures: Vec::new(),
    };
    for r in records {
        let exceptional = r.d == 2 && is_quadric_exception(r.n, r.s);
        let agrees_with_closed_form = r.d != 2 || r.method != CaseMethod::Rank;
        match (exceptional, r.nondefective) {
            (false, true) if agrees_with_closed_form => report.verified.push(r),
            (true, false) if agrees_with_closed_form => report.exceptions_confirmed.push(r),
            _ => report.failures.push(r),
        }
    }
    let key = |r: &CaseRecord| (r.s, r.d, r.n);
    report.verified.sort_by_key(key);
    report.exceptions_confirmed.sort_by_key(key);
    report.failures.sort_by_key(key);
    Ok(report)
}
