//! Command-line front end. [`run`] parses arguments and dispatches to the
//! `cmd_*` functions, which write machine-readable output to `out` and
//! progress or diagnostics to `err`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::conjecture::{
    enumerate_cases, first_subabundant_n, generic_chow_rank, generic_chow_rank_d2, s1, s2,
    verify_conjecture_with, CaseMethod, CaseRecord, ConjectureOptions, ConjectureReport,
};
use crate::ff_linalg::{PrimeModulus, DEFAULT_SEED};
use crate::inductor::{BasePolicy, CertificateFile, InductorError, Method, Prover, ProverConfig};
use crate::terracini::{
    a_value, ambient_dimension, check_statement, d2_dimension, expected_dimension,
    secant_dimension, Statement, TerraciniError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNCERTIFIED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub prime: PrimeModulus,
    pub seed: u64,
    pub trials: u32,
    pub jobs: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub no_trust: bool,
    pub explain: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime: PrimeModulus::default(),
            seed: DEFAULT_SEED,
            trials: 3,
            jobs: 1,
            output: None,
            format: Format::Text,
            no_trust: false,
            explain: false,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "chowsec",
    version,
    about = "Secant dimensions of Chow varieties over a prime field"
)]
struct Cli {
    /// Prime modulus for the rank computations.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Root seed: a 64-bit integer or `random`.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Specializations tried before giving up on a statement.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    trials: u32,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also check the cases covered by the cubic and three-variable results.
    #[arg(long, global = true)]
    no_trust: bool,
    /// Describe how the case ranges were derived.
    #[arg(long, global = true)]
    explain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension of the s-th secant variety of Split_d(P^n).
    Dim(DimArgs),
    /// Check one statement A(n,d,s,t,u,v) by rank.
    Statement(StatementArgs),
    /// Search for a certificate proving a statement.
    Prove(ProveArgs),
    /// Replay a certificate file.
    VerifyCert(VerifyArgs),
    /// Certify every case for secant index up to --max-s.
    Conjecture(ConjectureArgs),
    /// Quadric dimensions or generic Chow ranks.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DimArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub d: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub s: u32,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct StatementArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    #[arg(long, default_value_t = 0)]
    pub t: u32,
    #[arg(long, default_value_t = 0)]
    pub u: u32,
    #[arg(long, default_value_t = 0)]
    pub v: u32,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ProveArgs {
    #[command(flatten)]
    pub statement: StatementArgs,
    /// Largest basis size checked directly.
    #[arg(long, default_value_t = 5000)]
    pub max_basis: u64,
    /// Largest n checked directly.
    #[arg(long)]
    pub max_direct_n: Option<u32>,
    /// Memo entries before the search gives up.
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ConjectureArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_s: u32,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TableArgs {
    /// Only degree 2 is tabulated by closed form.
    #[arg(long, conflicts_with = "chow_rank")]
    pub d: Option<u32>,
    /// Tabulate generic Chow ranks instead.
    #[arg(long)]
    pub chow_rank: bool,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_n: u32,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_d: u32,
}

/// Errors that end a command early.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<TerraciniError> for CliError {
    fn from(e: TerraciniError) -> Self {
        match e {
            TerraciniError::InvalidStatement(..) | TerraciniError::InvalidParameters(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

type CmdResult = Result<i32, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let cfg = match run_config(&cli, stderr) {
        Ok(cfg) => cfg,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let result = match &cfg.output {
        Some(path) => match fs::File::create(path) {
            Ok(file) => {
                let mut w = io::BufWriter::new(file);
                let r = dispatch(&cli.command, &cfg, &mut w, stderr);
                w.flush().map_err(CliError::from).and(r)
            }
            Err(e) => Err(CliError::Usage(format!(
                "cannot create {}: {e}",
                path.display()
            ))),
        },
        None => dispatch(&cli.command, &cfg, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn run_config(cli: &Cli, stderr: &mut (dyn Write + Send)) -> Result<RunConfig, String> {
    let prime = match cli.prime {
        Some(p) => PrimeModulus::new(p).map_err(|e| e.to_string())?,
        None => PrimeModulus::default(),
    };
    let seed = match cli.seed.as_deref() {
        None => DEFAULT_SEED,
        Some("random") => {
            let seed = rand::random::<u64>();
            let _ = writeln!(stderr, "seed: {seed}");
            seed
        }
        Some(s) => s
            .parse()
            .map_err(|_| format!("--seed expects a 64-bit integer or `random`, got {s:?}"))?,
    };
    Ok(RunConfig {
        prime,
        seed,
        trials: cli.trials,
        jobs: cli.jobs as usize,
        output: cli.out.clone(),
        format: cli.format,
        no_trust: cli.no_trust,
        explain: cli.explain,
    })
}

fn dispatch(
    cmd: &Command,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut (dyn Write + Send),
) -> CmdResult {
    match cmd {
        Command::Dim(a) => cmd_dim(a, cfg, out),
        Command::Statement(a) => cmd_statement(a, cfg, out),
        Command::Prove(a) => cmd_prove(a, cfg, out, err),
        Command::VerifyCert(a) => cmd_verify_cert(&a.path, cfg, out),
        Command::Conjecture(a) => cmd_conjecture(a, cfg, out, err),
        Command::Table(a) => cmd_table(a, cfg, out, err),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct DimReport {
    n: u32,
    d: u32,
    s: u32,
    dim: u64,
    expected: u64,
    certified: bool,
    fills: bool,
    prime: String,
    seed: String,
    trials_used: u32,
}

/// `dim`: lower bound on the secant dimension; exit 0 iff it meets the
/// expected dimension.
pub fn cmd_dim(a: &DimArgs, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let seed = Statement::secant(a.n, a.d, a.s)?.seed(cfg.seed);
    let r = secant_dimension(a.n, a.d, a.s, cfg.trials, seed, cfg.prime)?;
    let report = DimReport {
        n: a.n,
        d: a.d,
        s: a.s,
        dim: r.dim_lower_bound,
        expected: r.expected,
        certified: r.nondefective_certified,
        fills: r.fills_ambient,
        prime: cfg.prime.to_string(),
        seed: r.seed.to_string(),
        trials_used: r.trials_used,
    };
    match cfg.format {
        Format::Text => {
            if r.nondefective_certified {
                writeln!(
                    out,
                    "dim={} expected={} CERTIFIED fills={}",
                    r.dim_lower_bound,
                    r.expected,
                    yes_no(r.fills_ambient)
                )?;
            } else {
                writeln!(
                    out,
                    "dim={} expected={} defective(evidence)",
                    r.dim_lower_bound, r.expected
                )?;
            }
        }
        Format::Json => write_json(out, &report)?,
        Format::Csv => write_csv(
            out,
            &[
                "n",
                "d",
                "s",
                "dim",
                "expected",
                "certified",
                "fills",
                "prime",
                "seed",
                "trials_used",
            ],
            &[vec![
                a.n.to_string(),
                a.d.to_string(),
                a.s.to_string(),
                report.dim.to_string(),
                report.expected.to_string(),
                report.certified.to_string(),
                report.fills.to_string(),
                report.prime.clone(),
                report.seed.clone(),
                report.trials_used.to_string(),
            ]],
        )?,
    }
    Ok(if r.nondefective_certified {
        EXIT_OK
    } else {
        EXIT_UNCERTIFIED
    })
}

#[derive(Serialize)]
struct StatementReport {
    statement: Statement,
    a: u64,
    ambient: u64,
    subabundant: bool,
    rank: Option<u64>,
    verdict: &'static str,
    prime: String,
    seed: Option<String>,
    trials_used: u32,
}

fn statement_of(a: &StatementArgs) -> Result<Statement, CliError> {
    Ok(Statement::new(a.n, a.d, a.s, a.t, a.u, a.v)?)
}

/// `statement`: rank check of one statement; exit 0 iff it is true.
pub fn cmd_statement(a: &StatementArgs, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let st = statement_of(a)?;
    let av = a_value(&st);
    let ambient = ambient_dimension(st.n, st.d);
    let mut report = StatementReport {
        statement: st,
        a: av,
        ambient,
        subabundant: av <= ambient,
        rank: None,
        verdict: "IMPOSSIBLE",
        prime: cfg.prime.to_string(),
        seed: None,
        trials_used: 0,
    };
    let text = if av > ambient {
        format!("a={av} binom={ambient} IMPOSSIBLE (a > binom)")
    } else {
        let o = check_statement(&st, cfg.trials, st.seed(cfg.seed), cfg.prime)?;
        report.rank = Some(o.achieved_rank);
        report.trials_used = o.trials_used;
        if o.trials_used > 0 {
            report.seed = Some(o.seed.to_string());
        }
        report.verdict = match (o.certified, av == 0) {
            (true, true) => "TRUE (vacuous)",
            (true, false) => "TRUE",
            (false, _) => "UNCERTIFIED",
        };
        format!(
            "a={av} subabundant rank={} {}",
            o.achieved_rank, report.verdict
        )
    };
    match cfg.format {
        Format::Text => writeln!(out, "{text}")?,
        Format::Json => write_json(out, &report)?,
        Format::Csv => write_csv(
            out,
            &[
                "n",
                "d",
                "s",
                "t",
                "u",
                "v",
                "a",
                "ambient",
                "subabundant",
                "rank",
                "verdict",
            ],
            &[st.as_array()
                .iter()
                .map(u32::to_string)
                .chain([
                    av.to_string(),
                    ambient.to_string(),
                    report.subabundant.to_string(),
                    report.rank.map(|r| r.to_string()).unwrap_or_default(),
                    report.verdict.to_string(),
                ])
                .collect()],
        )?,
    }
    Ok(if report.verdict.starts_with("TRUE") {
        EXIT_OK
    } else {
        EXIT_UNCERTIFIED
    })
}

/// `prove`: proof search; the certificate JSON goes to the output. Exit 0 iff proved.
pub fn cmd_prove(
    a: &ProveArgs,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut (dyn Write + Send),
) -> CmdResult {
    let st = statement_of(&a.statement)?;
    let config = ProverConfig {
        policy: BasePolicy {
            max_basis_size: a.max_basis,
            max_n: a.max_direct_n.unwrap_or(u32::MAX),
        },
        max_memo_entries: a.budget,
        trials: cfg.trials,
        root_seed: cfg.seed,
        prime: cfg.prime,
    };
    let mut prover = Prover::new(config);
    match prover.prove(&st) {
        Ok(cert) => {
            let direct = cert
                .walk()
                .iter()
                .filter(|(_, c)| c.method == Method::Direct)
                .count();
            writeln!(
                err,
                "proved {st}: method={} nodes={} depth={} direct={direct}",
                cert.method,
                cert.node_count(),
                cert.depth()
            )?;
            let file = CertificateFile::new(cert, cfg.prime, cfg.seed);
            writeln!(out, "{}", file.to_json())?;
            Ok(EXIT_OK)
        }
        Err(InductorError::Terracini(e)) => Err(e.into()),
        Err(e) => {
            writeln!(err, "not proved: {e}")?;
            Ok(EXIT_UNCERTIFIED)
        }
    }
}

/// `verify-cert`: replays a certificate file; exit 0 iff it checks out.
pub fn cmd_verify_cert(path: &Path, cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let (valid, detail) = match CertificateFile::from_json(&text) {
        Err(e) => (false, format!("malformed certificate: {e}")),
        Ok(file) => match file.verify() {
            Ok(()) => (
                true,
                format!("{} nodes={}", file.statement, file.tree.node_count()),
            ),
            Err(e) => (false, e.to_string()),
        },
    };
    let verdict = if valid { "VALID" } else { "INVALID" };
    match cfg.format {
        Format::Text => writeln!(out, "{verdict} {detail}")?,
        Format::Json => write_json(
            out,
            &serde_json::json!({ "valid": valid, "detail": detail }),
        )?,
        Format::Csv => write_csv(
            out,
            &["valid", "detail"],
            &[vec![valid.to_string(), csv_field(&detail)]],
        )?,
    }
    Ok(if valid { EXIT_OK } else { EXIT_UNCERTIFIED })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn record_status(r: &CaseRecord, report: &ConjectureReport) -> &'static str {
    if report.failures.contains(r) {
        "FAILED"
    } else if r.nondefective {
        "nondefective"
    } else {
        "defective"
    }
}

fn method_name(m: CaseMethod) -> &'static str {
    match m {
        CaseMethod::Rank => "rank",
        CaseMethod::ClosedForm => "closed_form",
        CaseMethod::ClosedFormAndRank => "closed_form+rank",
    }
}

fn conjecture_explanation(s_max: u32) -> Result<String, CliError> {
    let mut text = String::new();
    let e = |e: crate::conjecture::ConjectureError| CliError::Internal(e.to_string());
    let _ = writeln!(text, "case families for fixed s:");
    let _ = writeln!(
        text,
        "  (i)   d = 3, min{{n >= 3 : s < s2(n)}} <= n <= first subabundant n"
    );
    let _ = writeln!(text, "        (this family applies s2 to n, not to d)");
    let _ = writeln!(
        text,
        "  (ii)  4 <= d <= max{{d : s >= s2(d)}}, 4 <= n <= first subabundant n"
    );
    let _ = writeln!(
        text,
        "  (iii) min{{d : s < s2(d)}} <= d <= max{{d : s > s1(d)}}, 3 <= n <= first subabundant n"
    );
    let _ = writeln!(
        text,
        "  first subabundant n = min{{n : s(dn+1) <= binom(n+d, d)}}"
    );
    let _ = writeln!(
        text,
        "  quadrics: closed form, defective exactly when 2 <= s <= n/2"
    );
    for s in 1..=s_max {
        let list = enumerate_cases(s).map_err(e)?;
        let pairs: Vec<String> = list
            .cases
            .iter()
            .map(|c| format!("({},{}){}", c.n, c.d, c.clause))
            .collect();
        let _ = writeln!(text, "  s={s}: {} cases {}", pairs.len(), pairs.join(" "));
    }
    let _ = writeln!(text, "thresholds:");
    for d in 3..=12 {
        let _ = writeln!(
            text,
            "  d={d}: s1={} s2={} first subabundant n (s=1)={}",
            s1(d).map_err(e)?,
            s2(d).map_err(e)?,
            first_subabundant_n(d, 1).map_err(e)?
        );
    }
    Ok(text)
}

/// `conjecture`: certify every case with `s <= max_s`; exit 0 iff nothing failed.
pub fn cmd_conjecture(
    a: &ConjectureArgs,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut (dyn Write + Send),
) -> CmdResult {
    if cfg.explain {
        let text = conjecture_explanation(a.max_s)?;
        match cfg.format {
            Format::Text => write!(out, "{text}")?,
            _ => write!(err, "{text}")?,
        }
    }
    let opts = ConjectureOptions {
        s_max: a.max_s,
        trials: cfg.trials,
        seed: cfg.seed,
        prime: cfg.prime,
        jobs: cfg.jobs,
        no_trust: cfg.no_trust,
    };
    let started = Instant::now();
    let err_lock = Mutex::new(err);
    let report = verify_conjecture_with(&opts, |r| {
        if r.d != 2 {
            let mut e = err_lock.lock().unwrap_or_else(|p| p.into_inner());
            let mark = if r.nondefective { "ok" } else { "FAILED" };
            let _ = writeln!(e, "s={} n={} d={} dim={} {mark}", r.s, r.n, r.d, r.dim);
        }
    })
    .map_err(|e| CliError::Internal(e.to_string()))?;
    let elapsed = started.elapsed();
    let mut all: Vec<&CaseRecord> = report
        .verified
        .iter()
        .chain(&report.exceptions_confirmed)
        .chain(&report.failures)
        .collect();
    all.sort_by_key(|r| (r.s, r.d, r.n));
    match cfg.format {
        Format::Text => {
            writeln!(
                out,
                "{:>3} {:>4} {:>3} {:>6} {:>9} {:>9} {:<16} status",
                "s", "n", "d", "clause", "dim", "expected", "method"
            )?;
            for r in &all {
                writeln!(
                    out,
                    "{:>3} {:>4} {:>3} {:>6} {:>9} {:>9} {:<16} {}",
                    r.s,
                    r.n,
                    r.d,
                    r.clause
                        .map(|c| c.to_string())
                        .unwrap_or_else(|| "-".into()),
                    r.dim,
                    r.expected,
                    method_name(r.method),
                    record_status(r, &report)
                )?;
            }
            writeln!(
                out,
                "verified={} exceptions={} failures={} elapsed={:.1}s",
                report.verified.len(),
                report.exceptions_confirmed.len(),
                report.failures.len(),
                elapsed.as_secs_f64()
            )?;
        }
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = all
                .iter()
                .map(|r| {
                    vec![
                        r.s.to_string(),
                        r.n.to_string(),
                        r.d.to_string(),
                        r.clause.map(|c| c.to_string()).unwrap_or_default(),
                        r.dim.to_string(),
                        r.expected.to_string(),
                        method_name(r.method).to_string(),
                        record_status(r, &report).to_string(),
                        r.seed.to_string(),
                        r.trials_used.to_string(),
                    ]
                })
                .collect();
            write_csv(
                out,
                &[
                    "s",
                    "n",
                    "d",
                    "clause",
                    "dim",
                    "expected",
                    "method",
                    "status",
                    "seed",
                    "trials_used",
                ],
                &rows,
            )?;
        }
    }
    if cfg.format != Format::Text {
        let mut e = err_lock.lock().unwrap_or_else(|p| p.into_inner());
        writeln!(e, "elapsed {:.1}s", elapsed.as_secs_f64())?;
    }
    Ok(if report.success() {
        EXIT_OK
    } else {
        EXIT_UNCERTIFIED
    })
}

fn emit_table(
    cfg: &RunConfig,
    out: &mut dyn Write,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    match cfg.format {
        Format::Csv => write_csv(out, header, rows),
        Format::Text => {
            writeln!(out, "| {} |", header.join(" | "))?;
            writeln!(out, "|{}", "---|".repeat(header.len()))?;
            for row in rows {
                writeln!(out, "| {} |", row.join(" | "))?;
            }
            Ok(())
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|row| {
                    header
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
                        .collect()
                })
                .collect();
            write_json(out, &objects)
        }
    }
}

/// Quadric cases with `n` up to this bound are also checked by rank in tables.
const TABLE_RANK_CHECK_MAX_N: u32 = 12;

/// `table`: quadric secant dimensions (`--d 2`) or generic Chow ranks (`--chow-rank`).
pub fn cmd_table(
    a: &TableArgs,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut (dyn Write + Send),
) -> CmdResult {
    let internal = |e: crate::conjecture::ConjectureError| CliError::Internal(e.to_string());
    if a.chow_rank {
        let mut rows = Vec::new();
        let mut all_certified = true;
        for n in 1..=a.max_n {
            for d in 1..=a.max_d {
                writeln!(err, "chow rank n={n} d={d}")?;
                let (rank, status) = if d == 2 {
                    (
                        generic_chow_rank_d2(n).map_err(internal)?,
                        "closed_form".to_string(),
                    )
                } else {
                    let r = generic_chow_rank(n, d).map_err(internal)?;
                    let ok = chow_rank_certified(n, d, r as u32, cfg)?;
                    all_certified &= ok;
                    (r, if ok { "certified" } else { "uncertified" }.to_string())
                };
                rows.push(vec![n.to_string(), d.to_string(), rank.to_string(), status]);
            }
        }
        emit_table(cfg, out, &["n", "d", "generic_rank", "status"], &rows)?;
        return Ok(if all_certified {
            EXIT_OK
        } else {
            EXIT_UNCERTIFIED
        });
    }
    match a.d {
        Some(2) => {}
        Some(d) => {
            return Err(CliError::Usage(format!(
                "closed-form tables exist only for d = 2, got {d}"
            )))
        }
        None => return Err(CliError::Usage("pass --d 2 or --chow-rank".into())),
    }
    let mut rows = Vec::new();
    let mut agree = true;
    for n in 1..=a.max_n {
        let top = generic_chow_rank_d2(n).map_err(internal)? as u32;
        for s in 1..=top {
            let closed = d2_dimension(n, s);
            let expected = expected_dimension(n, 2, s);
            let status = if n <= TABLE_RANK_CHECK_MAX_N {
                let seed = Statement::secant(n, 2, s)?.seed(cfg.seed);
                let r = secant_dimension(n, 2, s, cfg.trials, seed, cfg.prime)?;
                let same = r.dim_lower_bound == closed;
                agree &= same;
                if same {
                    "rank_agrees"
                } else {
                    "rank_differs"
                }
            } else {
                "closed_form"
            };
            rows.push(vec![
                n.to_string(),
                s.to_string(),
                closed.to_string(),
                expected.to_string(),
                yes_no(closed < expected).to_string(),
                status.to_string(),
            ]);
        }
    }
    emit_table(
        cfg,
        out,
        &["n", "s", "dim", "expected", "defective", "status"],
        &rows,
    )?;
    Ok(if agree { EXIT_OK } else { EXIT_UNCERTIFIED })
}

/// `sigma_r` fills the ambient space and `sigma_{r-1}` has the expected dimension.
fn chow_rank_certified(n: u32, d: u32, r: u32, cfg: &RunConfig) -> Result<bool, CliError> {
    let check = |s: u32| -> Result<_, CliError> {
        let seed = Statement::secant(n, d, s)?.seed(cfg.seed);
        Ok(secant_dimension(n, d, s, cfg.trials, seed, cfg.prime)?)
    };
    let top = check(r)?;
    if !top.fills_ambient {
        return Ok(false);
    }
    if r == 1 {
        return Ok(true);
    }
    let below = check(r - 1)?;
    Ok(below.nondefective_certified && !below.fills_ambient)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("chowsec").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn dim_lines() {
        let (code, out, _) = run_args(&["dim", "--n", "3", "--d", "3", "--s", "2"]);
        assert_eq!(
            (code, out.trim()),
            (0, "dim=19 expected=19 CERTIFIED fills=yes")
        );
        let (code, out, _) = run_args(&["dim", "--n", "4", "--d", "2", "--s", "2"]);
        assert_eq!(
            (code, out.trim()),
            (2, "dim=13 expected=14 defective(evidence)")
        );
        let (code, _, err) = run_args(&["dim", "--n", "0", "--d", "3", "--s", "1"]);
        assert_eq!(code, 64, "{err}");
    }

    #[test]
    fn statement_lines() {
        let (code, out, _) = run_args(&["statement", "--n", "3", "--d", "2", "--u", "2"]);
        assert_eq!((code, out.trim()), (0, "a=6 subabundant rank=6 TRUE"));
        let (code, out, _) = run_args(&["statement", "--n", "3", "--d", "4", "--s", "3"]);
        assert_eq!(code, 2);
        assert!(out.contains("IMPOSSIBLE (a > binom)"), "{out}");
        let (code, out, _) = run_args(&["statement", "--n", "3", "--d", "4"]);
        assert_eq!(code, 0);
        assert!(out.trim().ends_with("TRUE (vacuous)"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&[]).0, 64);
        assert_eq!(run_args(&["--help"]).0, 0);
        assert_eq!(
            run_args(&["dim", "--n", "2", "--d", "2", "--s", "1", "--trials", "0"]).0,
            64
        );
        assert_eq!(
            run_args(&["dim", "--n", "2", "--d", "2", "--s", "1", "--prime", "100"]).0,
            64
        );
        assert_eq!(
            run_args(&["dim", "--n", "2", "--d", "2", "--s", "1", "--seed", "x"]).0,
            64
        );
        assert_eq!(run_args(&["table", "--d", "3", "--max-n", "2"]).0, 64);
    }
}
