//! Certify every case of the finite case list for `s <= S`.
//!
//!     cargo run --release --example conjecture_sweep -- 10 [jobs]

use std::time::Instant;

use chowsec::conjecture::{enumerate_cases, verify_conjecture_with, ConjectureOptions};
use chowsec::ff_linalg::{PrimeModulus, DEFAULT_SEED};

fn main() {
    let mut args = std::env::args().skip(1);
    let s_max: u32 = args
        .next()
        .map_or(6, |a| a.parse().expect("S must be an integer"));
    let jobs: usize = args
        .next()
        .map_or(1, |a| a.parse().expect("jobs must be an integer"));

    for s in 1..=s_max {
        let list = enumerate_cases(s).unwrap();
        let pairs: Vec<String> = list
            .cases
            .iter()
            .map(|c| format!("({},{})", c.n, c.d))
            .collect();
        println!("s={s:<3} {:>3} cases  {}", pairs.len(), pairs.join(" "));
    }

    let opts = ConjectureOptions {
        s_max,
        trials: 3,
        seed: DEFAULT_SEED,
        prime: PrimeModulus::default(),
        jobs,
        no_trust: false,
    };
    let start = Instant::now();
    let report = verify_conjecture_with(&opts, |r| {
        if r.d > 2 {
            eprintln!(
                "  s={} n={} d={} dim={} expected={} [{:.1}s]",
                r.s,
                r.n,
                r.d,
                r.dim,
                r.expected,
                start.elapsed().as_secs_f64()
            );
        }
    })
    .unwrap();
    println!(
        "verified {} cases, confirmed {} quadric exceptions, {} failures in {:.1}s",
        report.verified.len(),
        report.exceptions_confirmed.len(),
        report.failures.len(),
        start.elapsed().as_secs_f64()
    );
    for f in &report.failures {
        println!("FAILED {f:?}");
    }
    if let Some(peak) = peak_rss() {
        println!("peak resident memory: {peak}");
    }
}

/// Linux only; `None` elsewhere.
fn peak_rss() -> Option<String> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    Some(line["VmHWM:".len()..].trim().to_string())
}
