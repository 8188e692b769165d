//! Dimensions of secant varieties of Chow varieties via Terracini's lemma.
//!
//!     cargo run --release --example secant_dimension -- [n d s]

use chowsec::ff_linalg::{PrimeModulus, DEFAULT_SEED};
use chowsec::terracini::{d2_dimension, secant_dimension, Statement};

fn show(n: u32, d: u32, s: u32) {
    let p = PrimeModulus::default();
    let seed = Statement::secant(n, d, s).unwrap().seed(DEFAULT_SEED);
    let r = secant_dimension(n, d, s, 3, seed, p).unwrap();
    let verdict = if r.nondefective_certified {
        "nondefective"
    } else {
        "defective (evidence)"
    };
    let fills = if r.fills_ambient { ", fills" } else { "" };
    println!(
        "sigma_{s}(Split_{d}(P^{n})): dim >= {} expected {}  {verdict}{fills}",
        r.dim_lower_bound, r.expected
    );
}

fn main() {
    let args: Vec<u32> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("arguments are integers"))
        .collect();
    if let [n, d, s] = args[..] {
        show(n, d, s);
        return;
    }

    for (n, d, s) in [(3, 3, 2), (4, 3, 3), (2, 4, 2), (5, 4, 4)] {
        show(n, d, s);
    }
    println!("quadrics, against the closed form:");
    for n in [4, 6] {
        for s in 1..=n / 2 + 1 {
            show(n, 2, s);
            println!("  closed form: {}", d2_dimension(n, s));
        }
    }
}
