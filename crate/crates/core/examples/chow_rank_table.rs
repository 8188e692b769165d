//! Generic Chow ranks, each certified by two secant dimension computations.

use chowsec::conjecture::{generic_chow_rank, generic_chow_rank_d2};
use chowsec::ff_linalg::{PrimeModulus, DEFAULT_SEED};
use chowsec::terracini::{secant_dimension, Statement};

fn main() {
    let p = PrimeModulus::default();
    let max_n: u32 = std::env::args().nth(1).map_or(5, |a| a.parse().unwrap());
    println!("  n  d  rank  check");
    for n in 1..=max_n {
        for d in 1..=6 {
            if d == 2 {
                println!(
                    "{n:>3} {d:>2} {:>5}  closed form",
                    generic_chow_rank_d2(n).unwrap()
                );
                continue;
            }
            let r = generic_chow_rank(n, d).unwrap() as u32;
            let dim = |s: u32| {
                let seed = Statement::secant(n, d, s).unwrap().seed(DEFAULT_SEED);
                secant_dimension(n, d, s, 3, seed, p).unwrap()
            };
            let fills = dim(r).fills_ambient;
            let below_ok = r == 1 || {
                let b = dim(r - 1);
                b.nondefective_certified && !b.fills_ambient
            };
            let check = if fills && below_ok {
                "certified"
            } else {
                "uncertified"
            };
            println!("{n:>3} {d:>2} {r:>5}  {check}");
        }
    }
}
