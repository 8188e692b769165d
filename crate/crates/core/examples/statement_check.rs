//! Checking auxiliary statements A(n,d,s,t,u,v) by modular rank.

use chowsec::ff_linalg::{PrimeModulus, DEFAULT_SEED};
use chowsec::terracini::{a_value, ambient_dimension, check_statement, Statement};

fn main() {
    let p = PrimeModulus::default();
    let tuples = [
        [3, 3, 2, 0, 0, 0],
        [3, 2, 0, 0, 2, 0],
        [2, 3, 0, 4, 0, 0],
        [4, 3, 1, 1, 2, 1],
        [4, 4, 2, 0, 1, 1],
        [6, 2, 2, 0, 0, 0],
        [3, 4, 3, 0, 0, 0],
    ];
    for t in tuples {
        let st = Statement::try_from(t).unwrap();
        let a = a_value(&st);
        let ambient = ambient_dimension(st.n, st.d);
        match check_statement(&st, 3, st.seed(DEFAULT_SEED), p) {
            Ok(o) => println!(
                "{st}: a={a} ambient={ambient} rank={} after {} trial(s) -> {}",
                o.achieved_rank,
                o.trials_used,
                if o.certified { "true" } else { "not certified" }
            ),
            Err(e) => println!("{st}: {e}"),
        }
    }
}
