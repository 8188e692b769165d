//! Rank of a matrix over a prime field, with a planted low-rank product.

use chowsec::ff_linalg::{rank, rank_bounded, sample_uniform, DenseMatrix, PrimeModulus};

fn random_matrix(rows: usize, cols: usize, seed: u64, p: PrimeModulus) -> DenseMatrix {
    let entries = sample_uniform(rows * cols, seed, p);
    DenseMatrix::from_entries(rows, cols, entries).unwrap()
}

fn main() {
    let p = PrimeModulus::default();
    for (rows, inner, cols) in [(40, 7, 60), (200, 150, 300), (500, 499, 500)] {
        let a = random_matrix(rows, inner, 1, p);
        let b = random_matrix(inner, cols, 2, p);
        let m = a.mul(&b, p);
        println!("{rows}x{inner} times {inner}x{cols}: rank {}", rank(m, p));
    }

    // stop as soon as the rank reaches a known ceiling
    let m = random_matrix(400, 400, 3, p);
    println!("bounded at 100: {}", rank_bounded(m, p, 100));

    // a second prime above 2^31 takes the wide kernel
    let q = PrimeModulus::new((1 << 61) - 1).unwrap();
    let a = random_matrix(30, 12, 4, q);
    let b = random_matrix(12, 30, 5, q);
    println!("mod 2^61-1: rank {}", rank(a.mul(&b, q), q));
}
