#![allow(dead_code)]

use std::collections::HashMap;

use chowsec::ff_linalg::{sample_uniform, DenseMatrix, FieldElement, PrimeModulus};
use chowsec::monomials::{LinearForm, MonomialBasis, PolyVector};

pub fn linear_form(n: u32, seed: u64, p: PrimeModulus) -> LinearForm {
    LinearForm::new(sample_uniform(n as usize + 1, seed, p))
}

pub fn random_poly(n: u32, d: u32, seed: u64, p: PrimeModulus) -> PolyVector {
    let basis = MonomialBasis::new(n, d).unwrap();
    PolyVector::from_coeffs(basis, sample_uniform(basis.size(), seed, p)).unwrap()
}

/// Exponent-keyed product, independent of the basis ordering.
pub fn naive_times_linear(
    poly: &PolyVector,
    l: &LinearForm,
    p: PrimeModulus,
) -> HashMap<Vec<u32>, u64> {
    let mut out: HashMap<Vec<u32>, u64> = HashMap::new();
    for (i, &c) in poly.coeffs().iter().enumerate() {
        let e = poly.basis().exp_of(i).unwrap().0;
        for (k, &lk) in l.coeffs.iter().enumerate() {
            let mut f = e.clone();
            f[k] += 1;
            let term = (c.0 as u128 * lk.0 as u128 % p.value() as u128) as u64;
            let slot = out.entry(f).or_insert(0);
            *slot = (*slot + term) % p.value();
        }
    }
    out
}

/// `L * diag(1,..,1,0,..,0) * U` with random unit triangular `L`, `U`: rank exactly `k`.
pub fn planted(rows: usize, cols: usize, k: usize, seed: u64, p: PrimeModulus) -> DenseMatrix {
    let mut l = DenseMatrix::identity(rows);
    let lower = sample_uniform(rows * rows, seed, p);
    for i in 0..rows {
        for j in 0..i {
            l.set(i, j, lower[i * rows + j]);
        }
    }
    let mut u = DenseMatrix::identity(cols);
    let upper = sample_uniform(cols * cols, seed ^ 0x55, p);
    for i in 0..cols {
        for j in i + 1..cols {
            u.set(i, j, upper[i * cols + j]);
        }
    }
    let mut e = DenseMatrix::zeros(rows, cols);
    for i in 0..k {
        e.set(i, i, FieldElement::ONE);
    }
    l.mul(&e, p).mul(&u, p)
}
