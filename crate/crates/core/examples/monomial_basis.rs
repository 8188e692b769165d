//! Monomial indexing and products of linear forms as coefficient vectors.

use chowsec::ff_linalg::{FieldElement, PrimeModulus};
use chowsec::monomials::{expand_product, LinearForm, MonomialBasis};

fn main() {
    let basis = MonomialBasis::new(2, 3).unwrap();
    println!("degree 3 in x0,x1,x2: {} monomials", basis.size());
    for (i, e) in basis.exponents().iter().enumerate() {
        assert_eq!(basis.index_of(e).unwrap(), i);
        println!("  {i:>2} {e}");
    }

    // (x0 + x1)(x0 - x1)(x0 + 2 x2)
    let p = PrimeModulus::default();
    let form = |c: [i64; 3]| LinearForm::new(c.iter().map(|&x| p.from_i64(x)).collect());
    let forms = [form([1, 1, 0]), form([1, -1, 0]), form([1, 0, 2])];
    let product = expand_product(&forms, basis, p).unwrap();
    println!("(x0 + x1)(x0 - x1)(x0 + 2 x2) =");
    for (i, &c) in product.coeffs().iter().enumerate() {
        if c != FieldElement::ZERO {
            let shown = if c.0 > p.value() / 2 {
                c.0 as i64 - p.value() as i64
            } else {
                c.0 as i64
            };
            println!("  {shown:>3} * x^{}", basis.exp_of(i).unwrap());
        }
    }
}
