mod common;

use chowsec::ff_linalg::{rank, PrimeModulus};
use chowsec::inductor::{split_children, Splitting};
use chowsec::monomials::{MonomialBasis, PolyRing};
use chowsec::terracini::{a_value, statement_rank, Statement};
use common::{linear_form, naive_times_linear, planted, random_poly};
use proptest::prelude::*;

fn p() -> PrimeModulus {
    PrimeModulus::default()
}

#[test]
fn monomial_index_is_a_bijection() {
    for total in 0..=12u32 {
        for d in 0..=total {
            let n = total - d;
            let basis = MonomialBasis::new(n, d).unwrap();
            let all = basis.exponents();
            assert_eq!(all.len(), basis.size());
            for (i, e) in all.iter().enumerate() {
                assert_eq!(e.degree(), d);
                assert_eq!(e.len(), n as usize + 1);
                assert_eq!(basis.index_of(e).unwrap(), i);
                assert_eq!(&basis.exp_of(i).unwrap(), e);
            }
            // strictly descending in lexicographic order
            assert!(all.windows(2).all(|w| w[0] > w[1]), "n={n} d={d}");
        }
    }
}

fn statement_strategy() -> impl Strategy<Value = Statement> {
    (2u32..9, 3u32..9, 0u32..7, 0u32..7, 0u32..7, 0u32..7)
        .prop_map(|(n, d, s, t, u, v)| Statement::new(n, d, s, t, u, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn multiply_matches_naive_convolution(n in 0u32..6, d in 0u32..6, seed in any::<u64>()) {
        let poly = random_poly(n, d, seed, p());
        let l = linear_form(n, seed.wrapping_add(1), p());
        let ring = PolyRing::new(n, d + 1, p()).unwrap();
        let product = ring.multiply_by_linear(&poly, &l).unwrap();
        let naive = naive_times_linear(&poly, &l, p());
        for (i, &c) in product.coeffs().iter().enumerate() {
            let e = product.basis().exp_of(i).unwrap().0;
            prop_assert_eq!(c.0, naive.get(&e).copied().unwrap_or(0));
        }
    }

    #[test]
    fn multiplication_commutes_and_is_linear(n in 1u32..5, d in 0u32..5, seed in any::<u64>()) {
        let ring = PolyRing::new(n, d + 2, p()).unwrap();
        let f = random_poly(n, d, seed, p());
        let g = random_poly(n, d, seed ^ 1, p());
        let l1 = linear_form(n, seed ^ 2, p());
        let l2 = linear_form(n, seed ^ 3, p());
        let a = ring.multiply_by_linear(&ring.multiply_by_linear(&f, &l1).unwrap(), &l2).unwrap();
        let b = ring.multiply_by_linear(&ring.multiply_by_linear(&f, &l2).unwrap(), &l1).unwrap();
        prop_assert_eq!(a, b);
        let sum_first = ring.multiply_by_linear(&f.add(&g, p()).unwrap(), &l1).unwrap();
        let sum_after = ring
            .multiply_by_linear(&f, &l1)
            .unwrap()
            .add(&ring.multiply_by_linear(&g, &l1).unwrap(), p())
            .unwrap();
        prop_assert_eq!(sum_first, sum_after);
    }

    #[test]
    fn planted_rank_is_recovered(rows in 1usize..40, cols in 1usize..40, k in 0usize..40, seed in any::<u64>()) {
        let k = k.min(rows).min(cols);
        prop_assert_eq!(rank(planted(rows, cols, k, seed, p()), p()), k);
    }

    #[test]
    fn rank_ignores_transpose_and_row_order(rows in 1usize..30, cols in 1usize..30, k in 0usize..30, seed in any::<u64>(), a in any::<usize>(), b in any::<usize>()) {
        let k = k.min(rows).min(cols);
        let m = planted(rows, cols, k, seed, p());
        prop_assert_eq!(rank(m.transpose(), p()), k);
        let mut swapped = m.clone();
        swapped.swap_rows(a % rows, b % rows);
        prop_assert_eq!(rank(swapped, p()), k);
    }

    #[test]
    fn split_children_preserve_a(st in statement_strategy(), picks in any::<[u32; 4]>()) {
        let sp = Splitting::from_primed(
            &st,
            picks[0] % (st.s + 1),
            picks[1] % (st.t + 1),
            picks[2] % (st.u + 1),
            picks[3] % (st.v + 1),
        )
        .unwrap();
        let kids = split_children(&st, &sp).unwrap();
        prop_assert_eq!(kids.iter().map(a_value).sum::<u64>(), a_value(&st));
        prop_assert!(kids.iter().all(|k| k.n == st.n - 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_is_monotone_in_s(n in 1u32..5, d in 2u32..5, s in 0u32..6, seed in any::<u64>()) {
        let smaller = Statement::secant(n, d, s).unwrap();
        let larger = Statement::secant(n, d, s + 1).unwrap();
        let r0 = statement_rank(&smaller, seed, p(), u64::MAX).unwrap();
        let r1 = statement_rank(&larger, seed, p(), u64::MAX).unwrap();
        prop_assert!(r0 <= r1);
        prop_assert!(r1 <= a_value(&larger));
    }
}
