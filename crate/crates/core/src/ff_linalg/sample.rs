//! Seeded uniform sampling and the seed-derivation scheme.
//!
//! Every random choice in the crate flows from a 64-bit root seed:
//!
//! * a statement's base seed is `derive_seed(root, &[n, d, s, t, u, v])`;
//! * trial `k` of a check uses `trial_seed(base, k)`, with `trial_seed(base, 0) == base`;
//! * a seed expands into field elements through ChaCha8 (`sample_uniform`).
//!
//! Seeds depend only on the statement and trial index, never on the order in
//! which work is scheduled, so parallel and sequential runs agree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{FieldElement, PrimeModulus};

/// Default root seed used when none is supplied.
pub const DEFAULT_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds `words` into `root`, one SplitMix64 round per word.
pub fn derive_seed(root: u64, words: &[u64]) -> u64 {
    words
        .iter()
        .fold(splitmix64(root), |acc, &w| splitmix64(acc ^ w))
}

/// Seed for the `k`-th independent trial. Trial 0 reuses the base seed.
pub fn trial_seed(base: u64, k: u32) -> u64 {
    if k == 0 {
        base
    } else {
        derive_seed(base, &[0x7472_6961_6c00_0000 | k as u64])
    }
}

/// A reproducible stream of uniform residues.
pub struct UniformStream {
    rng: ChaCha8Rng,
    p: u64,
}

impl UniformStream {
    pub fn new(seed: u64, p: PrimeModulus) -> Self {
        UniformStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            p: p.value(),
        }
    }

    #[inline]
    pub fn next_element(&mut self) -> FieldElement {
        FieldElement(self.rng.gen_range(0..self.p))
    }
}

/// `count` residues drawn uniformly from `[0, p)`; a pure function of its arguments.
pub fn sample_uniform(count: usize, seed: u64, p: PrimeModulus) -> Vec<FieldElement> {
    let mut stream = UniformStream::new(seed, p);
    (0..count).map(|_| stream.next_element()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        let p = PrimeModulus::default();
        assert!(sample_uniform(0, 7, p).is_empty());
        assert_eq!(sample_uniform(100, 7, p), sample_uniform(100, 7, p));
        assert_ne!(sample_uniform(100, 7, p), sample_uniform(100, 8, p));
        assert!(sample_uniform(1000, 1, p).iter().all(|x| x.0 < p.value()));
    }

    #[test]
    fn streams_are_prefix_stable() {
        let p = PrimeModulus::default();
        let long = sample_uniform(50, 3, p);
        assert_eq!(&long[..20], &sample_uniform(20, 3, p)[..]);
    }

    #[test]
    fn trial_seeds_are_distinct() {
        let base = derive_seed(DEFAULT_SEED, &[3, 3, 2, 0, 0, 0]);
        assert_eq!(trial_seed(base, 0), base);
        let seeds: std::collections::HashSet<u64> = (0..64).map(|k| trial_seed(base, k)).collect();
        assert_eq!(seeds.len(), 64);
        assert_ne!(
            derive_seed(1, &[3, 3, 2, 0, 0, 0]),
            derive_seed(1, &[3, 3, 0, 2, 0, 0])
        );
    }

    #[test]
    fn chi_square_sixteen_buckets() {
        let p = PrimeModulus::default();
        let pv = p.value() as u128;
        let n = 10_000usize;
        let mut counts = [0u64; 16];
        for x in sample_uniform(n, 0xC0FFEE, p) {
            counts[(x.0 as u128 * 16 / pv) as usize] += 1;
        }
        // exact bucket masses: bucket b holds residues x with b*p <= 16x < (b+1)*p
        let lower = |b: u128| (b * pv).div_ceil(16);
        let chi2: f64 = (0..16u128)
            .map(|b| {
                let mass = (lower(b + 1) - lower(b)) as f64 / pv as f64;
                let expected = mass * n as f64;
                let diff = counts[b as usize] as f64 - expected;
                diff * diff / expected
            })
            .sum();
        // upper 1e-6 quantile of chi-square with 15 degrees of freedom
        const CRITICAL: f64 = 56.493_442_499_773_38;
        assert!(chi2 < CRITICAL, "chi2 = {chi2}");
    }
}
