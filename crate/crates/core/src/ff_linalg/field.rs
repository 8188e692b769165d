//! Word-size prime fields.
//!
//! Residues are stored in a `u64`. Multiplication goes through a 128-bit
//! intermediate, so any prime below 2^63 is supported; the rank kernel has a
//! faster path for primes below 2^31 (see [`super::matrix`]).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// 2^31 - 1. Chosen once and recorded in every certificate.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Smallest modulus accepted (exclusive).
pub const MIN_PRIME: u64 = 1 << 20;

/// Largest modulus accepted (exclusive).
pub const MAX_PRIME: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModulusError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} must lie in (2^20, 2^63)")]
    OutOfRange(u64),
}

/// A prime `p` with `2^20 < p < 2^63`, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus {
    p: u64,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, ModulusError> {
        if p <= MIN_PRIME || p >= MAX_PRIME {
            return Err(ModulusError::OutOfRange(p));
        }
        if !is_prime(p) {
            return Err(ModulusError::NotPrime(p));
        }
        Ok(PrimeModulus { p })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn element(self, x: u64) -> FieldElement {
        FieldElement(x % self.p)
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(self, x: i64) -> FieldElement {
        FieldElement(x.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            a.0 + self.p - b.0
        })
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(mul_mod(a.0, b.0, self.p))
    }

    pub fn pow(self, a: FieldElement, e: u64) -> FieldElement {
        FieldElement(pow_mod(a.0, e, self.p))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
}

impl Default for PrimeModulus {
    fn default() -> Self {
        PrimeModulus { p: DEFAULT_PRIME }
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = ModulusError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(m: PrimeModulus) -> u64 {
        m.p
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// A residue in `[0, p)`. The modulus is carried separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn residue(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; these bases are exact for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut q = 2;
        while q * q <= n {
            if n.is_multiple_of(q) {
                return false;
            }
            q += 1;
        }
        true
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        for n in (1u64 << 20)..(1u64 << 20) + 2_000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn known_large_primes() {
        assert!(is_prime(DEFAULT_PRIME));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1 << 61) + 1));
        // strong pseudoprime to the first nine prime bases
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(DEFAULT_PRIME).is_ok());
        assert_eq!(
            PrimeModulus::new(65_537),
            Err(ModulusError::OutOfRange(65_537))
        );
        assert_eq!(
            PrimeModulus::new((1 << 20) + 1),
            Err(ModulusError::NotPrime((1 << 20) + 1))
        );
        assert_eq!(
            PrimeModulus::new(1 << 20),
            Err(ModulusError::OutOfRange(1 << 20))
        );
    }

    #[test]
    fn arithmetic() {
        let m = PrimeModulus::default();
        let a = m.element(5);
        let b = m.from_i64(-3);
        assert_eq!(b.0, DEFAULT_PRIME - 3);
        assert_eq!(m.add(a, b), m.element(2));
        assert_eq!(m.sub(b, a), m.from_i64(-8));
        assert_eq!(m.mul(b, b), m.element(9));
        let inv = m.inv(b).unwrap();
        assert_eq!(m.mul(inv, b), FieldElement::ONE);
        assert_eq!(m.inv(FieldElement::ZERO), None);
        assert_eq!(m.neg(FieldElement::ZERO), FieldElement::ZERO);
    }
}
