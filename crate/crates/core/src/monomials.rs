//! Degree-`d` monomial bases in `n + 1` variables and dense polynomial vectors.
//!
//! Monomials are ordered lexicographically descending on the exponent vector,
//! so for `n = 2, d = 2` the basis reads
//! `x0^2, x0 x1, x0 x2, x1^2, x1 x2, x2^2`. Ranking and unranking use the
//! combinatorial number system: the number of degree-`r` exponent vectors in
//! `m + 1` trailing variables whose first entry exceeds `e` is
//! `binom(r - e - 1 + m, m)`.

use std::fmt;

use thiserror::Error;

use crate::ff_linalg::{FieldElement, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonomialError {
    #[error("binomial coefficient overflows u64 (n = {n}, d = {d})")]
    Overflow { n: u32, d: u32 },
    #[error("exponent vector {exps:?} does not lie in degree {d} with {vars} variables")]
    Malformed { exps: Vec<u32>, vars: usize, d: u32 },
    #[error("index {index} out of range for basis of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: u32, right: u32 },
    #[error("empty product")]
    EmptyProduct,
    #[error("product of {factors} linear forms cannot land in degree {d}")]
    DegreeMismatch { factors: usize, d: u32 },
    #[error("degree {d} exceeds the ring's precomputed maximum {max}")]
    DegreeTooLarge { d: u32, max: u32 },
}

/// `binom(m, k)` in checked arithmetic; `None` on overflow of `u64`.
pub fn binomial(m: u64, k: u64) -> Option<u64> {
    if k > m {
        return Some(0);
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (m - k + i) / i is exact at every step
        acc = acc * (m as u128 - k as u128 + i) / i;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Dimension of the space of degree-`d` forms in `n + 1` variables.
pub fn basis_size(n: u32, d: u32) -> Result<u64, MonomialError> {
    binomial(n as u64 + d as u64, d as u64).ok_or(MonomialError::Overflow { n, d })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Indexed basis of degree-`d` monomials in `x_0, ..., x_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MonomialBasis {
    n: u32,
    d: u32,
    size: usize,
}

impl MonomialBasis {
    pub fn new(n: u32, d: u32) -> Result<Self, MonomialError> {
        let size = basis_size(n, d)?;
        let size = usize::try_from(size).map_err(|_| MonomialError::Overflow { n, d })?;
        Ok(MonomialBasis { n, d, size })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn vars(&self) -> usize {
        self.n as usize + 1
    }

    pub fn index_of(&self, e: &ExponentVector) -> Result<usize, MonomialError> {
        if e.len() != self.vars() || e.degree() != self.d {
            return Err(MonomialError::Malformed {
                exps: e.0.clone(),
                vars: self.vars(),
                d: self.d,
            });
        }
        Ok(rank_exponents(&e.0, self.d))
    }

    pub fn exp_of(&self, index: usize) -> Result<ExponentVector, MonomialError> {
        if index >= self.size {
            return Err(MonomialError::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        let mut out = vec![0; self.vars()];
        unrank_exponents(index, self.d, &mut out);
        Ok(ExponentVector(out))
    }

    /// All exponent vectors, in index order.
    pub fn exponents(&self) -> Vec<ExponentVector> {
        let mut out = Vec::with_capacity(self.size);
        let mut e = vec![0u32; self.vars()];
        e[0] = self.d;
        loop {
            out.push(ExponentVector(e.clone()));
            if !prev_lex(&mut e) {
                break;
            }
        }
        debug_assert_eq!(out.len(), self.size);
        out
    }
}

/// Rank of a well-formed exponent vector; no validation.
fn rank_exponents(e: &[u32], d: u32) -> usize {
    let n = e.len() - 1;
    let mut remaining = d as u64;
    let mut index = 0u64;
    for (k, &ek) in e.iter().enumerate().take(n) {
        let ek = ek as u64;
        let trailing = (n - k) as u64;
        if ek < remaining {
            index += binomial(remaining - ek - 1 + trailing, trailing)
                .expect("bounded by the basis size");
        }
        remaining -= ek;
    }
    index as usize
}

fn unrank_exponents(mut index: usize, d: u32, out: &mut [u32]) {
    let n = out.len() - 1;
    let mut remaining = d;
    for (k, slot) in out.iter_mut().enumerate().take(n) {
        let trailing = (n - k) as u64;
        let mut c = remaining;
        loop {
            // vectors with this coordinate equal to c
            let block = binomial((remaining - c) as u64 + trailing - 1, trailing - 1)
                .expect("bounded by the basis size") as usize;
            if index < block {
                break;
            }
            index -= block;
            c -= 1;
        }
        *slot = c;
        remaining -= c;
    }
    out[n] = remaining;
}

/// Steps to the next exponent vector in lex-descending order; false at the end.
fn prev_lex(e: &mut [u32]) -> bool {
    let n = e.len() - 1;
    // rightmost position before the last with a positive entry
    let Some(k) = (0..n).rev().find(|&k| e[k] > 0) else {
        return false;
    };
    e[k] -= 1;
    let tail: u32 = e[k + 1..].iter().sum::<u32>() + 1;
    for x in e[k + 1..].iter_mut() {
        *x = 0;
    }
    e[k + 1] = tail;
    true
}

/// Coefficients of a linear form `c_0 x_0 + ... + c_n x_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<FieldElement>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<FieldElement>) -> Self {
        LinearForm { coeffs }
    }

    /// The coordinate form `x_k` in `n + 1` variables.
    pub fn variable(n: u32, k: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; n as usize + 1];
        coeffs[k] = FieldElement::ONE;
        LinearForm { coeffs }
    }

    pub fn n(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// A form of degree `basis.d()` in coordinates over `basis`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVector {
    basis: MonomialBasis,
    coeffs: Vec<FieldElement>,
}

impl PolyVector {
    pub fn zero(basis: MonomialBasis) -> Self {
        PolyVector {
            basis,
            coeffs: vec![FieldElement::ZERO; basis.size()],
        }
    }

    pub fn from_coeffs(basis: MonomialBasis, coeffs: Vec<FieldElement>) -> Option<Self> {
        (coeffs.len() == basis.size()).then_some(PolyVector { basis, coeffs })
    }

    /// The form `1` in degree 0.
    pub fn one(n: u32) -> Self {
        PolyVector {
            basis: MonomialBasis::new(n, 0).expect("degree zero never overflows"),
            coeffs: vec![FieldElement::ONE],
        }
    }

    pub fn from_linear(l: &LinearForm) -> Self {
        PolyVector {
            basis: MonomialBasis::new(l.n(), 1).expect("degree one never overflows"),
            coeffs: l.coeffs.clone(),
        }
    }

    pub fn basis(&self) -> MonomialBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    pub fn coeff(&self, e: &ExponentVector) -> Result<FieldElement, MonomialError> {
        Ok(self.coeffs[self.basis.index_of(e)?])
    }

    pub fn add(&self, other: &PolyVector, p: PrimeModulus) -> Option<PolyVector> {
        if self.basis != other.basis {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| p.add(a, b))
            .collect();
        Some(PolyVector {
            basis: self.basis,
            coeffs,
        })
    }
}

/// For each monomial of degree `e` and each variable `x_k`, the index of the
/// product in degree `e + 1`.
#[derive(Debug, Clone)]
pub struct ShiftTable {
    from: MonomialBasis,
    to: MonomialBasis,
    targets: Vec<u32>,
}

impl ShiftTable {
    pub fn new(from: MonomialBasis) -> Result<Self, MonomialError> {
        let to = MonomialBasis::new(from.n, from.d + 1)?;
        let vars = from.vars();
        let mut targets = Vec::with_capacity(from.size * vars);
        let mut e = vec![0u32; vars];
        e[0] = from.d;
        for _ in 0..from.size {
            for k in 0..vars {
                e[k] += 1;
                targets.push(rank_exponents(&e, to.d) as u32);
                e[k] -= 1;
            }
            prev_lex(&mut e);
        }
        Ok(ShiftTable { from, to, targets })
    }

    #[inline]
    pub fn target(&self, index: usize, var: usize) -> usize {
        self.targets[index * self.from.vars() + var] as usize
    }

    pub fn source(&self) -> MonomialBasis {
        self.from
    }

    pub fn destination(&self) -> MonomialBasis {
        self.to
    }
}

/// Polynomial arithmetic in `n + 1` variables over GF(p) up to a fixed degree,
/// with the shift tables for every degree precomputed.
#[derive(Debug, Clone)]
pub struct PolyRing {
    n: u32,
    p: PrimeModulus,
    shifts: Vec<ShiftTable>,
}

impl PolyRing {
    pub fn new(n: u32, max_degree: u32, p: PrimeModulus) -> Result<Self, MonomialError> {
        // the top basis must exist even though no shift leaves it
        MonomialBasis::new(n, max_degree)?;
        let shifts = (0..max_degree)
            .map(|e| ShiftTable::new(MonomialBasis::new(n, e)?))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyRing { n, p, shifts })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn max_degree(&self) -> u32 {
        self.shifts.len() as u32
    }

    fn shift(&self, from_degree: u32) -> Result<&ShiftTable, MonomialError> {
        self.shifts
            .get(from_degree as usize)
            .ok_or(MonomialError::DegreeTooLarge {
                d: from_degree + 1,
                max: self.max_degree(),
            })
    }

    fn check_vars(&self, n: u32) -> Result<(), MonomialError> {
        if n == self.n {
            Ok(())
        } else {
            Err(MonomialError::VariableMismatch {
                left: self.n,
                right: n,
            })
        }
    }

    pub fn multiply_by_linear(
        &self,
        poly: &PolyVector,
        l: &LinearForm,
    ) -> Result<PolyVector, MonomialError> {
        self.check_vars(poly.basis.n)?;
        self.check_vars(l.n())?;
        let table = self.shift(poly.basis.d)?;
        let p = self.p;
        let mut out = PolyVector::zero(table.to);
        for (i, &c) in poly.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &lk) in l.coeffs.iter().enumerate() {
                let t = table.target(i, k);
                out.coeffs[t] = p.add(out.coeffs[t], p.mul(c, lk));
            }
        }
        Ok(out)
    }

    /// `poly * x_var`.
    pub fn times_variable(
        &self,
        poly: &PolyVector,
        var: usize,
    ) -> Result<PolyVector, MonomialError> {
        self.check_vars(poly.basis.n)?;
        let table = self.shift(poly.basis.d)?;
        let mut out = PolyVector::zero(table.to);
        for (i, &c) in poly.coeffs.iter().enumerate() {
            out.coeffs[table.target(i, var)] = c;
        }
        Ok(out)
    }

    /// Writes the coefficients of `poly * x_var` into `out`, which must have
    /// length `basis_size(n, deg poly + 1)` and is overwritten.
    pub fn times_variable_into(
        &self,
        poly: &PolyVector,
        var: usize,
        out: &mut [FieldElement],
    ) -> Result<(), MonomialError> {
        self.check_vars(poly.basis.n)?;
        let table = self.shift(poly.basis.d)?;
        assert_eq!(out.len(), table.to.size, "output row has the wrong length");
        out.fill(FieldElement::ZERO);
        for (i, &c) in poly.coeffs.iter().enumerate() {
            out[table.target(i, var)] = c;
        }
        Ok(())
    }

    /// Product of the forms, accumulated left to right. An empty list gives `1`.
    pub fn product(&self, forms: &[LinearForm]) -> Result<PolyVector, MonomialError> {
        forms.iter().try_fold(PolyVector::one(self.n), |acc, l| {
            self.multiply_by_linear(&acc, l)
        })
    }

    /// Exact quotient `poly / l`, assuming `l` divides `poly`.
    ///
    /// Requires a nonzero `x_0` coefficient in `l`; returns `None` otherwise.
    /// Walking the quotient's monomials in basis order, every other term that
    /// contributes to `x_0 * m` has a larger `x_0` exponent and is already known.
    pub fn divide_by_linear(
        &self,
        poly: &PolyVector,
        l: &LinearForm,
    ) -> Result<Option<PolyVector>, MonomialError> {
        self.check_vars(poly.basis.n)?;
        self.check_vars(l.n())?;
        let d = poly.basis.d;
        if d == 0 {
            return Err(MonomialError::DegreeMismatch { factors: 1, d: 0 });
        }
        let p = self.p;
        let Some(inv_lead) = p.inv(l.coeffs[0]) else {
            return Ok(None);
        };
        let qbasis = MonomialBasis::new(self.n, d - 1)?;
        let into_poly = self.shift(d - 1)?;
        let mut q = PolyVector::zero(qbasis);
        let mut e = vec![0u32; qbasis.vars()];
        e[0] = d - 1;
        for i in 0..qbasis.size {
            let mut acc = poly.coeffs[into_poly.target(i, 0)];
            for k in 1..e.len() {
                if e[k] == 0 || l.coeffs[k].is_zero() {
                    continue;
                }
                // m / x_k = e - x_k + x_0
                e[k] -= 1;
                e[0] += 1;
                let j = rank_exponents(&e, d - 1);
                e[0] -= 1;
                e[k] += 1;
                acc = p.sub(acc, p.mul(l.coeffs[k], q.coeffs[j]));
            }
            q.coeffs[i] = p.mul(acc, inv_lead);
            prev_lex(&mut e);
        }
        debug_assert_eq!(&self.multiply_by_linear(&q, l)?, poly);
        Ok(Some(q))
    }
}

/// `poly * l`, building the needed shift table on the spot.
pub fn multiply_by_linear(
    poly: &PolyVector,
    l: &LinearForm,
    p: PrimeModulus,
) -> Result<PolyVector, MonomialError> {
    if poly.basis.n != l.n() {
        return Err(MonomialError::VariableMismatch {
            left: poly.basis.n,
            right: l.n(),
        });
    }
    let ring = PolyRing::new(poly.basis.n, poly.basis.d + 1, p)?;
    ring.multiply_by_linear(poly, l)
}

/// The product of `forms` as a vector over `target`, whose degree must equal
/// the number of forms.
pub fn expand_product(
    forms: &[LinearForm],
    target: MonomialBasis,
    p: PrimeModulus,
) -> Result<PolyVector, MonomialError> {
    if forms.is_empty() {
        return Err(MonomialError::EmptyProduct);
    }
    if forms.len() != target.d as usize {
        return Err(MonomialError::DegreeMismatch {
            factors: forms.len(),
            d: target.d,
        });
    }
    if let Some(bad) = forms.iter().find(|l| l.n() != target.n) {
        return Err(MonomialError::VariableMismatch {
            left: target.n,
            right: bad.n(),
        });
    }
    PolyRing::new(target.n, target.d, p)?.product(forms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector(v.to_vec())
    }

    #[test]
    fn sizes() {
        assert_eq!(basis_size(2, 2), Ok(6));
        assert_eq!(basis_size(7, 0), Ok(1));
        assert_eq!(basis_size(3, 3), Ok(20));
        assert_eq!(basis_size(30, 30), Ok(118_264_581_564_861_424));
        assert!(matches!(
            basis_size(40, 40),
            Err(MonomialError::Overflow { .. })
        ));
        assert_eq!(binomial(3, 5), Some(0));
    }

    #[test]
    fn declared_order() {
        let b = MonomialBasis::new(2, 2).unwrap();
        let expected = [
            [2, 0, 0],
            [1, 1, 0],
            [1, 0, 1],
            [0, 2, 0],
            [0, 1, 1],
            [0, 0, 2],
        ];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(b.index_of(&ev(e)), Ok(i));
            assert_eq!(b.exp_of(i), Ok(ev(e)));
        }
        assert_eq!(
            b.exponents(),
            expected.iter().map(|e| ev(e)).collect::<Vec<_>>()
        );
        assert_eq!(MonomialBasis::new(1, 3).unwrap().exp_of(0), Ok(ev(&[3, 0])));
    }

    #[test]
    fn malformed_inputs() {
        let b = MonomialBasis::new(2, 2).unwrap();
        assert!(matches!(
            b.index_of(&ev(&[1, 1])),
            Err(MonomialError::Malformed { .. })
        ));
        assert!(matches!(
            b.index_of(&ev(&[1, 1, 1])),
            Err(MonomialError::Malformed { .. })
        ));
        assert_eq!(
            b.exp_of(6),
            Err(MonomialError::IndexOutOfRange { index: 6, size: 6 })
        );
    }

    #[test]
    fn small_products() {
        let p = PrimeModulus::default();
        let x0 = LinearForm::variable(2, 0);
        let x1 = LinearForm::variable(2, 1);
        let prod = multiply_by_linear(&PolyVector::from_linear(&x0), &x1, p).unwrap();
        let b2 = MonomialBasis::new(2, 2).unwrap();
        let mut expected = PolyVector::zero(b2);
        expected.coeffs[b2.index_of(&ev(&[1, 1, 0])).unwrap()] = FieldElement::ONE;
        assert_eq!(prod, expected);

        // (x0 + x1)(x0 - x1) = x0^2 - x1^2
        let one = FieldElement::ONE;
        let plus = LinearForm::new(vec![one, one, FieldElement::ZERO]);
        let minus = LinearForm::new(vec![one, p.neg(one), FieldElement::ZERO]);
        let sq = multiply_by_linear(&PolyVector::from_linear(&plus), &minus, p).unwrap();
        assert_eq!(sq.coeff(&ev(&[2, 0, 0])), Ok(one));
        assert_eq!(sq.coeff(&ev(&[1, 1, 0])), Ok(FieldElement::ZERO));
        assert_eq!(sq.coeff(&ev(&[0, 2, 0])), Ok(p.neg(one)));

        let b3 = MonomialBasis::new(2, 3).unwrap();
        let cube = expand_product(&[x0.clone(), x0.clone(), x0.clone()], b3, p).unwrap();
        assert_eq!(cube.coeffs[0], one);
        assert!(cube.coeffs[1..].iter().all(|c| c.is_zero()));
        let x0x1 = expand_product(&[x0.clone(), x1.clone()], b2, p).unwrap();
        assert_eq!(x0x1, expected);
    }

    #[test]
    fn product_errors() {
        let p = PrimeModulus::default();
        let b2 = MonomialBasis::new(2, 2).unwrap();
        assert_eq!(expand_product(&[], b2, p), Err(MonomialError::EmptyProduct));
        assert_eq!(
            expand_product(&[LinearForm::variable(2, 0)], b2, p),
            Err(MonomialError::DegreeMismatch { factors: 1, d: 2 })
        );
        assert!(matches!(
            multiply_by_linear(&PolyVector::one(2), &LinearForm::variable(3, 0), p),
            Err(MonomialError::VariableMismatch { .. })
        ));
    }

    #[test]
    fn division_needs_x0() {
        let p = PrimeModulus::default();
        let ring = PolyRing::new(2, 3, p).unwrap();
        let x1 = LinearForm::variable(2, 1);
        let f = ring.product(&[x1.clone(), x1.clone()]).unwrap();
        assert_eq!(ring.divide_by_linear(&f, &x1), Ok(None));
    }
}
