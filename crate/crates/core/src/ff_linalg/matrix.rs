//! Dense matrices over a prime field and their rank.
//!
//! Rank is computed by incremental row echelon reduction: rows are streamed
//! one at a time, reduced against the monic pivot rows found so far (in
//! insertion order), and kept as a new pivot when something survives. Each
//! pivot row stores only its tail from the pivot column on, since everything
//! left of it is zero.
//!
//! For `p < 2^31` the working row is a `u64` accumulator that is only brought
//! back below `2^63` after each update, not fully reduced: products of two
//! residues fit in 62 bits, so `acc + m * b` never overflows. A full reduction
//! happens once per row. Larger primes use a plain 128-bit reduction per entry.

use thiserror::Error;

use super::field::{mul_mod, FieldElement, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("entry buffer has length {len}, expected {rows} x {cols}")]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("row {row} has length {len}, expected {cols}")]
    RaggedRow { row: usize, len: usize, cols: usize },
}

/// Row-major dense matrix of residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![FieldElement::ZERO; rows * cols],
        }
    }

    /// An empty matrix with `cols` columns and room for `rows` rows.
    pub fn with_capacity(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows: 0,
            cols,
            entries: Vec::with_capacity(rows * cols),
        }
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: Vec<FieldElement>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(cols: usize, rows: &[Vec<FieldElement>]) -> Result<Self, MatrixError> {
        let mut m = DenseMatrix::with_capacity(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(MatrixError::RaggedRow {
                    row: i,
                    len: r.len(),
                    cols,
                });
            }
            m.push_row(r);
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Appends a row. Panics if its length differs from `cols`.
    pub fn push_row(&mut self, row: &[FieldElement]) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.entries.extend_from_slice(row);
        self.rows += 1;
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        // chunks_exact(0) panics
        self.entries.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.entries.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// `self * other` over the field.
    pub fn mul(&self, other: &DenseMatrix, p: PrimeModulus) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = p.add(out.get(i, j), p.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Exact rank of `m` over GF(p).
pub fn rank(m: DenseMatrix, p: PrimeModulus) -> usize {
    rank_bounded(m, p, usize::MAX)
}

/// Rank of `m` over GF(p), stopping early once `bound` pivots are found.
///
/// The result is `min(rank(m), bound)`; callers pass a bound they know the
/// rank cannot exceed, which lets the scan skip trailing dependent rows.
pub fn rank_bounded(m: DenseMatrix, p: PrimeModulus, bound: usize) -> usize {
    if m.rows == 0 || m.cols == 0 || bound == 0 {
        return 0;
    }
    let mut echelon = RowEchelon::new(m.cols, p);
    for row in m.row_iter() {
        echelon.absorb(row);
        if echelon.rank() >= bound {
            break;
        }
    }
    echelon.rank()
}

/// Incremental rank accumulator: feed rows one at a time, read the rank of
/// everything fed so far.
pub struct RowEchelon {
    inner: Inner,
}

enum Inner {
    Lazy(Echelon<LazyKernel>),
    Wide(Echelon<WideKernel>),
}

impl RowEchelon {
    pub fn new(cols: usize, p: PrimeModulus) -> Self {
        let inner = if p.value() < (1 << 31) {
            Inner::Lazy(Echelon::new(cols, p))
        } else {
            Inner::Wide(Echelon::new(cols, p))
        };
        RowEchelon { inner }
    }

    /// Adds a row; returns whether it raised the rank. Panics on a length mismatch.
    pub fn absorb(&mut self, row: &[FieldElement]) -> bool {
        match &mut self.inner {
            Inner::Lazy(e) => e.absorb(row),
            Inner::Wide(e) => e.absorb(row),
        }
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            Inner::Lazy(e) => e.pivots.len(),
            Inner::Wide(e) => e.pivots.len(),
        }
    }

    pub fn cols(&self) -> usize {
        match &self.inner {
            Inner::Lazy(e) => e.cols,
            Inner::Wide(e) => e.cols,
        }
    }
}

trait Kernel {
    type Pivot;
    /// `acc[i] += m * tail[i]`, leaving every accumulator entry below `2^63`.
    fn axpy(acc: &mut [u64], m: u64, tail: &Self::Pivot, p: u64, fold: u64);
    fn store(tail: Vec<u64>) -> Self::Pivot;
}

struct LazyKernel;

impl Kernel for LazyKernel {
    type Pivot = Vec<u32>;

    #[inline]
    fn axpy(acc: &mut [u64], m: u64, tail: &Vec<u32>, _p: u64, fold: u64) {
        let m = m as u32 as u64;
        for (a, &b) in acc.iter_mut().zip(tail.iter()) {
            let x = *a + m * b as u64;
            *a = x - (fold & 0u64.wrapping_sub(x >> 63));
        }
    }

    fn store(tail: Vec<u64>) -> Vec<u32> {
        tail.into_iter().map(|x| x as u32).collect()
    }
}

struct WideKernel;

impl Kernel for WideKernel {
    type Pivot = Vec<u64>;

    #[inline]
    fn axpy(acc: &mut [u64], m: u64, tail: &Vec<u64>, p: u64, _fold: u64) {
        for (a, &b) in acc.iter_mut().zip(tail.iter()) {
            let x = *a + mul_mod(m, b, p);
            *a = if x >= p { x - p } else { x };
        }
    }

    fn store(tail: Vec<u64>) -> Vec<u64> {
        tail
    }
}

struct Echelon<K: Kernel> {
    cols: usize,
    p: PrimeModulus,
    /// Largest multiple of p not exceeding 2^63.
    fold: u64,
    pivots: Vec<(usize, K::Pivot)>,
    acc: Vec<u64>,
}

impl<K: Kernel> Echelon<K> {
    fn new(cols: usize, p: PrimeModulus) -> Self {
        let pv = p.value();
        Echelon {
            cols,
            p,
            fold: (1u64 << 63) / pv * pv,
            pivots: Vec::new(),
            acc: vec![0; cols],
        }
    }

    /// Reduces `row` against the current pivots; keeps it if independent.
    fn absorb(&mut self, row: &[FieldElement]) -> bool {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        let pv = self.p.value();
        for (a, x) in self.acc.iter_mut().zip(row) {
            *a = x.0 % pv;
        }
        for (col, tail) in &self.pivots {
            let c = self.acc[*col] % pv;
            if c == 0 {
                continue;
            }
            K::axpy(&mut self.acc[*col..], pv - c, tail, pv, self.fold);
        }
        let mut lead = None;
        for (j, a) in self.acc.iter_mut().enumerate() {
            *a %= pv;
            if lead.is_none() && *a != 0 {
                lead = Some(j);
            }
        }
        let Some(col) = lead else {
            return false;
        };
        let inv = self
            .p
            .inv(FieldElement(self.acc[col]))
            .expect("leading entry is nonzero")
            .0;
        let tail: Vec<u64> = self.acc[col..]
            .iter()
            .map(|&x| mul_mod(x, inv, pv))
            .collect();
        debug_assert_eq!(tail[0], 1);
        debug_assert!(col < self.cols);
        self.pivots.push((col, K::store(tail)));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff_linalg::sample::sample_uniform;

    /// Right-looking Gauss-Jordan with a full modular reduction per entry.
    fn reference_rank(mut m: DenseMatrix, p: PrimeModulus) -> usize {
        let mut r = 0;
        for c in 0..m.cols() {
            let Some(piv) = (r..m.rows()).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = p.inv(m.get(r, c)).unwrap();
            for i in r + 1..m.rows() {
                let f = p.mul(m.get(i, c), inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols() {
                    let v = p.sub(m.get(i, j), p.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            r += 1;
        }
        r
    }

    fn random(rows: usize, cols: usize, seed: u64, p: PrimeModulus) -> DenseMatrix {
        DenseMatrix::from_entries(rows, cols, sample_uniform(rows * cols, seed, p)).unwrap()
    }

    #[test]
    fn trivial_ranks() {
        let p = PrimeModulus::default();
        assert_eq!(rank(DenseMatrix::identity(3), p), 3);
        assert_eq!(rank(DenseMatrix::zeros(4, 6), p), 0);
        assert_eq!(rank(DenseMatrix::zeros(0, 6), p), 0);
        assert_eq!(rank(DenseMatrix::zeros(5, 0), p), 0);
    }

    #[test]
    fn planted_rank_both_kernels() {
        for &pv in &[crate::ff_linalg::DEFAULT_PRIME, (1u64 << 61) - 1, 1_048_583] {
            let p = PrimeModulus::new(pv).unwrap();
            let a = random(50, 7, 1, p);
            let b = random(7, 80, 2, p);
            let prod = a.mul(&b, p);
            assert_eq!(reference_rank(prod.clone(), p), 7);
            assert_eq!(rank(prod, p), 7, "p = {pv}");
        }
    }

    #[test]
    fn bounded_rank_stops_early() {
        let p = PrimeModulus::default();
        let m = random(30, 30, 9, p);
        assert_eq!(rank_bounded(m.clone(), p, 12), 12);
        assert_eq!(rank_bounded(m, p, 100), 30);
    }

    #[test]
    fn unreduced_entries_are_reduced() {
        let p = PrimeModulus::default();
        let pv = p.value();
        let m = DenseMatrix::from_entries(
            2,
            2,
            vec![
                FieldElement(pv + 1),
                FieldElement(2),
                FieldElement(2 * pv + 2),
                FieldElement(4),
            ],
        )
        .unwrap();
        assert_eq!(rank(m, p), 1);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            DenseMatrix::from_entries(2, 3, vec![FieldElement::ZERO; 5]),
            Err(MatrixError::Shape { .. })
        ));
        assert!(matches!(
            DenseMatrix::from_rows(2, &[vec![FieldElement::ZERO; 3]]),
            Err(MatrixError::RaggedRow { row: 0, .. })
        ));
    }

    #[test]
    fn lazy_kernel_agrees_with_reference_on_structured_input() {
        // rows with many repeated dependencies exercise the fold branch
        let p = PrimeModulus::default();
        let base = random(6, 40, 5, p);
        let coeffs = random(60, 6, 6, p);
        let mut m = coeffs.mul(&base, p);
        for i in 0..m.rows() {
            m.set(i, i % 40, FieldElement(p.value() - 1));
        }
        assert_eq!(rank(m.clone(), p), reference_rank(m, p));
    }
}
