//! Statement spaces `A(n,d,s,t,u,v)`, their specialization matrices, and
//! secant dimensions of Chow varieties through Terracini's lemma.
//!
//! A statement's matrix has one row per spanning vector of `A` after every
//! linear form is replaced by uniformly random coefficients mod `p`. Its rank
//! over GF(p) never exceeds the generic rank in characteristic zero, so reaching
//! `a(n,d,s,t,u,v)` is a proof that the statement is true. Missing it is only
//! evidence.

use std::fmt;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff_linalg::{
    derive_seed, trial_seed, DenseMatrix, FieldElement, PrimeModulus, RowEchelon, UniformStream,
};
use crate::monomials::{basis_size, LinearForm, MonomialError, PolyRing, PolyVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TerraciniError {
    #[error("invalid statement {0:?}: {1}")]
    InvalidStatement([u32; 6], &'static str),
    #[error("statement {statement} is superabundant: a = {a} > {ambient}")]
    Superabundant {
        statement: Statement,
        a: u64,
        ambient: u64,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Monomial(#[from] MonomialError),
}

/// The tuple `(n, d, s, t, u, v)` naming the space `A(n,d,s,t,u,v)`.
///
/// `s` counts tangent blocks built from `d`-tuples, `t` single products from
/// `(d+1)`-tuples, `u` full sets of `d`-fold subproducts of `(d+1)`-tuples, and
/// `v` blocks `pi_1(f) R_1` from `d`-tuples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[u32; 6]", into = "[u32; 6]")]
pub struct Statement {
    pub n: u32,
    pub d: u32,
    pub s: u32,
    pub t: u32,
    pub u: u32,
    pub v: u32,
}

impl Statement {
    pub fn new(n: u32, d: u32, s: u32, t: u32, u: u32, v: u32) -> Result<Self, TerraciniError> {
        let st = Statement { n, d, s, t, u, v };
        if n < 1 {
            return Err(TerraciniError::InvalidStatement(
                st.as_array(),
                "n must be at least 1",
            ));
        }
        if d == 0 && !st.is_empty() {
            return Err(TerraciniError::InvalidStatement(
                st.as_array(),
                "blocks need degree at least 1",
            ));
        }
        Ok(st)
    }

    /// `(n, d, s, 0, 0, 0)`, the statement behind `sigma_s(Split_d(P^n))`.
    pub fn secant(n: u32, d: u32, s: u32) -> Result<Self, TerraciniError> {
        Statement::new(n, d, s, 0, 0, 0)
    }

    pub fn as_array(&self) -> [u32; 6] {
        [self.n, self.d, self.s, self.t, self.u, self.v]
    }

    /// No blocks at all.
    pub fn is_empty(&self) -> bool {
        self.s == 0 && self.t == 0 && self.u == 0 && self.v == 0
    }

    pub fn is_secant(&self) -> bool {
        self.t == 0 && self.u == 0 && self.v == 0
    }

    /// Number of spanning vectors, i.e. rows of the statement matrix.
    pub fn row_count(&self) -> u64 {
        let (n, d) = (self.n as u64, self.d as u64);
        self.s as u64 * d * (n + 1)
            + self.t as u64
            + self.u as u64 * (d + 1)
            + self.v as u64 * (n + 1)
    }

    /// Base seed for this statement under `root`.
    pub fn seed(&self, root: u64) -> u64 {
        let words = self.as_array().map(u64::from);
        derive_seed(root, &words)
    }
}

impl TryFrom<[u32; 6]> for Statement {
    type Error = TerraciniError;

    fn try_from(a: [u32; 6]) -> Result<Self, Self::Error> {
        Statement::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }
}

impl From<Statement> for [u32; 6] {
    fn from(st: Statement) -> [u32; 6] {
        st.as_array()
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{},{})",
            self.n, self.d, self.s, self.t, self.u, self.v
        )
    }
}

/// `a(n,d,s,t,u,v) = s(dn+1) + t + u(d+1) + v(n+1)`, an upper bound on `dim A`.
///
/// Each `t` block spans a single form, so it contributes 1 (not `d`).
pub fn a_value(st: &Statement) -> u64 {
    let (n, d) = (st.n as u64, st.d as u64);
    st.s as u64 * (d * n + 1) + st.t as u64 + st.u as u64 * (d + 1) + st.v as u64 * (n + 1)
}

/// Dimension of the ambient space `R_d`, saturating at `u64::MAX`.
pub fn ambient_dimension(n: u32, d: u32) -> u64 {
    basis_size(n, d).unwrap_or(u64::MAX)
}

pub fn is_subabundant(st: &Statement) -> bool {
    a_value(st) <= ambient_dimension(st.n, st.d)
}

/// `min{s(dn+1), binom(n+d,d)} - 1`.
pub fn expected_dimension(n: u32, d: u32, s: u32) -> u64 {
    let count = s as u64 * (d as u64 * n as u64 + 1);
    count.min(ambient_dimension(n, d)) - 1
}

/// Closed form for `dim sigma_s(Split_2(P^n))`.
///
/// For `2s <= n` this is `s(2n+1) - 2s(s-1) - 1`; once `2s > n` the `2s`
/// generic linear forms span `R_1` and the secant variety fills `P^N`.
pub fn d2_dimension(n: u32, s: u32) -> u64 {
    let (n, s) = (n as u64, s as u64);
    if 2 * s > n {
        ambient_dimension(n as u32, 2) - 1
    } else {
        s * (2 * n + 1) - 2 * s * (s - 1) - 1
    }
}

/// Result of checking one statement by modular rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    /// `achieved_rank == target`.
    pub certified: bool,
    pub achieved_rank: u64,
    pub target: u64,
    pub prime: PrimeModulus,
    /// Seed of the trial that produced `achieved_rank`.
    pub seed: u64,
    pub trials_used: u32,
    pub rows: u64,
    pub cols: u64,
}

/// Lower bound on `dim sigma_s(Split_d(P^n))` (projective) and how it compares
/// to the expected dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecantDimResult {
    pub n: u32,
    pub d: u32,
    pub s: u32,
    pub dim_lower_bound: u64,
    pub expected: u64,
    pub nondefective_certified: bool,
    pub fills_ambient: bool,
    pub prime: PrimeModulus,
    /// Seed of the best trial; unused (zero trials) for `d = 1`.
    pub seed: u64,
    pub trials_used: u32,
}

/// Streams the rows of the specialization matrix of `st` to `visit`, in the
/// fixed layout: `s` blocks, then `t`, `u`, `v`. Coefficients of every tuple
/// are drawn from one stream in that order, so the blocks of `(n,d,s,..)` are
/// a prefix of those of `(n,d,s+1,..)` under the same seed.
pub fn for_each_statement_row<F>(
    st: &Statement,
    seed: u64,
    p: PrimeModulus,
    mut visit: F,
) -> Result<(), TerraciniError>
where
    F: FnMut(&[FieldElement]) -> ControlFlow<()>,
{
    if st.is_empty() {
        return Ok(());
    }
    let (n, d) = (st.n, st.d);
    let vars = n as usize + 1;
    let cols = ambient_dimension(n, d) as usize;
    let ring = PolyRing::new(n, d + 1, p)?;
    let mut stream = UniformStream::new(seed, p);
    let mut draw = |len: usize| -> Vec<LinearForm> {
        (0..len)
            .map(|_| LinearForm::new((0..vars).map(|_| stream.next_element()).collect()))
            .collect()
    };
    let mut row = vec![FieldElement::ZERO; cols];

    macro_rules! emit {
        ($poly:expr) => {
            if visit($poly.coeffs()).is_break() {
                return Ok(());
            }
        };
    }
    macro_rules! emit_times_r1 {
        ($poly:expr) => {
            for k in 0..vars {
                ring.times_variable_into($poly, k, &mut row)?;
                if visit(&row).is_break() {
                    return Ok(());
                }
            }
        };
    }

    for _ in 0..st.s {
        let tuple = draw(d as usize);
        for pi in omitted_products(&ring, &tuple)? {
            emit_times_r1!(&pi);
        }
    }
    for _ in 0..st.t {
        let tuple = draw(d as usize + 1);
        let pi1 = ring.product(&tuple[1..])?;
        emit!(pi1);
    }
    for _ in 0..st.u {
        let tuple = draw(d as usize + 1);
        for pi in omitted_products(&ring, &tuple)? {
            emit!(pi);
        }
    }
    for _ in 0..st.v {
        let tuple = draw(d as usize);
        let pi1 = ring.product(&tuple[1..])?;
        emit_times_r1!(&pi1);
    }
    Ok(())
}

/// `pi_j(f)` for `j = 1..=len`: the product of all factors except the `j`-th.
///
/// Computed as the full product divided by each factor; a factor with a zero
/// `x_0` coefficient falls back to multiplying out the remaining factors.
pub fn omitted_products(
    ring: &PolyRing,
    tuple: &[LinearForm],
) -> Result<Vec<PolyVector>, MonomialError> {
    let full = ring.product(tuple)?;
    tuple
        .iter()
        .enumerate()
        .map(|(j, f)| match ring.divide_by_linear(&full, f)? {
            Some(q) => Ok(q),
            None => {
                let others: Vec<LinearForm> = tuple
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != j)
                    .map(|(_, l)| l.clone())
                    .collect();
                ring.product(&others)
            }
        })
        .collect()
}

/// The specialization matrix of `st`: `row_count()` rows, `binom(n+d,d)` columns.
pub fn build_statement_matrix(
    st: &Statement,
    seed: u64,
    p: PrimeModulus,
) -> Result<DenseMatrix, TerraciniError> {
    let cols = ambient_dimension(st.n, st.d);
    let cols = usize::try_from(cols).map_err(|_| MonomialError::Overflow { n: st.n, d: st.d })?;
    let rows = st.row_count() as usize;
    let mut m = DenseMatrix::with_capacity(rows, cols);
    for_each_statement_row(st, seed, p, |row| {
        m.push_row(row);
        ControlFlow::Continue(())
    })?;
    debug_assert_eq!(m.rows(), rows);
    Ok(m)
}

/// Rank of the specialization matrix under `seed`, capped at `bound`.
///
/// Rows are fed straight into the elimination, so the matrix is never stored.
pub fn statement_rank(
    st: &Statement,
    seed: u64,
    p: PrimeModulus,
    bound: u64,
) -> Result<u64, TerraciniError> {
    if st.is_empty() || bound == 0 {
        return Ok(0);
    }
    let cols = ambient_dimension(st.n, st.d) as usize;
    let mut echelon = RowEchelon::new(cols, p);
    for_each_statement_row(st, seed, p, |row| {
        echelon.absorb(row);
        if echelon.rank() as u64 >= bound {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(echelon.rank() as u64)
}

/// Tries up to `trials` specializations (seeds `trial_seed(seed, k)`) and
/// certifies the statement on the first one reaching `a(st)`.
///
/// Superabundant statements are rejected without any linear algebra.
pub fn check_statement(
    st: &Statement,
    trials: u32,
    seed: u64,
    p: PrimeModulus,
) -> Result<CheckOutcome, TerraciniError> {
    let target = a_value(st);
    let ambient = ambient_dimension(st.n, st.d);
    if target > ambient {
        return Err(TerraciniError::Superabundant {
            statement: *st,
            a: target,
            ambient,
        });
    }
    let mut outcome = CheckOutcome {
        certified: target == 0,
        achieved_rank: 0,
        target,
        prime: p,
        seed,
        trials_used: 0,
        rows: st.row_count(),
        cols: ambient,
    };
    if target == 0 {
        return Ok(outcome);
    }
    for k in 0..trials.max(1) {
        let trial = trial_seed(seed, k);
        let r = statement_rank(st, trial, p, target)?;
        outcome.trials_used = k + 1;
        if k == 0 || r > outcome.achieved_rank {
            outcome.achieved_rank = r;
            outcome.seed = trial;
        }
        if r == target {
            outcome.certified = true;
            break;
        }
    }
    Ok(outcome)
}

/// Recomputes the rank recorded in `outcome`.
pub fn replay_outcome(st: &Statement, outcome: &CheckOutcome) -> Result<u64, TerraciniError> {
    statement_rank(st, outcome.seed, outcome.prime, outcome.target)
}

/// `dim sigma_s(Split_d(P^n))` bounded below by the best of `trials` ranks.
pub fn secant_dimension(
    n: u32,
    d: u32,
    s: u32,
    trials: u32,
    seed: u64,
    p: PrimeModulus,
) -> Result<SecantDimResult, TerraciniError> {
    if n < 1 || d < 1 || s < 1 {
        return Err(TerraciniError::InvalidParameters(format!(
            "need n, d, s >= 1, got n={n} d={d} s={s}"
        )));
    }
    let expected = expected_dimension(n, d, s);
    let ambient = ambient_dimension(n, d);
    if d == 1 {
        return Ok(SecantDimResult {
            n,
            d,
            s,
            dim_lower_bound: n as u64,
            expected,
            nondefective_certified: true,
            fills_ambient: true,
            prime: p,
            seed,
            trials_used: 0,
        });
    }
    let st = Statement::secant(n, d, s)?;
    let target = expected + 1;
    let mut best = 0;
    let mut best_seed = seed;
    let mut used = 0;
    for k in 0..trials.max(1) {
        let trial = trial_seed(seed, k);
        let r = statement_rank(&st, trial, p, target)?;
        used = k + 1;
        if r > best || k == 0 {
            best = r;
            best_seed = trial;
        }
        if best == target {
            break;
        }
    }
    let dim = best - 1;
    Ok(SecantDimResult {
        n,
        d,
        s,
        dim_lower_bound: dim,
        expected,
        nondefective_certified: dim == expected,
        fills_ambient: dim + 1 == ambient,
        prime: p,
        seed: best_seed,
        trials_used: used,
    })
}
