//! Proof search over statements: direct rank checks at the leaves, the
//! splitting rule and the subproduct transfer above them.
//!
//! The search produces a [`Certificate`] tree that [`verify_certificate`]
//! re-checks from scratch, replaying every rank computation from its seed.

mod certificate;
mod rules;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use certificate::{
    verify_certificate, Certificate, CertificateFile, Evidence, Method, VerifyError,
    CERTIFICATE_VERSION,
};
pub use rules::{lemma_f_consequence, split_children, splittings, Splitting};

use crate::ff_linalg::{PrimeModulus, DEFAULT_SEED};
use crate::monomials::basis_size;
use crate::terracini::{
    a_value, check_statement, d2_dimension, is_subabundant, Statement, TerraciniError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductorError {
    #[error("statement {0} is not subabundant")]
    NotSubabundant(Statement),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("search budget exhausted after {entries} memo entries")]
    BudgetExhausted { entries: usize },
    #[error("could not prove {0}")]
    Unproven(Statement),
    #[error(transparent)]
    Terracini(#[from] TerraciniError),
}

/// When a statement may be settled by a direct rank computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasePolicy {
    pub max_basis_size: u64,
    pub max_n: u32,
}

impl Default for BasePolicy {
    fn default() -> Self {
        BasePolicy {
            max_basis_size: 5000,
            max_n: u32::MAX,
        }
    }
}

impl BasePolicy {
    /// Direct checks only for `n <= max_n` (and the default size cap).
    pub fn up_to_n(max_n: u32) -> Self {
        BasePolicy {
            max_n,
            ..BasePolicy::default()
        }
    }

    pub fn allows(&self, st: &Statement) -> bool {
        st.n <= self.max_n && basis_size(st.n, st.d).is_ok_and(|size| size <= self.max_basis_size)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverConfig {
    pub policy: BasePolicy,
    pub max_memo_entries: usize,
    pub trials: u32,
    pub root_seed: u64,
    pub prime: PrimeModulus,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            policy: BasePolicy::default(),
            max_memo_entries: 100_000,
            trials: 3,
            root_seed: DEFAULT_SEED,
            prime: PrimeModulus::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProverStats {
    pub direct_checks: u64,
    pub memo_hits: u64,
}

/// Memoized proof search. The memo persists across calls on one prover.
#[derive(Debug, Clone)]
pub struct Prover {
    config: ProverConfig,
    memo: HashMap<Statement, Option<Arc<Certificate>>>,
    stats: ProverStats,
}

impl Prover {
    pub fn new(config: ProverConfig) -> Self {
        Prover {
            config,
            memo: HashMap::new(),
            stats: ProverStats::default(),
        }
    }

    pub fn config(&self) -> &ProverConfig {
        &self.config
    }

    pub fn stats(&self) -> ProverStats {
        self.stats
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Proves `st` or reports why not.
    pub fn prove(&mut self, st: &Statement) -> Result<Certificate, InductorError> {
        if !is_subabundant(st) {
            return Err(InductorError::NotSubabundant(*st));
        }
        match self.search(st, st.n)? {
            Some(c) => Ok(Arc::unwrap_or_clone(c)),
            None => Err(InductorError::Unproven(*st)),
        }
    }

    /// A memoized success for `st`, if any.
    pub fn proven(&self, st: &Statement) -> Option<Arc<Certificate>> {
        self.memo.get(st).cloned().flatten()
    }

    fn lemma_f(&self, st: &Statement) -> Option<Arc<Certificate>> {
        if !(st.s == 0 && st.t == 0 && st.v == 0 && st.u > 0) {
            return None;
        }
        let source = Statement::new(st.n, st.d + 1, st.u, 0, 0, 0).ok()?;
        let child = self.proven(&source)?;
        if lemma_f_consequence(&source).ok()? != *st {
            return None;
        }
        Some(Arc::new(Certificate {
            children: vec![child],
            ..Certificate::leaf(*st, Method::LemmaF)
        }))
    }

    fn search(
        &mut self,
        st: &Statement,
        depth_left: u32,
    ) -> Result<Option<Arc<Certificate>>, InductorError> {
        if let Some(hit) = self.memo.get(st) {
            self.stats.memo_hits += 1;
            if hit.is_none() {
                // a failure recorded before the transfer source was proven
                if let Some(c) = self.lemma_f(st) {
                    self.memo.insert(*st, Some(c.clone()));
                    return Ok(Some(c));
                }
            }
            return Ok(hit.clone());
        }
        if self.memo.len() >= self.config.max_memo_entries {
            return Err(InductorError::BudgetExhausted {
                entries: self.memo.len(),
            });
        }
        let result = self.search_uncached(st, depth_left)?;
        self.memo.insert(*st, result.clone());
        Ok(result)
    }

    fn search_uncached(
        &mut self,
        st: &Statement,
        depth_left: u32,
    ) -> Result<Option<Arc<Certificate>>, InductorError> {
        if !is_subabundant(st) {
            return Ok(None);
        }
        if st.d <= 1 {
            return Ok(Some(Arc::new(Certificate::leaf(*st, Method::TrivialD1))));
        }
        if st.is_empty() {
            return Ok(Some(Arc::new(Certificate::leaf(*st, Method::TrivialEmpty))));
        }
        if let Some(c) = self.lemma_f(st) {
            return Ok(Some(c));
        }
        if st.d == 2 && st.is_secant() {
            let holds = d2_dimension(st.n, st.s) + 1 == a_value(st);
            return Ok(holds.then(|| Arc::new(Certificate::leaf(*st, Method::ClosedFormD2))));
        }
        if self.config.policy.allows(st) {
            let c = &self.config;
            let outcome = check_statement(st, c.trials, st.seed(c.root_seed), c.prime)?;
            self.stats.direct_checks += 1;
            if outcome.certified {
                return Ok(Some(Arc::new(Certificate::direct(*st, &outcome))));
            }
        }
        if st.n < 2 || st.d < 3 || depth_left == 0 {
            return Ok(None);
        }
        'splits: for sp in splittings(st) {
            let kids = split_children(st, &sp)?;
            if !kids.iter().all(is_subabundant) {
                continue;
            }
            let mut proofs = Vec::with_capacity(3);
            for kid in &kids {
                match self.search(kid, depth_left - 1)? {
                    Some(c) => proofs.push(c),
                    None => continue 'splits,
                }
            }
            return Ok(Some(Arc::new(Certificate {
                splitting: Some(sp),
                children: proofs,
                ..Certificate::leaf(*st, Method::Split)
            })));
        }
        Ok(None)
    }
}

/// One-shot search with a fresh memo.
pub fn prove(st: &Statement, config: ProverConfig) -> Result<Certificate, InductorError> {
    Prover::new(config).prove(st)
}

/// Certificate for `(n_target, d, s, 0, 0, 0)` built by induction on `n`
/// from a proof of `(n0, d, s, 0, 0, 0)`: each step splits with `s' = 0`.
pub fn extend_n(
    n0: u32,
    d: u32,
    s: u32,
    n_target: u32,
    config: ProverConfig,
) -> Result<Certificate, InductorError> {
    if d < 3 {
        return Err(InductorError::Hypothesis(format!("need d >= 3, got {d}")));
    }
    if n_target < n0 {
        return Err(InductorError::Hypothesis(format!(
            "target n = {n_target} is below base n = {n0}"
        )));
    }
    let base = Statement::secant(n0, d, s)?;
    if !is_subabundant(&base) {
        return Err(InductorError::Hypothesis(format!(
            "base {base} has a = {} above the ambient dimension",
            a_value(&base)
        )));
    }
    let mut prover = Prover::new(config);
    let mut current = Arc::new(prover.prove(&base)?);
    for k in n0..n_target {
        let parent = Statement::secant(k + 1, d, s)?;
        let sp = Splitting::from_primed(&parent, 0, 0, 0, 0).expect("zero primed parts");
        let [same, transfer, rest] = split_children(&parent, &sp)?;
        debug_assert_eq!(same, current.statement);
        let transfer_cert = Certificate {
            children: vec![current.clone()],
            ..Certificate::leaf(transfer, Method::LemmaF)
        };
        let rest_method = if rest.d <= 1 {
            Method::TrivialD1
        } else {
            Method::TrivialEmpty
        };
        current = Arc::new(Certificate {
            splitting: Some(sp),
            children: vec![
                current.clone(),
                Arc::new(transfer_cert),
                Arc::new(Certificate::leaf(rest, rest_method)),
            ],
            ..Certificate::leaf(parent, Method::Split)
        });
    }
    Ok(Arc::unwrap_or_clone(current))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(a: [u32; 6]) -> Statement {
        Statement::try_from(a).unwrap()
    }

    #[test]
    fn trivial_and_rejected() {
        let c = prove(&st([3, 1, 0, 0, 0, 0]), ProverConfig::default()).unwrap();
        assert_eq!(c.method, Method::TrivialD1);
        assert!(matches!(
            prove(&st([2, 2, 3, 0, 0, 0]), ProverConfig::default()),
            Err(InductorError::NotSubabundant(_))
        ));
    }

    #[test]
    fn splits_when_direct_is_restricted() {
        let config = ProverConfig {
            policy: BasePolicy::up_to_n(3),
            ..ProverConfig::default()
        };
        let c = prove(&st([4, 3, 2, 0, 0, 0]), config).unwrap();
        assert_eq!(c.method, Method::Split);
        let methods: Vec<_> = c.children.iter().map(|k| (k.statement, k.method)).collect();
        assert_eq!(
            methods,
            vec![
                (st([3, 3, 2, 0, 0, 0]), Method::Direct),
                (st([3, 2, 0, 0, 2, 0]), Method::LemmaF),
                (st([3, 1, 0, 0, 0, 0]), Method::TrivialD1),
            ]
        );
        verify_certificate(&c).unwrap();
    }

    #[test]
    fn extend_chain() {
        let c = extend_n(3, 3, 2, 6, ProverConfig::default()).unwrap();
        assert_eq!(c.statement, st([6, 3, 2, 0, 0, 0]));
        let mut node = &c;
        for n in (3..6).rev() {
            assert_eq!(node.method, Method::Split);
            node = &node.children[0];
            assert_eq!(node.statement.n, n);
        }
        assert_eq!(node.method, Method::Direct);
        verify_certificate(&c).unwrap();
        let base = extend_n(3, 3, 2, 3, ProverConfig::default()).unwrap();
        assert_eq!(base.method, Method::Direct);
        assert!(matches!(
            extend_n(3, 4, 3, 5, ProverConfig::default()),
            Err(InductorError::Hypothesis(_))
        ));
    }

    #[test]
    fn quadric_leaves() {
        let c = prove(&st([4, 2, 1, 0, 0, 0]), ProverConfig::default()).unwrap();
        assert_eq!(c.method, Method::ClosedFormD2);
        assert!(matches!(
            prove(&st([6, 2, 2, 0, 0, 0]), ProverConfig::default()),
            Err(InductorError::Unproven(_))
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let config = ProverConfig {
            policy: BasePolicy::up_to_n(0),
            max_memo_entries: 3,
            ..ProverConfig::default()
        };
        assert!(matches!(
            prove(&st([5, 3, 2, 0, 0, 0]), config),
            Err(InductorError::BudgetExhausted { .. })
        ));
    }
}
