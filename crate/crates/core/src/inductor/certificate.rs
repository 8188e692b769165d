//! Certificate trees, their JSON form, and replay verification.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rules::{lemma_f_consequence, split_children, Splitting};
use crate::ff_linalg::PrimeModulus;
use crate::serde_dec::{decimal, decimal_prime};
use crate::terracini::{
    a_value, ambient_dimension, d2_dimension, is_subabundant, statement_rank, CheckOutcome,
    Statement,
};

pub const CERTIFICATE_VERSION: u32 = 1;

/// How a node's statement was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Modular rank reached `a`.
    Direct,
    /// Splitting rule from the three child statements.
    Split,
    /// A true subabundant `(n,d+1,s,0,0,0)` gives `(n,d,0,0,s,0)`.
    LemmaF,
    /// Quadric closed form.
    ClosedFormD2,
    /// Degree at most one: subabundant means true.
    TrivialD1,
    /// No blocks.
    TrivialEmpty,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Replay data for a `Direct` node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(with = "decimal")]
    pub seed: u64,
    #[serde(with = "decimal_prime")]
    pub prime: PrimeModulus,
    pub rank: u64,
    pub rows: u64,
    pub cols: u64,
    pub trials_used: u32,
}

impl From<&CheckOutcome> for Evidence {
    fn from(o: &CheckOutcome) -> Self {
        Evidence {
            seed: o.seed,
            prime: o.prime,
            rank: o.achieved_rank,
            rows: o.rows,
            cols: o.cols,
            trials_used: o.trials_used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: Statement,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<Splitting>,
    #[serde(default)]
    pub children: Vec<Arc<Certificate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

impl Certificate {
    pub fn leaf(statement: Statement, method: Method) -> Self {
        Certificate {
            statement,
            method,
            splitting: None,
            children: Vec::new(),
            evidence: None,
        }
    }

    pub fn direct(statement: Statement, outcome: &CheckOutcome) -> Self {
        Certificate {
            evidence: Some(Evidence::from(outcome)),
            ..Certificate::leaf(statement, Method::Direct)
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Nodes in depth-first pre-order with their paths.
    pub fn walk(&self) -> Vec<(String, &Certificate)> {
        let mut out = Vec::new();
        fn go<'a>(c: &'a Certificate, path: String, out: &mut Vec<(String, &'a Certificate)>) {
            out.push((path.clone(), c));
            for (i, child) in c.children.iter().enumerate() {
                go(child, format!("{path}/{i}"), out);
            }
        }
        go(self, "root".to_string(), &mut out);
        out
    }

    /// Mutable access to the node at `path` (as produced by [`walk`](Self::walk)).
    pub fn node_mut(&mut self, path: &str) -> Option<&mut Certificate> {
        let mut parts = path.split('/');
        if parts.next() != Some("root") {
            return None;
        }
        let mut node = self;
        for part in parts {
            let i: usize = part.parse().ok()?;
            node = Arc::make_mut(node.children.get_mut(i)?);
        }
        Some(node)
    }
}

/// On-disk certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub version: u32,
    #[serde(with = "decimal_prime")]
    pub prime: PrimeModulus,
    #[serde(with = "decimal")]
    pub root_seed: u64,
    pub statement: Statement,
    pub tree: Certificate,
}

impl CertificateFile {
    pub fn new(tree: Certificate, prime: PrimeModulus, root_seed: u64) -> Self {
        CertificateFile {
            version: CERTIFICATE_VERSION,
            prime,
            root_seed,
            statement: tree.statement,
            tree,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn verify(&self) -> Result<(), VerifyError> {
        if self.version != CERTIFICATE_VERSION {
            return Err(VerifyError::new(
                "root",
                format!("unsupported version {}", self.version),
            ));
        }
        if self.statement != self.tree.statement {
            return Err(VerifyError::new(
                "root",
                format!(
                    "top-level statement {} differs from tree root {}",
                    self.statement, self.tree.statement
                ),
            ));
        }
        verify_certificate(&self.tree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {reason}")]
pub struct VerifyError {
    pub path: String,
    pub reason: String,
}

impl VerifyError {
    fn new(path: &str, reason: impl Into<String>) -> Self {
        VerifyError {
            path: path.to_string(),
            reason: reason.into(),
        }
    }
}

/// Re-checks every side condition of the tree and replays every `Direct`
/// leaf from its stored seed and prime.
pub fn verify_certificate(c: &Certificate) -> Result<(), VerifyError> {
    let mut replayed = HashMap::new();
    verify_node(c, "root", &mut replayed)
}

type ReplayKey = (Statement, u64, u64);

fn verify_node(
    c: &Certificate,
    path: &str,
    replayed: &mut HashMap<ReplayKey, u64>,
) -> Result<(), VerifyError> {
    let st = c.statement;
    let fail = |reason: String| Err(VerifyError::new(path, reason));
    if !is_subabundant(&st) {
        return fail(format!("statement {st} is not subabundant"));
    }
    if c.method != Method::Split && c.splitting.is_some() {
        return fail(format!("{} node carries a splitting", c.method));
    }
    if c.method != Method::Direct && c.evidence.is_some() {
        return fail(format!("{} node carries rank evidence", c.method));
    }
    let expected_children = match c.method {
        Method::Split => 3,
        Method::LemmaF => 1,
        _ => 0,
    };
    if c.children.len() != expected_children {
        return fail(format!(
            "{} node has {} children, expected {expected_children}",
            c.method,
            c.children.len()
        ));
    }
    match c.method {
        Method::TrivialEmpty => {
            if !st.is_empty() {
                return fail(format!("statement {st} is not empty"));
            }
        }
        Method::TrivialD1 => {
            if st.d > 1 {
                return fail(format!("statement {st} has degree above 1"));
            }
        }
        Method::ClosedFormD2 => {
            if st.d != 2 || !st.is_secant() || st.s == 0 {
                return fail(format!("statement {st} is not a quadric secant statement"));
            }
            if d2_dimension(st.n, st.s) + 1 != a_value(&st) {
                return fail(format!("closed form gives dimension below a for {st}"));
            }
        }
        Method::LemmaF => {
            let child = &c.children[0];
            let child_path = format!("{path}/0");
            let shape_ok = st.s == 0 && st.t == 0 && st.v == 0 && st.u > 0;
            let expected = Statement::new(st.n, st.d + 1, st.u, 0, 0, 0)
                .ok()
                .filter(|_| shape_ok);
            match expected {
                Some(e) if lemma_f_consequence(&e).ok() == Some(st) => {
                    if child.statement != e {
                        return Err(VerifyError::new(
                            &child_path,
                            format!("statement {} should be {e}", child.statement),
                        ));
                    }
                }
                _ => return fail(format!("statement {st} is not of the form (n,d,0,0,s,0)")),
            }
            verify_node(child, &child_path, replayed)?;
        }
        Method::Split => {
            let Some(sp) = c.splitting else {
                return fail("split node without a splitting".into());
            };
            let expected = match split_children(&st, &sp) {
                Ok(e) => e,
                Err(err) => return fail(err.to_string()),
            };
            for (i, (child, want)) in c.children.iter().zip(expected.iter()).enumerate() {
                if child.statement != *want {
                    return Err(VerifyError::new(
                        &format!("{path}/{i}"),
                        format!("statement {} should be {want}", child.statement),
                    ));
                }
            }
            let sum: u64 = expected.iter().map(a_value).sum();
            if sum != a_value(&st) {
                return fail(format!(
                    "children a-values sum to {sum}, not {}",
                    a_value(&st)
                ));
            }
            for (i, child) in c.children.iter().enumerate() {
                verify_node(child, &format!("{path}/{i}"), replayed)?;
            }
        }
        Method::Direct => {
            let Some(ev) = c.evidence else {
                return fail("direct node without evidence".into());
            };
            let a = a_value(&st);
            if ev.rank != a {
                return fail(format!("recorded rank {} differs from a = {a}", ev.rank));
            }
            if ev.rows != st.row_count() || ev.cols != ambient_dimension(st.n, st.d) {
                return fail(format!(
                    "recorded shape {}x{} differs from {}x{}",
                    ev.rows,
                    ev.cols,
                    st.row_count(),
                    ambient_dimension(st.n, st.d)
                ));
            }
            let key = (st, ev.seed, ev.prime.value());
            let rank = match replayed.get(&key) {
                Some(&r) => r,
                None => {
                    let r = statement_rank(&st, ev.seed, ev.prime, a)
                        .map_err(|e| VerifyError::new(path, e.to_string()))?;
                    replayed.insert(key, r);
                    r
                }
            };
            if rank != ev.rank {
                return fail(format!(
                    "replayed rank {rank} differs from recorded {}",
                    ev.rank
                ));
            }
        }
    }
    Ok(())
}
