//! The splitting rule and the quadric-to-subproduct consequence.

use serde::{Deserialize, Serialize};

use super::InductorError;
use crate::terracini::{is_subabundant, Statement};

/// A decomposition `s = s' + s''`, `t = t' + t''`, `u = u' + u''`, `v = v' + v''`,
/// each stored as `[primed, double-primed]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Splitting {
    pub s: [u32; 2],
    pub t: [u32; 2],
    pub u: [u32; 2],
    pub v: [u32; 2],
}

impl Splitting {
    /// The splitting of `st` with the given primed parts.
    pub fn from_primed(st: &Statement, s1: u32, t1: u32, u1: u32, v1: u32) -> Option<Self> {
        Some(Splitting {
            s: [s1, st.s.checked_sub(s1)?],
            t: [t1, st.t.checked_sub(t1)?],
            u: [u1, st.u.checked_sub(u1)?],
            v: [v1, st.v.checked_sub(v1)?],
        })
    }

    fn sums(&self) -> [u64; 4] {
        [self.s, self.t, self.u, self.v].map(|[a, b]| a as u64 + b as u64)
    }
}

/// The three statements whose truth implies `st` under `sp`:
///
/// ```text
/// (n-1, d,   s'', t''+u', u'',    s'+v'')
/// (n-1, d-1, s',  t'+v'', s''+u', v')
/// (n-1, d-2, 0,   v',     s',     0)
/// ```
pub fn split_children(st: &Statement, sp: &Splitting) -> Result<[Statement; 3], InductorError> {
    if st.n < 2 || st.d < 3 {
        return Err(InductorError::Hypothesis(format!(
            "splitting needs n >= 2 and d >= 3, got {st}"
        )));
    }
    let want = [st.s, st.t, st.u, st.v].map(u64::from);
    if sp.sums() != want {
        return Err(InductorError::Hypothesis(format!(
            "splitting {sp:?} does not add up to {st}"
        )));
    }
    let (n, d) = (st.n - 1, st.d);
    let [s1, s2] = sp.s;
    let [t1, t2] = sp.t;
    let [u1, u2] = sp.u;
    let [v1, v2] = sp.v;
    let mk = |d, s, t, u, v| Statement::new(n, d, s, t, u, v).map_err(InductorError::from);
    Ok([
        mk(d, s2, t2 + u1, u2, s1 + v2)?,
        mk(d - 1, s1, t1 + v2, s2 + u1, v1)?,
        mk(d - 2, 0, v1, s1, 0)?,
    ])
}

/// `(n,d,s,0,0,0)` true and subabundant gives `(n,d-1,0,0,s,0)` true.
///
/// Only the shape and subabundance are checked here; truth of the input is
/// the caller's responsibility.
pub fn lemma_f_consequence(st: &Statement) -> Result<Statement, InductorError> {
    if !st.is_secant() || st.d < 2 || st.s == 0 {
        return Err(InductorError::Hypothesis(format!(
            "expected (n,d,s,0,0,0) with d >= 2 and s >= 1, got {st}"
        )));
    }
    if !is_subabundant(st) {
        return Err(InductorError::NotSubabundant(*st));
    }
    Ok(Statement::new(st.n, st.d - 1, 0, 0, st.s, 0)?)
}

/// `s'` candidates: 0 first, then outward from `floor(s/2)`.
pub(crate) fn s_prime_order(s: u32) -> Vec<u32> {
    let mut out = vec![0];
    let mid = s / 2;
    let mut push = |x: u32| {
        if !out.contains(&x) {
            out.push(x);
        }
    };
    push(mid);
    for k in 1..=s {
        if let Some(lo) = mid.checked_sub(k) {
            push(lo);
        }
        if mid + k <= s {
            push(mid + k);
        }
    }
    out
}

/// All splittings of `st` in search order: `s'` as in [`s_prime_order`],
/// then `t'`, `u'`, `v'` ascending.
pub fn splittings(st: &Statement) -> impl Iterator<Item = Splitting> + '_ {
    s_prime_order(st.s).into_iter().flat_map(move |s1| {
        (0..=st.t).flat_map(move |t1| {
            (0..=st.u).flat_map(move |u1| {
                (0..=st.v).filter_map(move |v1| Splitting::from_primed(st, s1, t1, u1, v1))
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terracini::a_value;

    fn st(a: [u32; 6]) -> Statement {
        Statement::try_from(a).unwrap()
    }

    #[test]
    fn children_of_secant_with_zero_prime() {
        let parent = st([4, 3, 2, 0, 0, 0]);
        let sp = Splitting::from_primed(&parent, 0, 0, 0, 0).unwrap();
        let kids = split_children(&parent, &sp).unwrap();
        assert_eq!(
            kids,
            [
                st([3, 3, 2, 0, 0, 0]),
                st([3, 2, 0, 0, 2, 0]),
                st([3, 1, 0, 0, 0, 0])
            ]
        );
    }

    #[test]
    fn children_of_mixed_statement() {
        let parent = st([5, 4, 3, 1, 1, 1]);
        let sp = Splitting {
            s: [1, 2],
            t: [1, 0],
            u: [0, 1],
            v: [1, 0],
        };
        let kids = split_children(&parent, &sp).unwrap();
        assert_eq!(
            kids,
            [
                st([4, 4, 2, 0, 1, 1]),
                st([4, 3, 1, 1, 2, 1]),
                st([4, 2, 0, 1, 1, 0])
            ]
        );
        assert_eq!(kids.iter().map(a_value).sum::<u64>(), a_value(&parent));
    }

    #[test]
    fn rejects_bad_splittings() {
        let parent = st([4, 3, 2, 0, 0, 0]);
        let bad = Splitting {
            s: [1, 2],
            t: [0, 0],
            u: [0, 0],
            v: [0, 0],
        };
        assert!(split_children(&parent, &bad).is_err());
        let ok = Splitting::from_primed(&parent, 1, 0, 0, 0).unwrap();
        assert!(split_children(&st([1, 3, 2, 0, 0, 0]), &ok).is_err());
        assert!(split_children(&st([4, 2, 2, 0, 0, 0]), &ok).is_err());
    }

    #[test]
    fn lemma_f_shape() {
        assert_eq!(
            lemma_f_consequence(&st([3, 3, 2, 0, 0, 0])).unwrap(),
            st([3, 2, 0, 0, 2, 0])
        );
        assert!(lemma_f_consequence(&st([3, 3, 2, 1, 0, 0])).is_err());
        assert!(matches!(
            lemma_f_consequence(&st([3, 4, 3, 0, 0, 0])),
            Err(InductorError::NotSubabundant(_))
        ));
    }

    #[test]
    fn search_order() {
        assert_eq!(s_prime_order(0), vec![0]);
        assert_eq!(s_prime_order(1), vec![0, 1]);
        assert_eq!(s_prime_order(4), vec![0, 2, 1, 3, 4]);
        assert_eq!(s_prime_order(5), vec![0, 2, 1, 3, 4, 5]);
        let parent = st([3, 3, 1, 1, 0, 1]);
        let all: Vec<_> = splittings(&parent).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(
            all[0],
            Splitting {
                s: [0, 1],
                t: [0, 1],
                u: [0, 0],
                v: [0, 1]
            }
        );
    }
}
