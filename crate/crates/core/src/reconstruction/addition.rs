//! Step 2: addition of dominant weights, read off as the Cartan component
//! of a product.
//!
//! Alongside the sums the monoid keeps a working copy of the order, grown
//! by two facts: every factor of `a ⊗ b` lies below `a ⊞ b`, and
//! `u <= v` gives `u ⊞ c <= v ⊞ c`.

use std::collections::HashMap;

use super::order::{OrderVerdict, RecoveredOrder};
use crate::error::{Error, Result};
use crate::oracle::{Label, OracleTable};

#[derive(Clone, Debug)]
pub struct RecoveredMonoid {
    n: usize,
    sum: Vec<Option<Label>>,
    /// `inverse[a]` maps `a ⊞ c` back to `c`.
    inverse: Vec<HashMap<Label, Label>>,
    leq: Vec<bool>,
    not_leq: Vec<bool>,
    pub zero: Label,
}

impl RecoveredMonoid {
    fn new(n: usize, zero: Label, order: &RecoveredOrder) -> Self {
        let mut m = RecoveredMonoid {
            n,
            sum: vec![None; n * n],
            inverse: vec![HashMap::new(); n],
            leq: (0..n * n).map(|i| order.leq(i / n, i % n)).collect(),
            not_leq: (0..n * n).map(|i| order.verdict(i / n, i % n) == OrderVerdict::NotLeq).collect(),
            zero,
        };
        for x in 0..n {
            m.sum[zero * n + x] = Some(x);
            m.sum[x * n + zero] = Some(x);
            m.inverse[zero].insert(x, x);
            m.inverse[x].insert(x, zero);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add(&self, a: Label, b: Label) -> Option<Label> {
        self.sum[a * self.n + b]
    }

    /// `c` with `a ⊞ c = s`, if one is recorded.
    pub fn difference(&self, s: Label, a: Label) -> Option<Label> {
        self.inverse[a].get(&s).copied()
    }

    /// Identities `a ⊞ b = s` with `a <= b`.
    pub fn identities(&self) -> impl Iterator<Item = (Label, Label, Label)> + '_ {
        (0..self.n).flat_map(move |a| (a..self.n).filter_map(move |b| self.add(a, b).map(|s| (a, b, s))))
    }

    /// Whether `u <= v` is known, from the order or from recovered sums.
    pub fn leq(&self, u: Label, v: Label) -> bool {
        self.leq[u * self.n + v]
    }

    /// Records `a ⊞ b = s` and the order facts it implies.
    pub(crate) fn set(&mut self, t: &OracleTable, a: Label, b: Label, s: Label) -> Result<()> {
        if let Some(old) = self.add(a, b) {
            if old == s {
                return Ok(());
            }
            return Err(Error::stage("addition", "two different sums for one pair"));
        }
        if self.difference(s, a).is_some() || self.difference(s, b).is_some() {
            return Err(Error::stage("addition", "sum is not cancellative"));
        }
        self.sum[a * self.n + b] = Some(s);
        self.sum[b * self.n + a] = Some(s);
        self.inverse[a].insert(s, b);
        self.inverse[b].insert(s, a);
        for &(k, _) in t.known(a, b).unwrap_or(&[]) {
            self.insert_leq(k, s)?;
        }
        Ok(())
    }

    /// Adds `u <= v` and closes transitively.
    fn insert_leq(&mut self, u: Label, v: Label) -> Result<bool> {
        if self.leq(u, v) {
            return Ok(false);
        }
        let n = self.n;
        let below: Vec<Label> = (0..n).filter(|&x| self.leq(x, u)).collect();
        let above: Vec<Label> = (0..n).filter(|&y| self.leq(v, y)).collect();
        for &x in &below {
            for &y in &above {
                if x != y && self.leq(y, x) {
                    return Err(Error::stage("addition", "recovered sums contradict antisymmetry"));
                }
                if self.not_leq[x * n + y] {
                    return Err(Error::stage("addition", "recovered sums contradict a refuted pair"));
                }
                self.leq[x * n + y] = true;
            }
        }
        Ok(true)
    }

    /// Factors of `a ⊗ b` that can still be `a ⊞ b` by the order rules.
    pub(crate) fn candidates(&self, t: &OracleTable, a: Label, b: Label) -> Vec<Label> {
        let Some(p) = t.known(a, b) else { return Vec::new() };
        if let Some(s) = self.add(a, b) {
            return vec![s];
        }
        p.iter()
            .filter(|z| z.1 == 1)
            .map(|z| z.0)
            .filter(|&k| {
                if (k == a && b != self.zero) || (k == b && a != self.zero) {
                    return false;
                }
                // addition is cancellative
                if self.difference(k, a).is_some() || self.difference(k, b).is_some() {
                    return false;
                }
                // the sum dominates every other factor
                p.iter().all(|&(o, _)| o == k || (!self.leq(k, o) && !self.not_leq[o * self.n + k]))
            })
            .collect()
    }

    /// One round of the order rules; reports whether anything changed.
    pub(crate) fn propagate(&mut self, t: &OracleTable) -> Result<bool> {
        let n = self.n;
        let mut changed = false;
        for a in 0..n {
            for b in a..n {
                if self.add(a, b).is_some() || t.known(a, b).is_none() {
                    continue;
                }
                match self.candidates(t, a, b).as_slice() {
                    [] => {
                        return Err(Error::stage(
                            "addition",
                            format!("no factor of {} ⊗ {} can be their sum", t.name(a), t.name(b)),
                        ))
                    }
                    [s] => {
                        self.set(t, a, b, *s)?;
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        let pairs: Vec<(Label, Label)> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && self.leq(u, v))
            .collect();
        for (u, v) in pairs {
            for c in 0..n {
                if let (Some(x), Some(y)) = (self.add(u, c), self.add(v, c)) {
                    changed |= self.insert_leq(x, y)?;
                }
            }
        }
        Ok(changed)
    }
}

/// Identifies `a ⊞ b` for every in-window pair whose Cartan component is
/// pinned down by the order, by cancellation, and by the order facts that
/// earlier sums imply; other pairs stay open.
pub fn recover_addition(t: &OracleTable, order: &RecoveredOrder) -> Result<RecoveredMonoid> {
    let mut m = RecoveredMonoid::new(t.len(), t.unit(), order);
    while m.propagate(t)? {}
    Ok(m)
}

/// In-window pairs whose sum is still open.
pub(crate) fn open_pairs(t: &OracleTable, m: &RecoveredMonoid) -> Vec<(Label, Label)> {
    let n = t.len();
    (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .filter(|&(a, b)| m.add(a, b).is_none() && t.known(a, b).is_some())
        .collect()
}
