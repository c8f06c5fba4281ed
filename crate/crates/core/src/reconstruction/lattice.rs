//! Step 3: the weight lattice as the group completion of the recovered
//! monoid.
//!
//! Identities left open by the order are settled by elimination: the true
//! completion is free and distinct labels stay distinct in it, so a
//! candidate sum that would create torsion or merge two labels is ruled
//! out, as is one whose assumption leads to a contradiction after
//! propagation. A pair whose candidates all but one fail gets the survivor.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::addition::{open_pairs, RecoveredMonoid};
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::oracle::{Label, OracleTable};
use crate::weight::Weight;

#[derive(Clone, Debug)]
pub struct RecoveredLattice {
    pub rank: usize,
    /// Coordinates of every label pinned down by some identity. Labels near
    /// the edge of the window may occur in no identity at all; they are
    /// placed later, once the datum is known.
    pub embedding: Vec<Option<Weight>>,
}

impl RecoveredLattice {
    pub fn get(&self, x: Label) -> Option<&Weight> {
        self.embedding[x].as_ref()
    }

    pub fn label_of(&self, w: &Weight) -> Option<Label> {
        self.embedding.iter().position(|e| e.as_ref() == Some(w))
    }

    /// Placed labels with their coordinates.
    pub fn placed(&self) -> impl Iterator<Item = (Label, &Weight)> + '_ {
        self.embedding.iter().enumerate().filter_map(|(x, w)| w.as_ref().map(|w| (x, w)))
    }

    pub fn index(&self) -> HashMap<Weight, Label> {
        self.placed().map(|(x, w)| (w.clone(), x)).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.embedding.iter().all(Option::is_some)
    }
}

enum Completion {
    Free(RecoveredLattice),
    Torsion(Vec<BigInt>),
    Collision(Label, Label),
}

/// The labels of the largest connected component of the relations.
fn main_component(n: usize, relations: &[(Label, Label, Label)]) -> Vec<bool> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut touched = vec![false; n];
    for &(a, b, s) in relations {
        for x in [a, b, s] {
            touched[x] = true;
        }
        let (ra, rb, rs) = (find(&mut parent, a), find(&mut parent, b), find(&mut parent, s));
        parent[rb] = ra;
        parent[rs] = ra;
    }
    let mut size = vec![0usize; n];
    for x in (0..n).filter(|&x| touched[x]) {
        let r = find(&mut parent, x);
        size[r] += 1;
    }
    let Some(best) = (0..n).filter(|&r| size[r] > 0).max_by_key(|&r| (size[r], std::cmp::Reverse(r))) else {
        return touched;
    };
    (0..n).map(|x| touched[x] && find(&mut parent, x) == best).collect()
}

/// `Z^labels` modulo `e_zero` and `e_a + e_b - e_s` for every identity,
/// restricted to the main component.
fn complete(n: usize, zero: Label, relations: &[(Label, Label, Label)]) -> Completion {
    let keep = main_component(n, relations);
    let symbols: Vec<Label> = (0..n).filter(|&x| keep[x] && x != zero).collect();
    let col: HashMap<Label, usize> = symbols.iter().enumerate().map(|(j, &x)| (x, j)).collect();
    let cols = symbols.len();
    let matrix: IntMatrix = relations
        .iter()
        .filter(|&&(a, _, _)| keep[a])
        .map(|&(a, b, s)| {
            let mut row = vec![BigInt::zero(); cols];
            for (x, c) in [(a, 1), (b, 1), (s, -1)] {
                if let Some(&j) = col.get(&x) {
                    row[j] += c;
                }
            }
            row
        })
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .collect();
    let (rank, q, r) = if matrix.is_empty() {
        (cols, linalg::identity(cols), 0)
    } else {
        let s = linalg::smith(&matrix, cols);
        let torsion = s.torsion();
        if !torsion.is_empty() {
            return Completion::Torsion(torsion);
        }
        let r = s.rank();
        (cols - r, s.q, r)
    };
    let embedding: Vec<Option<Weight>> = (0..n)
        .map(|x| match col.get(&x) {
            Some(&j) => Some(Weight::new(q[j][r..].to_vec())),
            None if x == zero => Some(Weight::zero(rank)),
            None => None,
        })
        .collect();
    let mut seen = HashMap::new();
    for (x, w) in embedding.iter().enumerate() {
        if let Some(w) = w {
            if let Some(y) = seen.insert(w, x) {
                return Completion::Collision(y, x);
            }
        }
    }
    Completion::Free(RecoveredLattice { rank, embedding })
}

fn relations(m: &RecoveredMonoid) -> Vec<(Label, Label, Label)> {
    m.identities().filter(|&(a, b, _)| a != m.zero && b != m.zero).collect()
}

fn completion(t: &OracleTable, m: &RecoveredMonoid) -> Result<RecoveredLattice> {
    match complete(t.len(), m.zero, &relations(m)) {
        Completion::Free(l) => Ok(l),
        Completion::Torsion(f) => {
            let f: Vec<String> = f.iter().map(|d| d.to_string()).collect();
            Err(Error::stage(
                "lattice",
                format!("inconsistent oracle: completion has torsion with invariant factors {}", f.join(", ")),
            ))
        }
        Completion::Collision(x, y) => Err(Error::stage(
            "lattice",
            format!("inconsistent oracle: labels {} and {} coincide in the completion", t.name(x), t.name(y)),
        )),
    }
}

/// Candidates for `a ⊞ b` that keep the completion free and injective.
pub(crate) fn lattice_candidates(t: &OracleTable, m: &RecoveredMonoid, a: Label, b: Label) -> Vec<Label> {
    let base = relations(m);
    m.candidates(t, a, b)
        .into_par_iter()
        .filter(|&k| {
            let mut rel = base.clone();
            rel.push((a, b, k));
            matches!(complete(t.len(), m.zero, &rel), Completion::Free(_))
        })
        .collect()
}

fn lattice_round(t: &OracleTable, m: &mut RecoveredMonoid) -> Result<bool> {
    let mut changed = false;
    let mut open = open_pairs(t, m);
    open.sort_by_key(|&(a, b)| (m.candidates(t, a, b).len(), a, b));
    for (a, b) in open {
        if m.add(a, b).is_some() {
            continue;
        }
        match lattice_candidates(t, m, a, b).as_slice() {
            [] => {
                return Err(Error::stage(
                    "addition",
                    format!("no factor of {} ⊗ {} can be their sum", t.name(a), t.name(b)),
                ))
            }
            [s] => {
                m.set(t, a, b, *s)?;
                changed = true;
            }
            _ => {}
        }
    }
    Ok(changed)
}

/// Applies the order and lattice rules until nothing changes.
fn saturate(t: &OracleTable, m: &mut RecoveredMonoid) -> Result<()> {
    loop {
        completion(t, m)?;
        if m.propagate(t)? {
            continue;
        }
        if !lattice_round(t, m)? {
            return Ok(());
        }
    }
}

/// Rules out candidates whose assumption leads to a contradiction.
fn probe(t: &OracleTable, m: &mut RecoveredMonoid) -> Result<bool> {
    let mut open = open_pairs(t, m);
    open.sort_by_key(|&(a, b)| (m.candidates(t, a, b).len(), a, b));
    for (a, b) in open {
        let cands = lattice_candidates(t, m, a, b);
        let alive: Vec<Label> = cands
            .par_iter()
            .copied()
            .filter(|&k| {
                let mut trial = m.clone();
                trial.set(t, a, b, k).is_ok() && saturate(t, &mut trial).is_ok()
            })
            .collect();
        match alive.as_slice() {
            [] => {
                return Err(Error::stage(
                    "addition",
                    format!("every candidate for {} ⊞ {} leads to a contradiction", t.name(a), t.name(b)),
                ))
            }
            [s] => {
                m.set(t, a, b, *s)?;
                saturate(t, m)?;
                return Ok(true);
            }
            _ => {}
        }
    }
    Ok(false)
}

/// Settles what the rules can settle. `Ok(None)` means some sum is still
/// open; the pair with the fewest remaining candidates is available from
/// [`branch_point`].
pub(crate) fn try_recover_lattice(t: &OracleTable, m: &mut RecoveredMonoid) -> Result<Option<RecoveredLattice>> {
    saturate(t, m)?;
    while probe(t, m)? {}
    if open_pairs(t, m).is_empty() {
        completion(t, m).map(Some)
    } else {
        Ok(None)
    }
}

/// The open pair with the fewest surviving candidates.
pub(crate) fn branch_point(t: &OracleTable, m: &RecoveredMonoid) -> Option<(Label, Label, Vec<Label>)> {
    open_pairs(t, m)
        .into_iter()
        .map(|(a, b)| (a, b, lattice_candidates(t, m, a, b)))
        .min_by_key(|(a, b, c)| (c.len(), *a, *b))
}

/// Settles open sums and returns coordinates for every label. Sums found
/// here are written back into `m`.
pub fn recover_lattice(t: &OracleTable, m: &mut RecoveredMonoid) -> Result<RecoveredLattice> {
    match try_recover_lattice(t, m)? {
        Some(l) => Ok(l),
        None => {
            let (a, b) = open_pairs(t, m)[0];
            Err(Error::stage(
                "addition",
                format!("the sum of {} and {} is not determined by the window", t.name(a), t.name(b)),
            ))
        }
    }
}
