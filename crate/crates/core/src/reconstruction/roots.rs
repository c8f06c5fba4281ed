//! Steps 4 and 5: simple roots from squares of labels, simple coroots from
//! how far a root can be subtracted while staying dominant.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::Signed;

use super::lattice::RecoveredLattice;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::oracle::OracleTable;
use crate::weight::{Coweight, Weight};

/// An integer functional positive on every candidate, found by the
/// perceptron rule; it terminates whenever the candidates span a pointed
/// cone.
fn positive_functional(cands: &[Weight], rank: usize) -> Option<Weight> {
    let mut f = Weight::zero(rank);
    for _ in 0..100_000 {
        match cands.iter().find(|c| !c.pair(&f).is_positive()) {
            Some(c) => f = &f + c,
            None => return Some(f),
        }
    }
    None
}

/// Minimal nonzero elements of `{2λ − κ : κ a factor of λ ⊗ λ}`.
pub fn recover_simple_roots(t: &OracleTable, lattice: &RecoveredLattice) -> Result<Vec<Weight>> {
    let mut set = BTreeSet::new();
    for (x, w) in lattice.placed() {
        let Some(p) = t.known(x, x) else { continue };
        let two = w + w;
        for k in p.iter().filter_map(|&(k, _)| lattice.get(k)) {
            let c = &two - k;
            if !c.is_zero() {
                set.insert(c);
            }
        }
    }
    let cands: Vec<Weight> = set.into_iter().collect();
    if cands.is_empty() {
        return Ok(Vec::new());
    }
    let f = positive_functional(&cands, lattice.rank).ok_or_else(|| {
        Error::stage("simple_roots", "root candidates do not lie in a pointed cone")
    })?;
    let top = cands.iter().map(|c| c.pair(&f)).max().unwrap();

    // all sums of at least one candidate up to the largest height
    let mut sums: HashSet<Weight> = cands.iter().cloned().collect();
    let mut frontier: Vec<Weight> = cands.clone();
    while let Some(s) = frontier.pop() {
        for c in &cands {
            let v = &s + c;
            if v.pair(&f) <= top && sums.insert(v.clone()) {
                frontier.push(v);
            }
        }
    }
    let minimal: Vec<Weight> = cands
        .iter()
        .filter(|c| !cands.iter().any(|a| sums.contains(&(*c - a))))
        .cloned()
        .collect();
    let m: IntMatrix = minimal.iter().map(|w| w.coords().to_vec()).collect();
    if linalg::rank(&m) != minimal.len() {
        return Err(Error::stage(
            "simple_roots",
            format!("minimal candidates {minimal:?} are linearly dependent"),
        ));
    }
    Ok(minimal)
}

/// For each simple root α the functional `⟨α̌, ·⟩`, pinned down by
/// `m(μ)`: the largest `m` with `2μ − mα` still a label.
///
/// A scan can stop early when the next point is a label that has no
/// coordinates yet, so it only bounds the pairing from below. Equations are
/// taken from the smallest probes first; a solution must be integral, pair
/// to 2 with α, and respect every scan and every label.
pub fn recover_simple_coroots(t: &OracleTable, lattice: &RecoveredLattice, roots: &[Weight]) -> Result<Vec<Coweight>> {
    let index = lattice.index();
    let rank = lattice.rank;
    // labels whose double is a label, smallest first
    let mut probes: Vec<(usize, &Weight)> = lattice
        .placed()
        .filter(|&(_, w)| !w.is_zero() && index.contains_key(&(w + w)))
        .collect();
    let size = |x: usize| t.known(x, t.dual(x)).map_or(usize::MAX, |p| p.len());
    probes.sort_by_key(|&(x, _)| (size(x), x));

    roots
        .iter()
        .map(|alpha| {
            let scan = |w: &Weight| {
                let two = w + w;
                let mut m = 0i64;
                while index.contains_key(&two.sub_scaled(&BigInt::from(m + 1), alpha)) {
                    m += 1;
                }
                BigInt::from(m)
            };
            let scans: Vec<BigInt> = probes.iter().map(|(_, w)| scan(w)).collect();
            let fits = |c: &Coweight| {
                alpha.pair(c) == BigInt::from(2)
                    && roots.iter().all(|b| b == alpha || !b.pair(c).is_positive())
                    && lattice.placed().all(|(_, w)| !w.pair(c).is_negative())
                    && probes.iter().zip(&scans).all(|((_, w), m)| w.pair(c) >= *m)
            };
            let base_row = alpha.coords().to_vec();
            let mut found = None;
            let mut tried = 0usize;
            let mut chosen: Vec<usize> = Vec::new();
            search(&probes, &base_row, rank, 0, &mut chosen, &mut tried, &mut |sel: &[usize]| {
                let mut rows: IntMatrix = vec![base_row.clone()];
                let mut values = vec![BigInt::from(2)];
                for &i in sel {
                    rows.push(probes[i].1.coords().to_vec());
                    values.push(scans[i].clone());
                }
                let sol = linalg::solve_rational(&rows, &values, rank)?;
                if !sol.unique || !sol.x.iter().all(|q| q.is_integer()) {
                    return None;
                }
                let c = Weight::new(sol.x.iter().map(|q| q.to_integer()).collect());
                fits(&c).then_some(c)
            }, &mut found);
            found.ok_or_else(|| {
                Error::stage(
                    "simple_coroots",
                    format!("no coroot of {alpha:?} is consistent with the window"),
                )
            })
        })
        .collect()
}

/// Depth-first search over independent selections of probes, smallest
/// first, stopping at the first accepted solution.
fn search(
    probes: &[(usize, &Weight)],
    base: &[BigInt],
    rank: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    tried: &mut usize,
    accept: &mut dyn FnMut(&[usize]) -> Option<Coweight>,
    found: &mut Option<Coweight>,
) {
    const BUDGET: usize = 20_000;
    if found.is_some() || *tried >= BUDGET {
        return;
    }
    if chosen.len() + 1 == rank {
        *tried += 1;
        *found = accept(chosen);
        return;
    }
    let mut rows: IntMatrix = vec![base.to_vec()];
    rows.extend(chosen.iter().map(|&i| probes[i].1.coords().to_vec()));
    for i in from..probes.len() {
        rows.push(probes[i].1.coords().to_vec());
        let independent = linalg::rank(&rows) == rows.len();
        rows.pop();
        if independent {
            chosen.push(i);
            search(probes, base, rank, i + 1, chosen, tried, accept, found);
            chosen.pop();
            if found.is_some() || *tried >= BUDGET {
                return;
            }
        }
    }
}
