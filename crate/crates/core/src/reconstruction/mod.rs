//! Recovery of a root datum from nothing but an oracle table.
//!
//! The stages run in order: validate, order, addition, lattice,
//! simple_roots, simple_coroots, datum, weyl, certify. The last one replays
//! every product of the table through the character engine of the
//! recovered datum, so a certified verdict means the table is exactly the
//! window of that datum's representation semiring.

mod addition;
mod lattice;
mod order;
mod roots;
mod support;

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::char_engine::CharEngine;
use crate::error::{Error, Result};
use crate::oracle::{validate_oracle, Label, OracleTable, Product, Window};
use crate::root_datum::{root_data_isomorphic, weyl_group, RootDatum, RootDatumData, WeylGroup};
use crate::weight::{Coweight, Weight};

pub use addition::{recover_addition, RecoveredMonoid};
pub use lattice::{recover_lattice, RecoveredLattice};
pub use order::{check_certificate, recover_order, Certificate, OrderVerdict, RecoveredOrder};
pub use roots::{recover_simple_coroots, recover_simple_roots};
pub use support::{LabelSet, Support};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n_max: usize,
    pub theta_depth: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            n_max: 3,
            theta_depth: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Failed { stage: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateEntry {
    Reflexive,
    Theta { depth: usize, theta: Vec<String>, n_max: usize },
    Transitive { middle: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderEntry {
    pub lower: String,
    pub upper: String,
    pub certificate: CertificateEntry,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub certified: Vec<OrderEntry>,
    pub not_leq: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidSummary {
    pub zero: String,
    /// `[a, b, a ⊞ b]`
    pub identities: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub verdict: Verdict,
    pub params: Params,
    pub labels: usize,
    pub order: Option<OrderSummary>,
    pub monoid: Option<MonoidSummary>,
    pub lattice_rank: Option<usize>,
    pub embedding: BTreeMap<String, Weight>,
    pub simple_roots: Vec<Weight>,
    pub simple_coroots: Vec<Coweight>,
    pub weyl_order: Option<usize>,
    pub datum: Option<RootDatumData>,
    /// Labels that no in-window product reaches, placed from the window
    /// shape alone.
    #[serde(default)]
    pub placed_by_window: Vec<String>,
    /// Sums `[a, b, a ⊞ b]` the window left open, fixed by search.
    #[serde(default)]
    pub assumed_sums: Vec<[String; 3]>,
}

impl ReconstructionReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    /// Stage name of a failure.
    pub fn failed_stage(&self) -> Option<&str> {
        match &self.verdict {
            Verdict::Failed { stage, .. } => Some(stage),
            Verdict::Certified => None,
        }
    }

    /// The recovered datum, revalidated.
    pub fn root_datum(&self) -> Option<RootDatum> {
        self.datum.clone().and_then(|d| RootDatum::new(d).ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn order_summary(t: &OracleTable, o: &RecoveredOrder) -> OrderSummary {
    let names = |s: &LabelSet| s.iter().map(|x| t.name(x).to_string()).collect::<Vec<_>>();
    let certified = o
        .leq_pairs()
        .map(|(a, b)| OrderEntry {
            lower: t.name(a).to_string(),
            upper: t.name(b).to_string(),
            certificate: match o.certificate(a, b).expect("certified pairs carry certificates") {
                Certificate::Reflexive => CertificateEntry::Reflexive,
                Certificate::Theta { depth, theta } => CertificateEntry::Theta {
                    depth: *depth,
                    theta: names(theta),
                    n_max: o.n_max,
                },
                Certificate::Transitive { middle } => CertificateEntry::Transitive {
                    middle: t.name(*middle).to_string(),
                },
            },
        })
        .collect();
    OrderSummary {
        certified,
        not_leq: o.count(OrderVerdict::NotLeq),
        unknown: o.count(OrderVerdict::Unknown),
    }
}

fn monoid_summary(t: &OracleTable, m: &RecoveredMonoid) -> MonoidSummary {
    MonoidSummary {
        zero: t.name(m.zero).to_string(),
        identities: m
            .identities()
            .map(|(a, b, s)| [t.name(a).to_string(), t.name(b).to_string(), t.name(s).to_string()])
            .collect(),
    }
}

/// The W-orbit of the simple roots, acting through the recovered
/// reflections, and the same for coroots.
fn orbits(roots: &[Weight], coroots: &[Coweight]) -> (BTreeSet<Weight>, BTreeSet<Coweight>) {
    let reflect = |x: &Weight, i: usize| x.sub_scaled(&coroots[i].pair(x), &roots[i]);
    let reflect_co = |y: &Coweight, i: usize| y.sub_scaled(&roots[i].pair(y), &coroots[i]);
    let close = |seed: &[Weight], f: &dyn Fn(&Weight, usize) -> Weight| {
        let mut seen: BTreeSet<Weight> = seed.iter().cloned().collect();
        let mut todo: Vec<Weight> = seed.to_vec();
        while let Some(x) = todo.pop() {
            for i in 0..roots.len() {
                let y = f(&x, i);
                if seen.insert(y.clone()) {
                    todo.push(y);
                }
                // finite root systems have at most a few hundred roots
                if seen.len() > 100_000 {
                    return seen;
                }
            }
        }
        seen
    };
    (close(roots, &reflect), close(coroots, &reflect_co))
}

/// Gives coordinates to the labels no identity reached, by matching them
/// against the products the recovered datum predicts.
fn place_remaining(t: &OracleTable, engine: &CharEngine, lattice: &mut RecoveredLattice) -> Result<()> {
    let mut progress = true;
    while progress && !lattice.is_complete() {
        progress = false;
        for x in 0..t.len() {
            if let (Some(w), None) = (lattice.get(x).cloned(), lattice.get(t.dual(x))) {
                lattice.embedding[t.dual(x)] = Some(engine.dual_label(&w)?);
                progress = true;
            }
        }
        for ((a, b), p) in t.products() {
            let Product::Known(terms) = p else { continue };
            if terms.iter().all(|&(z, _)| lattice.get(z).is_some()) {
                continue;
            }
            let (Some(wa), Some(wb)) = (lattice.get(a), lattice.get(b)) else { continue };
            let truth = engine.tensor_decompose(wa, wb)?;
            let taken: BTreeSet<&Weight> = terms.iter().filter_map(|&(z, _)| lattice.get(z)).collect();
            let mut found = Vec::new();
            for &(z, m) in terms.iter().filter(|&&(z, _)| lattice.get(z).is_none()) {
                let mut fits = truth
                    .iter()
                    .filter(|&(w, k)| !taken.contains(w) && *k == num_bigint::BigUint::from(m));
                if let (Some((w, _)), None) = (fits.next(), fits.next()) {
                    found.push((z, w.clone()));
                }
            }
            for (z, w) in found {
                lattice.embedding[z] = Some(w);
                progress = true;
            }
        }
    }
    Ok(())
}

/// Places labels that no in-window product reaches, using the shape of the
/// window: it is the set of all dominant weights in the smallest box that
/// holds the placed labels. The leftover labels must fill the leftover
/// weights of that box; the assignments consistent with duality are
/// replayed in full and the first that certifies is kept.
fn place_by_window(t: &OracleTable, engine: &CharEngine, lattice: &mut RecoveredLattice) -> Result<Vec<Label>> {
    const MAX_ASSIGNMENTS: usize = 5040;
    let d = engine.datum();
    let window = Window::new(d);
    let bound = lattice
        .placed()
        .flat_map(|(_, w)| window.coordinates(w))
        .map(|c| c.magnitude().clone())
        .max()
        .unwrap_or_default();
    let bound: u64 = bound.try_into().map_err(|_| Error::stage("certify", "window bound overflows"))?;
    let box_weights = window.enumerate(d, bound);
    let placed = lattice.index();
    let unplaced: Vec<Label> = (0..t.len()).filter(|&x| lattice.get(x).is_none()).collect();
    let free: Vec<Weight> = box_weights.iter().filter(|w| !placed.contains_key(*w)).cloned().collect();
    let fail = |reason: String| Error::stage("certify", reason);
    if box_weights.len() != t.len() || free.len() != unplaced.len() {
        return Err(fail(format!(
            "label {} is reached by no product and the window shape does not place it",
            t.name(unplaced[0])
        )));
    }
    let mut last = None;
    let mut tried = 0;
    let mut used = vec![false; free.len()];
    let mut trial = lattice.clone();
    assign(t, engine, &unplaced, &free, &mut used, &mut trial, &mut |trial: &RecoveredLattice| {
        tried += 1;
        if tried > MAX_ASSIGNMENTS {
            return Some(false);
        }
        match certify(t, engine, trial) {
            Ok(()) => Some(true),
            Err(e) => {
                last = Some(e);
                None
            }
        }
    })?;
    if trial.is_complete() {
        *lattice = trial;
        return Ok(unplaced);
    }
    Err(last.unwrap_or_else(|| fail("no placement of the remaining labels respects duality".into())))
}

/// Backtracking over injective assignments of `free` to `unplaced` that
/// respect duality. `accept` returns `Some(true)` to keep the assignment,
/// `Some(false)` to give up, `None` to continue. On success `trial` holds the
/// assignment; otherwise its unplaced labels are left empty.
fn assign(
    t: &OracleTable,
    engine: &CharEngine,
    unplaced: &[Label],
    free: &[Weight],
    used: &mut [bool],
    trial: &mut RecoveredLattice,
    accept: &mut dyn FnMut(&RecoveredLattice) -> Option<bool>,
) -> Result<Option<bool>> {
    let Some((&x, rest)) = unplaced.split_first() else {
        return Ok(accept(trial));
    };
    if trial.get(x).is_some() {
        return assign(t, engine, rest, free, used, trial, accept);
    }
    for i in 0..free.len() {
        if used[i] {
            continue;
        }
        let dual = engine.dual_label(&free[i])?;
        let y = t.dual(x);
        let j = match trial.get(y) {
            Some(w) if *w == dual => None,
            Some(_) => continue,
            None if y == x => {
                if dual != free[i] {
                    continue;
                }
                None
            }
            None => match free.iter().position(|w| *w == dual) {
                Some(j) if !used[j] && j != i => Some(j),
                _ => continue,
            },
        };
        used[i] = true;
        trial.embedding[x] = Some(free[i].clone());
        if let Some(j) = j {
            used[j] = true;
            trial.embedding[y] = Some(free[j].clone());
        }
        let r = assign(t, engine, rest, free, used, trial, accept)?;
        if r.is_some() {
            if r == Some(false) {
                trial.embedding[x] = None;
                if j.is_some() {
                    trial.embedding[y] = None;
                }
            }
            return Ok(r);
        }
        used[i] = false;
        trial.embedding[x] = None;
        if let Some(j) = j {
            used[j] = false;
            trial.embedding[y] = None;
        }
    }
    Ok(None)
}

/// Replays the whole table through the recovered datum.
fn certify(t: &OracleTable, engine: &CharEngine, lattice: &RecoveredLattice) -> Result<()> {
    let d = engine.datum();
    let emb: Vec<&Weight> = (0..t.len()).map(|x| lattice.get(x).expect("every label is placed")).collect();
    let index = lattice.index();
    let fail = |reason: String| Error::stage("certify", reason);
    if index.len() != t.len() {
        return Err(fail("two labels received the same coordinates".into()));
    }
    if !emb[t.unit()].is_zero() {
        return Err(fail("unit is not the zero weight".into()));
    }
    for x in 0..t.len() {
        if !d.is_dominant(emb[x]) {
            return Err(fail(format!("{} has non-dominant coordinates {:?}", t.name(x), emb[x])));
        }
        if &engine.dual_label(emb[x])? != emb[t.dual(x)] {
            return Err(fail(format!("dual of {} does not match", t.name(x))));
        }
    }
    let pairs: Vec<((usize, usize), &Product)> = t.products().collect();
    pairs.par_iter().try_for_each(|&((a, b), p)| {
        let truth = engine.tensor_decompose(emb[a], emb[b])?;
        let ok = match p {
            Product::OutOfWindow => truth.labels().any(|nu| !index.contains_key(nu)),
            Product::Known(terms) => {
                terms.len() == truth.len()
                    && terms
                        .iter()
                        .all(|&(z, m)| truth.multiplicity(emb[z]) == num_bigint::BigUint::from(m))
            }
        };
        if ok {
            Ok(())
        } else {
            Err(fail(format!("product {} ⊗ {} disagrees with the recovered datum", t.name(a), t.name(b))))
        }
    })
}

fn embedding_map(t: &OracleTable, lattice: &RecoveredLattice) -> BTreeMap<String, Weight> {
    lattice.placed().map(|(x, w)| (t.name(x).to_string(), w.clone())).collect()
}

/// How far the search over undetermined sums may go.
const SEARCH_DEPTH: usize = 4;
const SEARCH_LEAVES: usize = 64;

/// One completed line of reasoning: the sums it assumed and everything
/// recovered downstream of them.
#[derive(Default)]
struct Leaf {
    monoid: Option<RecoveredMonoid>,
    assumed: Vec<(Label, Label, Label)>,
    lattice: Option<RecoveredLattice>,
    roots: Vec<Weight>,
    coroots: Vec<Coweight>,
    data: Option<RootDatumData>,
    datum: Option<RootDatum>,
    weyl_order: Option<usize>,
    by_window: Vec<Label>,
}

/// Stages simple_roots through certify for one lattice.
fn finish(t: &OracleTable, mut lattice: RecoveredLattice, leaf: &mut Leaf) -> Result<()> {
    leaf.lattice = Some(lattice.clone());
    if lattice.rank == 0 && t.len() > 1 {
        return Err(Error::stage("lattice", "no identity relates the labels; the window is too small"));
    }
    let roots = recover_simple_roots(t, &lattice)?;
    leaf.roots = roots.clone();
    let coroots = recover_simple_coroots(t, &lattice, &roots)?;
    leaf.coroots = coroots.clone();

    let data = RootDatumData {
        rank: lattice.rank,
        simple_roots: roots.clone(),
        simple_coroots: coroots.clone(),
        name: None,
    };
    leaf.data = Some(data.clone());
    let datum = RootDatum::new(data).map_err(|e| Error::stage("datum", e.to_string()))?;
    let w: WeylGroup = weyl_group(&datum).map_err(|e| Error::stage("weyl", e.to_string()))?;
    let (all_roots, all_coroots) = orbits(&roots, &coroots);
    let positive = datum.positive_root_pairs().len();
    if all_roots.len() != 2 * positive
        || all_coroots.len() != 2 * positive
        || !w.permutes(&all_roots.iter().cloned().collect::<Vec<_>>())
    {
        return Err(Error::stage(
            "weyl",
            format!("orbits of the simple roots give {} roots, expected {}", all_roots.len(), 2 * positive),
        ));
    }
    leaf.weyl_order = Some(w.order());
    let engine = CharEngine::new(&datum)?;
    leaf.datum = Some(datum);
    place_remaining(t, &engine, &mut lattice)?;
    let result = if lattice.is_complete() {
        certify(t, &engine, &lattice)
    } else {
        place_by_window(t, &engine, &mut lattice).map(|placed| leaf.by_window = placed)
    };
    leaf.lattice = Some(lattice);
    result
}

/// Settles the sums the rules can settle, then branches over the candidates
/// of the most constrained open sum.
fn explore(
    t: &OracleTable,
    mut m: RecoveredMonoid,
    assumed: Vec<(Label, Label, Label)>,
    depth: usize,
    leaves: &mut Vec<(Leaf, Result<()>)>,
) {
    let mut leaf = Leaf {
        assumed: assumed.clone(),
        ..Leaf::default()
    };
    let outcome = match lattice::try_recover_lattice(t, &mut m) {
        Err(e) => Err(e),
        Ok(Some(l)) => {
            leaf.monoid = Some(m);
            let r = finish(t, l, &mut leaf);
            leaves.push((leaf, r));
            return;
        }
        Ok(None) => {
            let (a, b, cands) = lattice::branch_point(t, &m).expect("open sums remain");
            if depth == 0 || leaves.len() >= SEARCH_LEAVES {
                Err(Error::stage(
                    "addition",
                    format!("the sum of {} and {} is not determined by the window", t.name(a), t.name(b)),
                ))
            } else {
                for k in cands {
                    let mut next = m.clone();
                    let mut path = assumed.clone();
                    path.push((a, b, k));
                    match next.set(t, a, b, k) {
                        Ok(()) => explore(t, next, path, depth - 1, leaves),
                        Err(e) => leaves.push((
                            Leaf {
                                assumed: path,
                                ..Leaf::default()
                            },
                            Err(e),
                        )),
                    }
                }
                return;
            }
        }
    };
    leaf.monoid = Some(m);
    leaves.push((leaf, outcome));
}

struct Pipeline<'a> {
    t: &'a OracleTable,
    report: ReconstructionReport,
}

impl Pipeline<'_> {
    fn record(&mut self, leaf: &Leaf) {
        let t = self.t;
        if let Some(m) = &leaf.monoid {
            self.report.monoid = Some(monoid_summary(t, m));
        }
        let name = |x: Label| t.name(x).to_string();
        self.report.assumed_sums = leaf.assumed.iter().map(|&(a, b, s)| [name(a), name(b), name(s)]).collect();
        if let Some(l) = &leaf.lattice {
            self.report.lattice_rank = Some(l.rank);
            self.report.embedding = embedding_map(t, l);
        }
        self.report.simple_roots = leaf.roots.clone();
        self.report.simple_coroots = leaf.coroots.clone();
        self.report.datum = leaf.data.clone();
        self.report.weyl_order = leaf.weyl_order;
        self.report.placed_by_window = leaf.by_window.iter().map(|&x| name(x)).collect();
    }

    fn run(&mut self) -> Result<()> {
        let t = self.t;
        let params = self.report.params;
        validate_oracle(t).map_err(|e| Error::stage("validate", e.to_string()))?;
        let order = order::order_unchecked(t, params.n_max, params.theta_depth)?;
        self.report.order = Some(order_summary(t, &order));
        let monoid = recover_addition(t, &order)?;
        self.report.monoid = Some(monoid_summary(t, &monoid));

        let mut leaves = Vec::new();
        explore(t, monoid, Vec::new(), SEARCH_DEPTH, &mut leaves);
        if leaves.len() == 1 && leaves[0].0.assumed.is_empty() {
            let (leaf, outcome) = leaves.pop().expect("one leaf");
            self.record(&leaf);
            return outcome;
        }
        let certified: Vec<&Leaf> = leaves.iter().filter(|(_, r)| r.is_ok()).map(|(l, _)| l).collect();
        let Some(first) = certified.first() else {
            let (a, b, _) = leaves[0].0.assumed[0];
            return Err(Error::stage(
                "addition",
                format!(
                    "the sum of {} and {} is not determined by the window: no choice among {} lines of reasoning certifies",
                    t.name(a),
                    t.name(b),
                    leaves.len()
                ),
            ));
        };
        self.record(first);
        let d = first.datum.as_ref().expect("certified leaves carry a datum");
        if certified
            .iter()
            .any(|l| root_data_isomorphic(d, l.datum.as_ref().expect("certified")).is_none())
        {
            return Err(Error::stage("addition", "the window is consistent with non-isomorphic root data"));
        }
        Ok(())
    }
}

/// Runs every stage and reports the first failure, if any.
pub fn recover_datum(t: &OracleTable, params: &Params) -> ReconstructionReport {
    let mut p = Pipeline {
        t,
        report: ReconstructionReport {
            verdict: Verdict::Certified,
            params: *params,
            labels: t.len(),
            order: None,
            monoid: None,
            lattice_rank: None,
            embedding: BTreeMap::new(),
            simple_roots: Vec::new(),
            simple_coroots: Vec::new(),
            weyl_order: None,
            datum: None,
            placed_by_window: Vec::new(),
            assumed_sums: Vec::new(),
        },
    };
    if let Err(e) = p.run() {
        p.report.verdict = match e {
            Error::Reconstruction { stage, reason } => Verdict::Failed { stage, reason },
            other => Verdict::Failed {
                stage: "certify".into(),
                reason: other.to_string(),
            },
        };
    }
    p.report
}
