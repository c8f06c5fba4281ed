//! Opaque-label presentation of a finite window of the representation
//! semiring: the only thing reconstruction is allowed to look at.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::char_engine::CharEngine;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::root_datum::RootDatum;
use crate::weight::Weight;

#[cfg(test)]
mod tests;

/// Label indices refer to positions in [`OracleTable::labels`].
pub type Label = usize;

/// Decomposition of one product: either fully inside the window or not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Product {
    /// `(factor, multiplicity)`, sorted by factor, multiplicities positive.
    Known(Vec<(Label, u64)>),
    OutOfWindow,
}

impl Product {
    pub fn known(&self) -> Option<&[(Label, u64)]> {
        match self {
            Product::Known(v) => Some(v),
            Product::OutOfWindow => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTable {
    labels: Vec<String>,
    index: HashMap<String, Label>,
    unit: Label,
    dual: Vec<Label>,
    products: BTreeMap<(Label, Label), Product>,
}

fn ordered(a: Label, b: Label) -> (Label, Label) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl OracleTable {
    /// Builds a table from named parts. Labels are sorted; `dual` and
    /// `products` may list pairs in either order.
    pub fn from_parts(
        labels: Vec<String>,
        unit: &str,
        dual: &[(String, String)],
        products: Vec<((String, String), Option<Vec<(String, u64)>>)>,
    ) -> Result<Self> {
        let mut labels = labels;
        labels.sort();
        labels.dedup();
        let index: HashMap<String, Label> =
            labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let look = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::oracle("closure", format!("unknown label {s}")))
        };
        let unit = look(unit)?;
        let mut d = vec![usize::MAX; labels.len()];
        for (x, y) in dual {
            let (x, y) = (look(x)?, look(y)?);
            if d[x] != usize::MAX && d[x] != y {
                return Err(Error::oracle("dual involution", format!("{} has two duals", labels[x])));
            }
            d[x] = y;
        }
        let mut table = OracleTable {
            labels,
            index: index.clone(),
            unit,
            dual: d,
            products: BTreeMap::new(),
        };
        for ((a, b), p) in products {
            let key = ordered(look(&a)?, look(&b)?);
            let p = match p {
                None => Product::OutOfWindow,
                Some(terms) => {
                    let mut acc: BTreeMap<Label, u64> = BTreeMap::new();
                    for (z, m) in terms {
                        if m > 0 {
                            *acc.entry(look(&z)?).or_default() += m;
                        }
                    }
                    Product::Known(acc.into_iter().collect())
                }
            };
            table.insert_product(key, p)?;
        }
        Ok(table)
    }

    fn insert_product(&mut self, key: (Label, Label), p: Product) -> Result<()> {
        if let Some(old) = self.products.get(&key) {
            if *old != p {
                return Err(Error::oracle(
                    "symmetry",
                    format!("conflicting products for {} {}", self.labels[key.0], self.labels[key.1]),
                ));
            }
        }
        self.products.insert(key, p);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn name(&self, x: Label) -> &str {
        &self.labels[x]
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.index.get(name).copied()
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, x: Label) -> Label {
        self.dual[x]
    }

    pub fn product(&self, a: Label, b: Label) -> Option<&Product> {
        self.products.get(&ordered(a, b))
    }

    /// The in-window decomposition of `a ⊗ b`, if the table knows it.
    pub fn known(&self, a: Label, b: Label) -> Option<&[(Label, u64)]> {
        self.product(a, b).and_then(Product::known)
    }

    pub fn products(&self) -> impl Iterator<Item = ((Label, Label), &Product)> {
        self.products.iter().map(|(k, v)| (*k, v))
    }

    /// Replaces one product line; used by the mutation harness.
    pub fn set_product(&mut self, a: Label, b: Label, p: Product) {
        self.products.insert(ordered(a, b), p);
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("labels:");
        for l in &self.labels {
            s.push(' ');
            s.push_str(l);
        }
        s.push('\n');
        let _ = writeln!(s, "unit: {}", self.labels[self.unit]);
        for (x, &y) in self.dual.iter().enumerate() {
            if y != usize::MAX {
                let _ = writeln!(s, "dual: {} {}", self.labels[x], self.labels[y]);
            }
        }
        for (&(a, b), p) in &self.products {
            let _ = write!(s, "prod {} {} :", self.labels[a], self.labels[b]);
            match p {
                Product::OutOfWindow => s.push_str(" ?"),
                Product::Known(terms) => {
                    for (z, m) in terms {
                        let _ = write!(s, " {}*{}", self.labels[*z], m);
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    /// Parses the line-oriented text format; `origin` names the source in
    /// diagnostics.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, column: usize, message: String| Error::Parse {
            origin: origin.to_string(),
            line,
            column,
            message,
        };
        let mut labels: Option<Vec<String>> = None;
        let mut unit: Option<String> = None;
        let mut duals = Vec::new();
        let mut prods = Vec::new();
        // positions of label tokens, for diagnostics on unknown labels
        let mut positions: Vec<(String, usize, usize)> = Vec::new();

        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let tokens = tokenize(line);
            let (head, hcol) = tokens[0];
            let rest = &tokens[1..];
            match head {
                "labels:" => {
                    if labels.is_some() {
                        return Err(err(ln, hcol, "duplicate labels header".into()));
                    }
                    let mut v = Vec::new();
                    for &(t, c) in rest {
                        check_label(t).map_err(|m| err(ln, c, m))?;
                        if v.iter().any(|x: &String| x == t) {
                            return Err(err(ln, c, format!("duplicate label {t}")));
                        }
                        v.push(t.to_string());
                    }
                    labels = Some(v);
                }
                "unit:" => {
                    if rest.len() != 1 {
                        return Err(err(ln, hcol, "expected `unit: <label>`".into()));
                    }
                    if unit.is_some() {
                        return Err(err(ln, hcol, "duplicate unit header".into()));
                    }
                    unit = Some(rest[0].0.to_string());
                    positions.push((rest[0].0.to_string(), ln, rest[0].1));
                }
                "dual:" => {
                    if rest.len() != 2 {
                        return Err(err(ln, hcol, "expected `dual: <label> <label>`".into()));
                    }
                    for &(t, c) in rest {
                        positions.push((t.to_string(), ln, c));
                    }
                    duals.push((rest[0].0.to_string(), rest[1].0.to_string()));
                }
                "prod" => {
                    if rest.len() < 4 || rest[2].0 != ":" {
                        let col = rest.get(2).map_or(line.len() + 1, |t| t.1);
                        return Err(err(ln, col, "expected `prod <x> <y> : <terms>`".into()));
                    }
                    for &(t, c) in &rest[..2] {
                        positions.push((t.to_string(), ln, c));
                    }
                    let pair = (rest[0].0.to_string(), rest[1].0.to_string());
                    let body = &rest[3..];
                    if body.len() == 1 && body[0].0 == "?" {
                        prods.push((pair, None));
                        continue;
                    }
                    let mut terms = Vec::new();
                    for &(t, c) in body {
                        let (z, m) = t
                            .split_once('*')
                            .ok_or_else(|| err(ln, c, format!("expected `label*multiplicity`, found {t}")))?;
                        let m: u64 = m
                            .parse()
                            .ok()
                            .filter(|&m| m > 0)
                            .ok_or_else(|| err(ln, c + z.len() + 1, format!("bad multiplicity {m}")))?;
                        positions.push((z.to_string(), ln, c));
                        terms.push((z.to_string(), m));
                    }
                    prods.push((pair, Some(terms)));
                }
                other => return Err(err(ln, hcol, format!("unknown directive {other}"))),
            }
        }
        let eof = text.lines().count() + 1;
        let labels = labels.ok_or_else(|| err(eof, 1, "missing labels header".into()))?;
        let unit = unit.ok_or_else(|| err(eof, 1, "missing unit header".into()))?;
        for (t, ln, c) in &positions {
            if !labels.iter().any(|l| l == t) {
                return Err(err(*ln, *c, format!("unknown label {t}")));
            }
        }
        Self::from_parts(labels, &unit, &duals, prods)
    }
}

impl fmt::Display for OracleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn tokenize(line: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((&line[s..i], s + 1));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((&line[s..], s + 1));
    }
    out
}

fn check_label(t: &str) -> std::result::Result<(), String> {
    if !t.is_empty() && t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        Err(format!("invalid label {t:?}"))
    }
}

/// An oracle together with the hidden map from labels to the weights they
/// stand for. Only test harnesses look at `provenance`.
#[derive(Clone, Debug)]
pub struct MaterializedOracle {
    pub table: OracleTable,
    pub provenance: Vec<Weight>,
}

impl MaterializedOracle {
    pub fn weight(&self, x: Label) -> &Weight {
        &self.provenance[x]
    }

    pub fn label_of(&self, w: &Weight) -> Option<Label> {
        self.provenance.iter().position(|p| p == w)
    }

    /// Provenance as `label -> weight`, for reports.
    pub fn provenance_map(&self) -> BTreeMap<String, Weight> {
        self.provenance
            .iter()
            .enumerate()
            .map(|(i, w)| (self.table.name(i).to_string(), w.clone()))
            .collect()
    }
}

/// Window coordinates of a weight: normalized pairings with the simple
/// coroots, then values of the central functionals.
#[derive(Clone, Debug)]
pub struct Window {
    functionals: IntMatrix,
    scales: Vec<BigInt>,
    semisimple: usize,
}

impl Window {
    pub fn new(d: &RootDatum) -> Self {
        let mut functionals = Vec::new();
        let mut scales = Vec::new();
        for c in d.simple_coroots() {
            let g = c.coords().iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            functionals.push(c.coords().to_vec());
            scales.push(g);
        }
        for f in d.central_functionals() {
            functionals.push(f.into_coords());
            scales.push(BigInt::from(1));
        }
        Window {
            functionals,
            scales,
            semisimple: d.semisimple_rank(),
        }
    }

    pub fn coordinates(&self, w: &Weight) -> Vec<BigInt> {
        self.functionals
            .iter()
            .zip(&self.scales)
            .map(|(f, s)| w.coords().iter().zip(f).map(|(a, b)| a * b).sum::<BigInt>() / s)
            .collect()
    }

    pub fn contains(&self, d: &RootDatum, w: &Weight, bound: u64) -> bool {
        let b = BigInt::from(bound);
        d.is_dominant(w)
            && self.coordinates(w).iter().enumerate().all(|(i, c)| {
                if i < self.semisimple {
                    *c <= b
                } else {
                    -&b <= *c && *c <= b
                }
            })
    }

    /// All weights of the window, in a fixed order.
    pub fn enumerate(&self, d: &RootDatum, bound: u64) -> Vec<Weight> {
        let r = d.rank();
        let b = bound as i64;
        let ranges: Vec<(i64, i64)> = (0..r)
            .map(|i| if i < self.semisimple { (0, b) } else { (-b, b) })
            .collect();
        let mut out = Vec::new();
        let mut t = ranges.iter().map(|r| r.0).collect::<Vec<_>>();
        loop {
            let rhs: Vec<BigInt> = t
                .iter()
                .zip(&self.scales)
                .map(|(v, s)| BigInt::from(*v) * s)
                .collect();
            if let Some(sol) = linalg::solve_rational(&self.functionals, &rhs, r) {
                if sol.x.iter().all(|q| q.is_integer()) {
                    let w = Weight::new(sol.x.iter().map(|q| q.to_integer()).collect());
                    if d.is_dominant(&w) {
                        out.push(w);
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == r {
                    return out;
                }
                t[i] += 1;
                if t[i] <= ranges[i].1 {
                    break;
                }
                t[i] = ranges[i].0;
                i += 1;
            }
        }
    }
}

fn random_label(rng: &mut ChaCha8Rng) -> String {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    (0..8).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())] as char).collect()
}

/// Builds the oracle of all dominant weights in the window of size `bound`,
/// with opaque labels drawn from a generator seeded by `seed`.
pub fn materialize_oracle(d: &RootDatum, bound: u64, seed: u64) -> Result<MaterializedOracle> {
    let engine = CharEngine::new(d)?;
    materialize_with(&engine, bound, seed)
}

pub fn materialize_with(engine: &CharEngine, bound: u64, seed: u64) -> Result<MaterializedOracle> {
    let d = engine.datum();
    let window = Window::new(d);
    let weights = window.enumerate(d, bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names: Vec<String> = Vec::with_capacity(weights.len());
    while names.len() < weights.len() {
        let l = random_label(&mut rng);
        if !names.contains(&l) {
            names.push(l);
        }
    }
    // sort labels so file order says nothing about weights
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let provenance: Vec<Weight> = order.iter().map(|&i| weights[i].clone()).collect();
    let labels: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
    let index: HashMap<Weight, Label> =
        provenance.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();

    let n = provenance.len();
    let pairs: Vec<(Label, Label)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let products = pairs
        .par_iter()
        .map(|&(a, b)| {
            let p = engine.tensor_decompose(&provenance[a], &provenance[b])?;
            let mut terms = Vec::with_capacity(p.len());
            for (nu, m) in p.iter() {
                match index.get(nu) {
                    Some(&z) => terms.push((z, m.to_u64().expect("multiplicity fits in u64"))),
                    None => return Ok(((a, b), Product::OutOfWindow)),
                }
            }
            terms.sort();
            Ok(((a, b), Product::Known(terms)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;

    let dual = provenance
        .iter()
        .map(|w| {
            let dw = engine.dual_label(w)?;
            Ok(*index.get(&dw).expect("window is closed under duality"))
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = index[&Weight::zero(d.rank())];
    Ok(MaterializedOracle {
        table: OracleTable {
            labels,
            index: HashMap::new(),
            unit,
            dual,
            products,
        }
        .reindexed(),
        provenance,
    })
}

impl OracleTable {
    fn reindexed(mut self) -> Self {
        self.index = self.labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        self
    }
}

/// Checks the axioms a table must satisfy to come from an
/// irreducible-preserving presentation of a representation semiring.
pub fn validate_oracle(t: &OracleTable) -> Result<()> {
    let n = t.len();
    let name = |x: Label| t.name(x).to_string();
    let u = t.unit;

    // dual is a total involution fixing the unit
    for x in 0..n {
        let y = t.dual[x];
        if y == usize::MAX {
            return Err(Error::oracle("dual involution", format!("{} has no dual", name(x))));
        }
        if t.dual[y] != x {
            return Err(Error::oracle(
                "dual involution",
                format!("dual({}) = {} but dual({}) is not {}", name(x), name(y), name(y), name(x)),
            ));
        }
    }
    if t.dual[u] != u {
        return Err(Error::oracle("dual involution", format!("unit {} is not self-dual", name(u))));
    }
    // every unordered pair has a line
    for a in 0..n {
        for b in a..n {
            if t.product(a, b).is_none() {
                return Err(Error::oracle("completeness", format!("no product line for {} {}", name(a), name(b))));
            }
        }
    }
    for x in 0..n {
        match t.known(u, x) {
            Some(p) if p == [(x, 1)] => {}
            _ => {
                return Err(Error::oracle(
                    "unit",
                    format!("{} ⊗ {} is not {}", name(u), name(x), name(x)),
                ))
            }
        }
    }
    for a in 0..n {
        for b in a..n {
            let Some(p) = t.known(a, b) else { continue };
            if p.is_empty() {
                return Err(Error::oracle("nonzero products", format!("{} ⊗ {} is empty", name(a), name(b))));
            }
            let um = p.iter().find(|z| z.0 == u).map_or(0, |z| z.1);
            let is_dual = t.dual[a] == b;
            if is_dual && um != 1 {
                return Err(Error::oracle(
                    "dual pairing",
                    format!("unit appears {um} times in {} ⊗ {}", name(a), name(b)),
                ));
            }
            if !is_dual && um != 0 {
                return Err(Error::oracle(
                    "dual pairing",
                    format!("unit appears in {} ⊗ {} but they are not dual", name(a), name(b)),
                ));
            }
            if a == b && a != u && p == [(a, 1)] {
                return Err(Error::oracle("idempotent", format!("{} ⊗ {} = {}", name(a), name(a), name(a))));
            }
            // the dual of a product is the product of the duals
            if let Some(q) = t.known(t.dual[a], t.dual[b]) {
                let mut dp: Vec<(Label, u64)> = p.iter().map(|&(z, m)| (t.dual[z], m)).collect();
                dp.sort();
                if dp != q {
                    return Err(Error::oracle(
                        "dual compatibility",
                        format!("({} ⊗ {})* differs from {} ⊗ {}", name(a), name(b), name(t.dual[a]), name(t.dual[b])),
                    ));
                }
            }
        }
    }
    check_associativity(t)
}

fn expand(t: &OracleTable, left: &[(Label, u64)], z: Label) -> Option<BTreeMap<Label, u128>> {
    let mut acc = BTreeMap::new();
    for &(k, m) in left {
        for &(r, c) in t.known(k, z)? {
            *acc.entry(r).or_default() += m as u128 * c as u128;
        }
    }
    Some(acc)
}

fn check_associativity(t: &OracleTable) -> Result<()> {
    let n = t.len();
    let bad = (0..n).into_par_iter().find_map_any(|x| {
        for y in x..n {
            let Some(xy) = t.known(x, y) else { continue };
            for z in y..n {
                // (xy)z against x(yz) and (xz)y
                let Some(a) = expand(t, xy, z) else { continue };
                let others = [t.known(y, z).map(|yz| (yz, x)), t.known(x, z).map(|xz| (xz, y))];
                for (p, w) in others.into_iter().flatten() {
                    if let Some(b) = expand(t, p, w) {
                        if a != b {
                            return Some((x, y, z));
                        }
                    }
                }
            }
        }
        None
    });
    match bad {
        Some((x, y, z)) => Err(Error::oracle(
            "associativity",
            format!("({} ⊗ {}) ⊗ {} differs between bracketings", t.name(x), t.name(y), t.name(z)),
        )),
        None => Ok(()),
    }
}
