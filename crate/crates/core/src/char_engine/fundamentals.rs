//! Irreducible classes as integer polynomials in the classes of the
//! generators of the dominant monoid.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{CharEngine, SemiringElement, VirtualElement};
use crate::error::{Error, Result};
use crate::linalg;
use crate::weight::Weight;

/// `sum c_e x^e` where `x_i` is the class of `generators[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalPolynomial {
    pub generators: Vec<Weight>,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl FundamentalPolynomial {
    /// Expands the polynomial in the representation ring.
    pub fn evaluate(&self, engine: &CharEngine) -> Result<VirtualElement> {
        let rank = engine.datum().rank();
        let mut out = VirtualElement::default();
        for (exps, c) in &self.terms {
            let m = monomial(engine, &self.generators, exps, rank)?;
            out.add_scaled(&m, c);
        }
        Ok(out)
    }
}

impl fmt::Display for FundamentalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let var = |i: usize| {
            if self.generators.len() <= 3 {
                ["x", "y", "z"][i].to_string()
            } else {
                format!("x{}", i + 1)
            }
        };
        // highest total degree first
        let mut terms: Vec<(&Vec<u32>, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (exps, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { var(i) } else { format!("{}^{e}", var(i)) })
                .collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("·"),
                (false, false) => format!("{mag}·{}", mono.join("·")),
            };
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

fn monomial(
    engine: &CharEngine,
    generators: &[Weight],
    exps: &[u32],
    rank: usize,
) -> Result<SemiringElement> {
    let mut acc = SemiringElement::irreducible(Weight::zero(rank));
    for (g, &e) in generators.iter().zip(exps) {
        for _ in 0..e {
            acc = engine.multiply(&acc, &SemiringElement::irreducible(g.clone()))?;
        }
    }
    Ok(acc)
}

/// Generators of the monoid of dominant weights (its Hilbert basis). They
/// sit in the box `0 <= <coroot_i, x> <= k_i`, with `k_i omega_i` the first
/// lattice point on the i-th edge of the dominant cone.
pub(crate) fn monoid_generators(engine: &CharEngine) -> Result<Vec<Weight>> {
    let d = engine.datum();
    let r = d.rank();
    let s = d.semisimple_rank();
    if s != r {
        return Err(Error::NotSemisimple(format!(
            "semisimple rank {s} is smaller than the lattice rank {r}"
        )));
    }
    let coroots: linalg::IntMatrix = d.simple_coroots().iter().map(|c| c.coords().to_vec()).collect();
    let solve = |p: &[BigInt]| -> Option<Weight> {
        let sol = linalg::solve_rational(&coroots, p, r)?;
        sol.x
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(Weight::new)
    };
    let mut bounds = Vec::with_capacity(s);
    for i in 0..s {
        let e: Vec<BigInt> = (0..s).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
        let omega = linalg::solve_rational(&coroots, &e, r).expect("coroots are independent");
        let k = omega
            .x
            .iter()
            .fold(BigInt::one(), |acc: BigInt, x: &BigRational| acc.lcm(x.denom()));
        bounds.push(u64::try_from(k).expect("small index"));
    }
    let mut points: Vec<(Vec<u64>, Weight)> = Vec::new();
    let total: u64 = bounds.iter().map(|b| b + 1).product();
    for mut idx in 0..total {
        let mut p = Vec::with_capacity(s);
        for b in &bounds {
            p.push(idx % (b + 1));
            idx /= b + 1;
        }
        if p.iter().all(|&x| x == 0) {
            continue;
        }
        let pb: Vec<BigInt> = p.iter().map(|&x| BigInt::from(x)).collect();
        if let Some(w) = solve(&pb) {
            points.push((p, w));
        }
    }
    let reducible = |p: &Vec<u64>| {
        points.iter().any(|(q, _)| {
            q != p
                && q.iter().zip(p).all(|(a, b)| a <= b)
                && points
                    .iter()
                    .any(|(r, _)| r.iter().zip(q).zip(p).all(|((r, q), p)| r + q == *p))
        })
    };
    let mut gens: Vec<(Vec<u64>, Weight)> = points
        .iter()
        .filter(|(p, _)| !reducible(p))
        .cloned()
        .collect();
    gens.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(gens.into_iter().map(|(_, w)| w).collect())
}

fn decompose(
    d: &crate::root_datum::RootDatum,
    gens: &[Weight],
    lambda: &Weight,
    memo: &mut HashMap<Weight, Option<Vec<u32>>>,
) -> Option<Vec<u32>> {
    if lambda.is_zero() {
        return Some(vec![0; gens.len()]);
    }
    if let Some(hit) = memo.get(lambda) {
        return hit.clone();
    }
    let mut found = None;
    for (i, g) in gens.iter().enumerate() {
        let rest = lambda - g;
        if d.is_dominant(&rest) {
            if let Some(mut e) = decompose(d, gens, &rest, memo) {
                e[i] += 1;
                found = Some(e);
                break;
            }
        }
    }
    memo.insert(lambda.clone(), found.clone());
    found
}

/// Greedy peel-off: repeatedly remove the leading term (maximal in the
/// dominance order, ties broken by the lexicographically largest weight)
/// using the monomial whose Cartan component it is.
pub(crate) fn express(engine: &CharEngine, lambda: &Weight) -> Result<FundamentalPolynomial> {
    let d = engine.datum();
    d.check_rank(lambda)?;
    if !d.is_dominant(lambda) {
        return Err(Error::NotDominant(lambda.clone()));
    }
    let gens = monoid_generators(engine)?;
    let mut memo = HashMap::new();
    let mut remaining = VirtualElement::default();
    remaining.add(lambda, &BigInt::one());
    let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    while !remaining.is_zero() {
        let keys: Vec<&Weight> = remaining.iter().map(|(w, _)| w).collect();
        let lead = keys
            .iter()
            .filter(|k| !keys.iter().any(|o| o != *k && d.dominance_leq(k, o)))
            .max()
            .map(|w| (*w).clone())
            .expect("nonzero element has a maximal term");
        let c = remaining.get(&lead);
        let exps = decompose(d, &gens, &lead, &mut memo).ok_or(Error::OutsideMonoid(lead.clone()))?;
        let m = monomial(engine, &gens, &exps, d.rank())?;
        remaining.add_scaled(&m, &-&c);
        let slot = terms.entry(exps.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            terms.remove(&exps);
        }
    }
    Ok(FundamentalPolynomial {
        generators: gens,
        terms,
    })
}
