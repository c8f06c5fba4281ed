use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::CharEngine;
use crate::weight::Weight;

/// Dominant weights below `lambda`. Every dominant `mu < lambda` is reached
/// from `lambda` through dominant weights by subtracting positive roots.
fn dominant_weights_below(engine: &CharEngine, lambda: &Weight) -> BTreeSet<Weight> {
    let d = &engine.datum;
    let mut seen = BTreeSet::from([lambda.clone()]);
    let mut queue = VecDeque::from([lambda.clone()]);
    while let Some(nu) = queue.pop_front() {
        for beta in d.positive_roots() {
            let next = &nu - beta;
            if d.is_dominant(&next) && !seen.contains(&next) {
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Freudenthal's recursion restricted to dominant weights:
///
/// `m(mu) ((lambda+rho)^2 - (mu+rho)^2) = 2 sum_{beta>0} sum_{k>=1} m(mu + k beta) (mu + k beta, beta)`
///
/// with multiplicities of non-dominant weights read off their dominant
/// representative.
pub(super) fn dominant_multiplicities(
    engine: &CharEngine,
    lambda: &Weight,
) -> BTreeMap<Weight, BigUint> {
    let d = &engine.datum;
    let mut order: Vec<(BigInt, Weight)> = dominant_weights_below(engine, lambda)
        .into_iter()
        .map(|mu| {
            let h = d.height(&(lambda - &mu)).expect("dominant weights below lie in the coset");
            (h, mu)
        })
        .collect();
    order.sort();

    let lam_plus = lambda + d.two_rho();
    let mut mult: BTreeMap<Weight, BigUint> = BTreeMap::new();
    for (h, mu) in order {
        if h.is_zero() {
            mult.insert(mu, BigUint::one());
            continue;
        }
        // (lambda+rho)^2 - (mu+rho)^2 = (lambda - mu, lambda + mu + 2 rho)
        let denom = engine.form(&(lambda - &mu), &(&lam_plus + &mu));
        let mut numer = BigInt::zero();
        for beta in d.positive_roots() {
            let mut x = &mu + beta;
            loop {
                let rep = d.dominant_representative(&x);
                let Some(m) = mult.get(&rep) else { break };
                numer += BigInt::from(m.clone()) * engine.form(&x, beta);
                x = &x + beta;
            }
        }
        numer *= 2;
        debug_assert!(denom.is_positive());
        let m = &numer / &denom;
        debug_assert!((&m * &denom) == numer, "Freudenthal division is exact");
        if m.is_positive() {
            mult.insert(mu, m.magnitude().clone());
        }
    }
    mult
}
