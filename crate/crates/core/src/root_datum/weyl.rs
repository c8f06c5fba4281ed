use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::RootDatum;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::weight::Weight;

pub const DEFAULT_WEYL_BOUND: usize = 10_000_000;

/// The Weyl group as explicit integer matrices acting on `X*` (column vectors).
#[derive(Debug, Clone)]
pub struct WeylGroup {
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
}

impl WeylGroup {
    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    /// Elements in breadth-first order from the identity; deterministic.
    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn apply(m: &IntMatrix, w: &Weight) -> Weight {
        Weight::new(linalg::mat_vec(m, w.coords()))
    }

    /// The element sending the dominant chamber to its negative.
    pub fn longest_element(&self, d: &RootDatum) -> &IntMatrix {
        let target = -d.two_rho();
        self.elements
            .iter()
            .find(|m| Self::apply(m, d.two_rho()) == target)
            .expect("finite Weyl group has a longest element")
    }

    /// Checks that every element maps the given root set onto itself.
    pub fn permutes(&self, roots: &[Weight]) -> bool {
        let set: HashSet<&Weight> = roots.iter().collect();
        self.elements
            .iter()
            .all(|m| roots.iter().all(|r| set.contains(&Self::apply(m, r))))
    }
}

fn reflection_matrix(root: &Weight, coroot: &Weight) -> IntMatrix {
    let r = root.rank();
    (0..r)
        .map(|k| {
            (0..r)
                .map(|l| {
                    let delta = if k == l { BigInt::one() } else { BigInt::zero() };
                    delta - &root.coords()[k] * &coroot.coords()[l]
                })
                .collect()
        })
        .collect()
}

pub fn weyl_group(d: &RootDatum) -> Result<WeylGroup> {
    weyl_group_bounded(d, DEFAULT_WEYL_BOUND)
}

/// Closure of the simple reflections, failing once more than `bound`
/// elements have been produced.
pub fn weyl_group_bounded(d: &RootDatum, bound: usize) -> Result<WeylGroup> {
    let generators: Vec<IntMatrix> = d
        .simple_roots()
        .iter()
        .zip(d.simple_coroots())
        .map(|(a, c)| reflection_matrix(a, c))
        .collect();
    let id = linalg::identity(d.rank());
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in &generators {
            let p = linalg::mat_mul(g, &m);
            if seen.insert(p.clone()) {
                if elements.len() >= bound {
                    return Err(Error::WeylBoundExceeded(bound));
                }
                elements.push(p.clone());
                queue.push_back(p);
            }
        }
    }
    Ok(WeylGroup {
        generators,
        elements,
    })
}
