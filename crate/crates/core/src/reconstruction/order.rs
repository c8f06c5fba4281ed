//! Step 1: the dominance order, certified by bounded tensor-factor tests.

use rayon::prelude::*;
use serde::Serialize;

use super::support::{LabelSet, Support};
use crate::error::{Error, Result};
use crate::oracle::{Label, OracleTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderVerdict {
    Leq,
    NotLeq,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Reflexive,
    /// `theta` is the known support of `(λ ⊗ λ*)^j` with `depth = 2j`
    /// label factors; the inclusion was checked for every `n <= n_max`.
    Theta { depth: usize, theta: LabelSet },
    /// Derived from `lower <= middle <= upper`.
    Transitive { middle: Label },
}

#[derive(Clone, Debug)]
pub struct RecoveredOrder {
    n: usize,
    relation: Vec<OrderVerdict>,
    certificates: Vec<Option<Certificate>>,
    pub n_max: usize,
    pub theta_depth: usize,
}

impl RecoveredOrder {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Verdict on `mu <= lambda`.
    pub fn verdict(&self, mu: Label, lambda: Label) -> OrderVerdict {
        self.relation[mu * self.n + lambda]
    }

    pub fn leq(&self, mu: Label, lambda: Label) -> bool {
        self.verdict(mu, lambda) == OrderVerdict::Leq
    }

    pub fn certificate(&self, mu: Label, lambda: Label) -> Option<&Certificate> {
        self.certificates[mu * self.n + lambda].as_ref()
    }

    pub fn count(&self, v: OrderVerdict) -> usize {
        self.relation.iter().filter(|&&r| r == v).count()
    }

    /// All certified pairs `(mu, lambda)`.
    pub fn leq_pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        (0..self.n * self.n)
            .filter(|&i| self.relation[i] == OrderVerdict::Leq)
            .map(|i| (i / self.n, i % self.n))
    }
}

pub(crate) struct Powers {
    /// `pow[x][n-1]` is the support of `x^n`.
    pub(crate) pow: Vec<Vec<Support>>,
    /// `consequent[x][k][n-1]` is the support of `x^n (x ⊗ x*)^k`, and
    /// `theta[x][k]` that of `(x ⊗ x*)^k`.
    pub(crate) consequent: Vec<Vec<Vec<Support>>>,
    pub(crate) theta: Vec<Vec<Support>>,
}

fn powers(t: &OracleTable, n_max: usize, theta_depth: usize) -> Powers {
    let n = t.len();
    let pow: Vec<Vec<Support>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let base = Support::label(n, x);
            let mut out = vec![base.clone()];
            for _ in 1..n_max {
                let next = out.last().unwrap().times(&base, t);
                out.push(next);
            }
            out
        })
        .collect();
    let (theta, consequent): (Vec<_>, Vec<_>) = (0..n)
        .into_par_iter()
        .map(|x| {
            let step = Support::label(n, x).times(&Support::label(n, t.dual(x)), t);
            let mut thetas = vec![Support::label(n, t.unit())];
            // depth counts label factors: (x ⊗ x*)^j has 2j of them
            for _ in 0..theta_depth / 2 {
                let next = thetas.last().unwrap().times(&step, t);
                thetas.push(next);
            }
            let cons = thetas
                .iter()
                .map(|th| pow[x].iter().map(|p| p.times(th, t)).collect())
                .collect();
            (thetas, cons)
        })
        .unzip();
    Powers {
        pow,
        consequent,
        theta,
    }
}

pub(crate) enum ThetaOutcome {
    Certified,
    /// A fully known consequent misses part of the antecedent: this θ
    /// fails, though a larger one might not.
    Refuted,
    Undetermined,
}

pub(crate) fn test_theta(antecedents: &[Support], consequents: &[Support]) -> ThetaOutcome {
    let mut certified = true;
    for (a, c) in antecedents.iter().zip(consequents) {
        let included = a.known.is_subset(&c.known);
        if !included && c.complete {
            return ThetaOutcome::Refuted;
        }
        certified &= a.complete && included;
    }
    if certified {
        ThetaOutcome::Certified
    } else {
        ThetaOutcome::Undetermined
    }
}

/// Checks a given θ, as a set of labels taken with multiplicity one, as a
/// certificate for `mu <= lambda`: the support of `mu^n` must lie in that of
/// `lambda^n ⊗ θ` for every `n <= n_max`, with every product involved inside
/// the window.
pub fn check_certificate(t: &OracleTable, mu: Label, lambda: Label, theta: &LabelSet, n_max: usize) -> bool {
    let n = t.len();
    let theta = Support {
        known: theta.clone(),
        complete: true,
    };
    let (mut a, mut c) = (Support::label(n, mu), Support::label(n, lambda).times(&theta, t));
    let (base_mu, base_lambda) = (a.clone(), Support::label(n, lambda));
    let mut antecedents = vec![a.clone()];
    let mut consequents = vec![c.clone()];
    for _ in 1..n_max {
        a = a.times(&base_mu, t);
        c = c.times(&base_lambda, t);
        antecedents.push(a.clone());
        consequents.push(c.clone());
    }
    matches!(test_theta(&antecedents, &consequents), ThetaOutcome::Certified)
}

/// Decides `mu <= lambda` for all label pairs, after checking the table.
pub fn recover_order(t: &OracleTable, n_max: usize, theta_depth: usize) -> Result<RecoveredOrder> {
    crate::oracle::validate_oracle(t)?;
    order_unchecked(t, n_max, theta_depth)
}

pub(crate) fn order_unchecked(t: &OracleTable, n_max: usize, theta_depth: usize) -> Result<RecoveredOrder> {
    if n_max == 0 {
        return Err(Error::stage("order", "n_max must be at least 1"));
    }
    let n = t.len();
    let p = powers(t, n_max, theta_depth);
    let decided: Vec<(OrderVerdict, Option<Certificate>)> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let (mu, lambda) = (i / n, i % n);
            if mu == lambda {
                return (OrderVerdict::Leq, Some(Certificate::Reflexive));
            }
            for (k, cons) in p.consequent[lambda].iter().enumerate() {
                if let ThetaOutcome::Certified = test_theta(&p.pow[mu], cons) {
                    let cert = Certificate::Theta {
                        depth: 2 * k,
                        theta: p.theta[lambda][k].known.clone(),
                    };
                    return (OrderVerdict::Leq, Some(cert));
                }
            }
            (OrderVerdict::Unknown, None)
        })
        .collect();
    let (mut relation, mut certificates): (Vec<_>, Vec<_>) = decided.into_iter().unzip();

    // transitive closure of the certified pairs
    for m in 0..n {
        for a in 0..n {
            if relation[a * n + m] != OrderVerdict::Leq {
                continue;
            }
            for b in 0..n {
                if relation[m * n + b] == OrderVerdict::Leq && relation[a * n + b] != OrderVerdict::Leq {
                    relation[a * n + b] = OrderVerdict::Leq;
                    certificates[a * n + b] = Some(Certificate::Transitive { middle: m });
                }
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if relation[a * n + b] == OrderVerdict::Leq && relation[b * n + a] == OrderVerdict::Leq {
                return Err(Error::stage(
                    "order",
                    format!("antisymmetry fails for {} and {}", t.name(a), t.name(b)),
                ));
            }
        }
    }
    // a strict certified relation refutes its reverse
    for a in 0..n {
        for b in 0..n {
            if a != b && relation[a * n + b] == OrderVerdict::Leq {
                relation[b * n + a] = OrderVerdict::NotLeq;
            }
        }
    }
    Ok(RecoveredOrder {
        n,
        relation,
        certificates,
        n_max,
        theta_depth,
    })
}
