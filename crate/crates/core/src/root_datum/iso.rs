use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::RootDatum;
use crate::linalg::{self, IntMatrix};

/// An isomorphism of based root data, `d2 -> d1`.
#[derive(Debug, Clone, Serialize)]
pub struct Isomorphism {
    /// `X*(d2) -> X*(d1)`, acting on column vectors.
    #[serde(serialize_with = "linalg::serialize_matrix")]
    pub weight_map: IntMatrix,
    /// `X_*(d2) -> X_*(d1)`, the inverse transpose of `weight_map`.
    #[serde(serialize_with = "linalg::serialize_matrix")]
    pub coweight_map: IntMatrix,
    /// Simple root `i` of `d2` goes to simple root `permutation[i]` of `d1`.
    pub permutation: Vec<usize>,
}

// kernel coefficient search radius for the unimodularity condition
const SEARCH_RADIUS: i64 = 2;
const SEARCH_CAP: usize = 500_000;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

fn integer_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.len();
    let aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .cloned()
                .chain((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }))
                .map(BigRational::from)
                .collect()
        })
        .collect();
    let (red, pivots) = linalg::rref(aug);
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    red.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect()
        })
        .collect()
}

/// Enumerates coefficient vectors in `[-radius, radius]^k` by increasing sup-norm.
fn coefficient_vectors(k: usize, radius: i64) -> impl Iterator<Item = Vec<i64>> {
    (0..=radius).flat_map(move |r| {
        let side = (2 * r + 1) as usize;
        let total = side.checked_pow(k as u32).unwrap_or(usize::MAX);
        (0..total).filter_map(move |mut idx| {
            let mut v = Vec::with_capacity(k);
            for _ in 0..k {
                v.push((idx % side) as i64 - r);
                idx /= side;
            }
            (v.iter().map(|x| x.abs()).max().unwrap_or(0) == r).then_some(v)
        })
    })
}

/// Searches for a based isomorphism `d2 -> d1`: a unimodular lattice map
/// sending simple roots to simple roots (up to a Dynkin diagram
/// automorphism) whose inverse transpose does the same for coroots.
pub fn root_data_isomorphic(d1: &RootDatum, d2: &RootDatum) -> Option<Isomorphism> {
    let r = d1.rank();
    let s = d1.semisimple_rank();
    if r != d2.rank() || s != d2.semisimple_rank() {
        return None;
    }
    let a1 = d1.cartan_matrix();
    let a2 = d2.cartan_matrix();
    for sigma in permutations(s) {
        let diagram_ok = (0..s).all(|i| (0..s).all(|j| a1[sigma[i]][sigma[j]] == a2[i][j]));
        if !diagram_ok {
            continue;
        }
        // unknown M[k][l] at index k*r + l
        let mut rows: IntMatrix = Vec::new();
        let mut rhs: Vec<BigInt> = Vec::new();
        for i in 0..s {
            let src = &d2.simple_roots()[i];
            let dst = &d1.simple_roots()[sigma[i]];
            for k in 0..r {
                let mut row = vec![BigInt::zero(); r * r];
                for l in 0..r {
                    row[k * r + l] = src.coords()[l].clone();
                }
                rows.push(row);
                rhs.push(dst.coords()[k].clone());
            }
            let co_src = &d1.simple_coroots()[sigma[i]];
            let co_dst = &d2.simple_coroots()[i];
            for l in 0..r {
                let mut row = vec![BigInt::zero(); r * r];
                for k in 0..r {
                    row[k * r + l] = co_src.coords()[k].clone();
                }
                rows.push(row);
                rhs.push(co_dst.coords()[l].clone());
            }
        }
        let (particular, kernel) = if rows.is_empty() {
            (vec![BigInt::zero(); r * r], linalg::identity(r * r))
        } else {
            match linalg::solve_integer(&rows, &rhs, r * r) {
                Some(sol) => sol,
                None => continue,
            }
        };
        for coeffs in coefficient_vectors(kernel.len(), SEARCH_RADIUS).take(SEARCH_CAP) {
            let mut flat = particular.clone();
            for (c, kv) in coeffs.iter().zip(&kernel) {
                if *c != 0 {
                    for (f, x) in flat.iter_mut().zip(kv) {
                        *f += x * BigInt::from(*c);
                    }
                }
            }
            let m: IntMatrix = flat.chunks(r).map(<[BigInt]>::to_vec).collect();
            if linalg::determinant(&m).abs().is_one() {
                let inv = integer_inverse(&m).expect("unimodular matrices invert over Z");
                return Some(Isomorphism {
                    coweight_map: linalg::transpose(&inv, r),
                    weight_map: m,
                    permutation: sigma,
                });
            }
        }
    }
    None
}
