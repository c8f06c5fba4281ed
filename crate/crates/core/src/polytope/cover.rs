//! Lattice points of `Conv(nX)` written as an `n`-fold sum from `X` plus a
//! short remainder.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::ConvexHull;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::root_datum::form_value;
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverVerdict {
    Covered,
    /// A lattice point with no sum within `R`.
    Uncovered { point: Weight },
    /// The bounding box held more points than the budget allows.
    Skipped { box_points: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub n: usize,
    /// `R² = 4 m² max ‖x‖²`; squared so that it stays an integer.
    pub r_squared: BigInt,
    /// Lattice points of `Conv(nX)` examined.
    pub points: usize,
    /// Largest squared distance from a lattice point to its nearest sum.
    pub worst_residual: BigInt,
    pub verdict: CoverVerdict,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.verdict == CoverVerdict::Covered
    }
}

/// The covering check for the standard dot product on coordinates.
pub fn quantized_cover_check(x: &[Weight], n: usize, point_budget: usize) -> Result<CoverReport> {
    let rank = x.first().map_or(0, Weight::rank);
    quantized_cover_check_with_form(x, n, &linalg::identity(rank), point_budget)
}

/// The covering check with norms taken in the positive-definite form `gram`.
pub fn quantized_cover_check_with_form(
    x: &[Weight],
    n: usize,
    gram: &IntMatrix,
    point_budget: usize,
) -> Result<CoverReport> {
    let set: BTreeSet<Weight> = x.iter().cloned().collect();
    if set.is_empty() {
        return Err(Error::InvalidInput("the covering check needs a nonempty set".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("the dilation factor must be positive".into()));
    }
    let pts: Vec<Weight> = set.into_iter().collect();
    let rank = pts[0].rank();
    let m = BigInt::from(pts.len());
    let max_norm = pts.iter().map(|p| form_value(gram, p)).max().expect("nonempty");
    let r_squared = BigInt::from(4) * &m * &m * max_norm;
    let nn = BigInt::from(n);

    // bounding box of nX
    let lo: Vec<BigInt> = (0..rank).map(|i| pts.iter().map(|p| &p.coords()[i] * &nn).min().unwrap()).collect();
    let hi: Vec<BigInt> = (0..rank).map(|i| pts.iter().map(|p| &p.coords()[i] * &nn).max().unwrap()).collect();
    let box_points: BigInt = lo.iter().zip(&hi).map(|(a, b)| b - a + 1).product();
    if box_points > BigInt::from(point_budget) {
        return Ok(CoverReport {
            n,
            r_squared,
            points: 0,
            worst_residual: BigInt::from(0),
            verdict: CoverVerdict::Skipped { box_points },
        });
    }

    let hull = ConvexHull::new(&pts)?;
    let lattice = box_lattice_points(&lo, &hi)
        .into_iter()
        .filter(|p| hull.contains_scaled(p, &nn))
        .collect::<Vec<_>>();

    let mut sums: BTreeSet<Weight> = BTreeSet::from([Weight::zero(rank)]);
    for _ in 0..n {
        sums = sums.iter().flat_map(|s| pts.iter().map(move |p| s + p)).collect();
    }
    let sums: Vec<Weight> = sums.into_iter().collect();

    let residuals: Vec<BigInt> = lattice
        .par_iter()
        .map(|p| sums.iter().map(|s| form_value(gram, &(p - s))).min().expect("nonempty"))
        .collect();
    let worst_residual = residuals.iter().max().cloned().unwrap_or_default();
    let verdict = match residuals.iter().position(|r| *r > r_squared) {
        Some(i) => CoverVerdict::Uncovered {
            point: lattice[i].clone(),
        },
        None => CoverVerdict::Covered,
    };
    Ok(CoverReport {
        n,
        r_squared,
        points: lattice.len(),
        worst_residual,
        verdict,
    })
}

fn box_lattice_points(lo: &[BigInt], hi: &[BigInt]) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut x = lo.to_vec();
    loop {
        out.push(Weight::new(x.clone()));
        let mut i = 0;
        loop {
            if i == x.len() {
                return out;
            }
            x[i] += 1;
            if x[i] <= hi[i] {
                break;
            }
            x[i] = lo[i].clone();
            i += 1;
        }
    }
}
