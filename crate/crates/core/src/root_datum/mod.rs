//! Root data over `X* = Z^rank` with the coordinate dot product as pairing.

mod fixtures;
mod iso;
mod weyl;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::weight::{Coweight, Weight};

pub use fixtures::*;
pub use iso::{root_data_isomorphic, Isomorphism};
pub use weyl::{weyl_group, weyl_group_bounded, WeylGroup, DEFAULT_WEYL_BOUND};

/// The on-disk description of a root datum. Nothing is checked until it is
/// turned into a [`RootDatum`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatumData {
    pub rank: usize,
    pub simple_roots: Vec<Weight>,
    pub simple_coroots: Vec<Coweight>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// A validated root datum with a chosen base.
#[derive(Clone)]
pub struct RootDatum {
    data: RootDatumData,
    cartan: IntMatrix,
    /// Positive roots paired with their coroots.
    positive: Vec<(Weight, Coweight)>,
    two_rho: Weight,
    /// `coeffs(v) = coeff_num * v / coeff_den` expresses `v` in simple roots.
    coeff_num: IntMatrix,
    coeff_den: BigInt,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum")
            .field("name", &self.data.name)
            .field("rank", &self.data.rank)
            .field("simple_roots", &self.data.simple_roots)
            .field("simple_coroots", &self.data.simple_coroots)
            .finish()
    }
}

impl Serialize for RootDatum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.data.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootDatum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let data = RootDatumData::deserialize(d)?;
        RootDatum::new(data).map_err(serde::de::Error::custom)
    }
}

fn cartan_of(data: &RootDatumData) -> IntMatrix {
    data.simple_coroots
        .iter()
        .map(|c| data.simple_roots.iter().map(|a| c.pair(a)).collect())
        .collect()
}

/// Checks every root datum axiom and names the first one that fails.
pub fn validate_root_datum(data: &RootDatumData) -> Result<()> {
    if data.rank == 0 {
        return Err(Error::datum("lattice rank", "rank must be positive"));
    }
    if data.simple_roots.len() != data.simple_coroots.len() {
        return Err(Error::datum(
            "root/coroot count",
            format!(
                "{} simple roots but {} simple coroots",
                data.simple_roots.len(),
                data.simple_coroots.len()
            ),
        ));
    }
    for v in data.simple_roots.iter().chain(&data.simple_coroots) {
        if v.rank() != data.rank {
            return Err(Error::datum(
                "lattice rank",
                format!("vector {v:?} has length {}, expected {}", v.rank(), data.rank),
            ));
        }
    }
    let a = cartan_of(data);
    let n = a.len();
    let two = BigInt::from(2);
    for i in 0..n {
        if a[i][i] != two {
            return Err(Error::datum(
                "Cartan diagonal",
                format!("<coroot {i}, root {i}> = {}, expected 2", a[i][i]),
            ));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if a[i][j].is_positive() {
                return Err(Error::datum(
                    "generalized Cartan matrix",
                    format!("off-diagonal entry A[{i}][{j}] = {} is positive", a[i][j]),
                ));
            }
            if a[i][j].is_zero() != a[j][i].is_zero() {
                return Err(Error::datum(
                    "generalized Cartan matrix",
                    format!("A[{i}][{j}] and A[{j}][{i}] disagree on vanishing"),
                ));
            }
        }
    }
    let roots: IntMatrix = data.simple_roots.iter().map(|w| w.coords().to_vec()).collect();
    if linalg::rank(&roots) != n {
        return Err(Error::datum("linear independence", "simple roots are dependent"));
    }
    let coroots: IntMatrix = data.simple_coroots.iter().map(|w| w.coords().to_vec()).collect();
    if linalg::rank(&coroots) != n {
        return Err(Error::datum("linear independence", "simple coroots are dependent"));
    }
    // A generalized Cartan matrix is of finite type iff all principal minors
    // are positive; report the smallest failing index set.
    if n > 0 {
        let mut subsets: Vec<u64> = (1u64..(1u64 << n)).collect();
        subsets.sort_by_key(|m| (m.count_ones(), *m));
        for mask in subsets {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let sub: IntMatrix = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| a[i][j].clone()).collect())
                .collect();
            if !linalg::determinant(&sub).is_positive() {
                let rows: Vec<String> = sub
                    .iter()
                    .map(|r| {
                        let e: Vec<String> = r.iter().map(ToString::to_string).collect();
                        format!("[{}]", e.join(","))
                    })
                    .collect();
                return Err(Error::datum(
                    "finite type",
                    format!(
                        "Cartan submatrix on simple roots {idx:?} is not of finite type: [{}]",
                        rows.join(",")
                    ),
                ));
            }
        }
    }
    Ok(())
}

impl RootDatum {
    pub fn new(data: RootDatumData) -> Result<Self> {
        validate_root_datum(&data)?;
        let cartan = cartan_of(&data);
        let n = data.simple_roots.len();
        let rank = data.rank;

        // coefficient extraction: (S^T S)^{-1} S^T with S = [roots as columns]
        let s_rows: IntMatrix = data.simple_roots.iter().map(|w| w.coords().to_vec()).collect();
        let gram = linalg::mat_mul(&s_rows, &linalg::transpose(&s_rows, rank));
        let (coeff_num, coeff_den) = if n == 0 {
            (Vec::new(), BigInt::one())
        } else {
            let aug: Vec<Vec<BigRational>> = gram
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
            let (red, _) = linalg::rref(aug);
            let inv: Vec<Vec<BigRational>> = red.iter().map(|r| r[n..].to_vec()).collect();
            let left: Vec<Vec<BigRational>> = inv
                .iter()
                .map(|row| {
                    (0..rank)
                        .map(|c| {
                            row.iter()
                                .zip(&s_rows)
                                .map(|(x, s)| x * BigRational::from(s[c].clone()))
                                .fold(BigRational::zero(), |acc, t| acc + t)
                        })
                        .collect()
                })
                .collect();
            let den = left
                .iter()
                .flatten()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let num = left
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| x.numer() * (&den / x.denom()))
                        .collect()
                })
                .collect();
            (num, den)
        };

        let mut d = RootDatum {
            data,
            cartan,
            positive: Vec::new(),
            two_rho: Weight::zero(rank),
            coeff_num,
            coeff_den,
        };
        d.positive = d.compute_positive_roots();
        d.two_rho = d
            .positive
            .iter()
            .fold(Weight::zero(rank), |acc, (r, _)| &acc + r);
        Ok(d)
    }

    pub fn from_i64s(
        rank: usize,
        roots: &[&[i64]],
        coroots: &[&[i64]],
        name: Option<&str>,
    ) -> Result<Self> {
        RootDatum::new(RootDatumData {
            rank,
            simple_roots: roots.iter().map(|r| Weight::from_i64s(r)).collect(),
            simple_coroots: coroots.iter().map(|r| Weight::from_i64s(r)).collect(),
            name: name.map(str::to_string),
        })
    }

    pub fn data(&self) -> &RootDatumData {
        &self.data
    }

    pub fn rank(&self) -> usize {
        self.data.rank
    }

    /// Number of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.data.simple_roots.len()
    }

    pub fn name(&self) -> Option<&str> {
        self.data.name.as_deref()
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.data.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Coweight] {
        &self.data.simple_coroots
    }

    /// `A[i][j] = <coroot_i, root_j>`.
    pub fn cartan_matrix(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Weight> {
        self.positive.iter().map(|(r, _)| r)
    }

    pub fn positive_root_pairs(&self) -> &[(Weight, Coweight)] {
        &self.positive
    }

    /// Twice the half-sum of positive roots; always integral.
    pub fn two_rho(&self) -> &Weight {
        &self.two_rho
    }

    /// The datum with roots and coroots exchanged.
    pub fn dual(&self) -> RootDatum {
        RootDatum::new(RootDatumData {
            rank: self.rank(),
            simple_roots: self.data.simple_coroots.clone(),
            simple_coroots: self.data.simple_roots.clone(),
            name: self.data.name.as_ref().map(|n| format!("dual of {n}")),
        })
        .expect("the dual of a valid root datum is valid")
    }

    pub(crate) fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch {
                weight: w.clone(),
                expected: self.rank(),
                found: w.rank(),
            });
        }
        Ok(())
    }

    /// Simple reflection `s_i(x) = x - <coroot_i, x> root_i`.
    pub fn reflect(&self, i: usize, x: &Weight) -> Weight {
        let k = self.data.simple_coroots[i].pair(x);
        x.sub_scaled(&k, &self.data.simple_roots[i])
    }

    /// Contragredient simple reflection on `X_*`.
    pub fn reflect_coweight(&self, i: usize, y: &Coweight) -> Coweight {
        let k = y.pair(&self.data.simple_roots[i]);
        y.sub_scaled(&k, &self.data.simple_coroots[i])
    }

    fn compute_positive_roots(&self) -> Vec<(Weight, Coweight)> {
        let n = self.semisimple_rank();
        let mut seen: BTreeSet<Weight> = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue: VecDeque<(Weight, Coweight)> = (0..n)
            .map(|i| (self.data.simple_roots[i].clone(), self.data.simple_coroots[i].clone()))
            .collect();
        while let Some((r, c)) = queue.pop_front() {
            if !seen.insert(r.clone()) {
                continue;
            }
            for i in 0..n {
                if r == self.data.simple_roots[i] {
                    continue;
                }
                // s_i permutes the positive roots other than root_i
                let r2 = self.reflect(i, &r);
                if !seen.contains(&r2) {
                    queue.push_back((r2, self.reflect_coweight(i, &c)));
                }
            }
            out.push((r, c));
        }
        out.sort();
        out
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        self.data.simple_coroots.iter().all(|c| !c.pair(w).is_negative())
    }

    pub fn is_regular_dominant(&self, w: &Weight) -> bool {
        self.data.simple_coroots.iter().all(|c| c.pair(w).is_positive())
    }

    /// Coefficients of `v` in the basis of simple roots, over Q, when `v`
    /// lies in their span.
    pub fn root_coefficients(&self, v: &Weight) -> Option<Vec<BigRational>> {
        let num = linalg::mat_vec(&self.coeff_num, v.coords());
        let coeffs: Vec<BigRational> = num
            .into_iter()
            .map(|x| BigRational::new(x, self.coeff_den.clone()))
            .collect();
        let mut back = vec![BigRational::zero(); self.rank()];
        for (x, root) in coeffs.iter().zip(&self.data.simple_roots) {
            for (b, r) in back.iter_mut().zip(root.coords()) {
                *b += x * BigRational::from(r.clone());
            }
        }
        let in_span = back
            .iter()
            .zip(v.coords())
            .all(|(b, c)| *b == BigRational::from(c.clone()));
        in_span.then_some(coeffs)
    }

    /// Integer coefficients of `v` in simple roots, when `v` is in the root lattice.
    pub fn root_lattice_coefficients(&self, v: &Weight) -> Option<Vec<BigInt>> {
        self.root_coefficients(v)?
            .into_iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }

    /// `mu <= lambda` iff `lambda - mu` is a nonnegative integer combination of simple roots.
    pub fn dominance_leq(&self, mu: &Weight, lambda: &Weight) -> bool {
        match self.root_lattice_coefficients(&(lambda - mu)) {
            Some(c) => c.iter().all(|x| !x.is_negative()),
            None => false,
        }
    }

    /// The rational relaxation: nonnegative rational coefficients suffice.
    pub fn rational_dominance_leq(&self, mu: &Weight, lambda: &Weight) -> bool {
        match self.root_coefficients(&(lambda - mu)) {
            Some(c) => c.iter().all(|x| !x.is_negative()),
            None => false,
        }
    }

    pub fn same_root_coset(&self, a: &Weight, b: &Weight) -> bool {
        self.root_lattice_coefficients(&(a - b)).is_some()
    }

    /// Sum of the simple-root coefficients of `v` (the height, for `v` in the root lattice).
    pub fn height(&self, v: &Weight) -> Option<BigInt> {
        self.root_lattice_coefficients(v).map(|c| c.into_iter().sum())
    }

    pub fn dominant_representative(&self, w: &Weight) -> Weight {
        self.dominant_representative_with_sign(w).0
    }

    /// Dominant element of the orbit together with the parity of the number
    /// of simple reflections used to reach it.
    pub fn dominant_representative_with_sign(&self, w: &Weight) -> (Weight, bool) {
        let mut x = w.clone();
        let mut odd = false;
        loop {
            let neg = self
                .data
                .simple_coroots
                .iter()
                .position(|c| c.pair(&x).is_negative());
            match neg {
                Some(i) => {
                    x = self.reflect(i, &x);
                    odd = !odd;
                }
                None => return (x, odd),
            }
        }
    }

    /// The Weyl orbit of `w`, in lexicographic order.
    pub fn orbit(&self, w: &Weight) -> BTreeSet<Weight> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([w.clone()]);
        while let Some(x) = queue.pop_front() {
            if seen.contains(&x) {
                continue;
            }
            for i in 0..self.semisimple_rank() {
                let y = self.reflect(i, &x);
                if !seen.contains(&y) {
                    queue.push_back(y);
                }
            }
            seen.insert(x);
        }
        seen
    }

    /// Basis of the coweights vanishing on every root: coordinates along
    /// the central torus.
    pub fn central_functionals(&self) -> Vec<Coweight> {
        let roots: IntMatrix = self
            .data
            .simple_roots
            .iter()
            .map(|w| w.coords().to_vec())
            .collect();
        if roots.is_empty() {
            return (0..self.rank()).map(|i| Weight::unit(self.rank(), i)).collect();
        }
        linalg::integer_kernel(&roots, self.rank())
            .into_iter()
            .map(Weight::new)
            .collect()
    }

    /// A positive-definite, W-invariant integral quadratic form:
    /// `B(x, y) = sum_w (w x) . (w y)`.
    pub fn invariant_form(&self) -> IntMatrix {
        let w = weyl_group(self).expect("finite Weyl group of a valid datum");
        let r = self.rank();
        let mut g = vec![vec![BigInt::zero(); r]; r];
        for m in w.elements() {
            // (Mx).(My) = x^T (M^T M) y
            for i in 0..r {
                for j in 0..r {
                    let s: BigInt = (0..r).map(|k| &m[k][i] * &m[k][j]).sum();
                    g[i][j] += s;
                }
            }
        }
        g
    }
}

/// Quadratic form value `x^T G x`.
pub fn form_value(gram: &IntMatrix, x: &Weight) -> BigInt {
    let gx = linalg::mat_vec(gram, x.coords());
    x.coords().iter().zip(&gx).map(|(a, b)| a * b).sum()
}

/// Free-standing forms of the datum operations.
pub fn is_dominant(d: &RootDatum, w: &Weight) -> bool {
    d.is_dominant(w)
}

pub fn dominance_leq(d: &RootDatum, mu: &Weight, lambda: &Weight) -> bool {
    d.dominance_leq(mu, lambda)
}

pub fn orbit(d: &RootDatum, w: &Weight) -> BTreeSet<Weight> {
    d.orbit(w)
}

pub fn dominant_representative(d: &RootDatum, w: &Weight) -> Weight {
    d.dominant_representative(w)
}

#[cfg(test)]
mod tests;
