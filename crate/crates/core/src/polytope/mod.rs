//! Exact convex geometry of Weyl orbits: hull containment, the three
//! equivalent descriptions of the dominance order, and the quantized
//! covering of dilated hulls by lattice sums.

mod cover;


use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::char_engine::CharEngine;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::root_datum::{form_value, RootDatum, WeylGroup};
use crate::weight::Weight;

pub use cover::{quantized_cover_check, quantized_cover_check_with_form, CoverReport, CoverVerdict};

/// `normal · x <= bound`, or `normal · x == bound` for an equality. The
/// normal is a primitive integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inequality {
    pub normal: Vec<BigInt>,
    pub bound: BigInt,
}

impl Inequality {
    fn value(&self, x: &[BigInt]) -> BigInt {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    fn value_rational(&self, x: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(x)
            .map(|(a, b)| BigRational::from(a.clone()) * b)
            .sum()
    }
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Calls `f` on every `k`-subset of `0..n`, in lexicographic order.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Convex hull of finitely many lattice points, as equalities cutting out
/// the affine span and one inequality per facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexHull {
    pub dimension: usize,
    pub equalities: Vec<Inequality>,
    pub facets: Vec<Inequality>,
}

impl ConvexHull {
    /// Facets by brute force over affinely independent subsets; meant for
    /// a few dozen points in rank at most four.
    pub fn new(points: &[Weight]) -> Result<Self> {
        let Some(p0) = points.first() else {
            return Err(Error::InvalidInput("convex hull of no points".into()));
        };
        let rank = p0.rank();
        let diffs: IntMatrix = points.iter().map(|p| (p - p0).into_coords()).collect();
        let mut basis: IntMatrix = Vec::new();
        for d in &diffs {
            let mut trial = basis.clone();
            trial.push(d.clone());
            if linalg::rank(&trial) > basis.len() {
                basis = trial;
            }
        }
        let k = basis.len();
        let equalities = if k == 0 {
            linalg::identity(rank)
        } else {
            linalg::integer_kernel(&basis, rank)
        }
        .into_iter()
        .map(|c| {
            let c = primitive(c);
            Inequality {
                bound: dot(&c, p0.coords()),
                normal: c,
            }
        })
        .collect();

        let mut facets = BTreeSet::new();
        if k > 0 {
            let coords: Vec<&[BigInt]> = points.iter().map(|p| p.coords()).collect();
            for_each_subset(points.len(), k, &mut |s| {
                let base = coords[s[0]];
                // normal in the span of the directions, orthogonal to the subset
                let m: IntMatrix = s[1..]
                    .iter()
                    .map(|&j| {
                        let e: Vec<BigInt> = coords[j].iter().zip(base).map(|(a, b)| a - b).collect();
                        basis.iter().map(|d| dot(d, &e)).collect()
                    })
                    .collect();
                let kernel = if m.is_empty() {
                    linalg::identity(k)
                } else {
                    linalg::integer_kernel(&m, k)
                };
                if kernel.len() != 1 {
                    return;
                }
                let mut a = vec![BigInt::zero(); rank];
                for (beta, d) in kernel[0].iter().zip(&basis) {
                    for (x, y) in a.iter_mut().zip(d) {
                        *x += beta * y;
                    }
                }
                let a = primitive(a);
                let b = dot(&a, base);
                let vals: Vec<BigInt> = coords.iter().map(|p| dot(&a, p)).collect();
                if vals.iter().all(|v| *v <= b) {
                    facets.insert(Inequality { normal: a, bound: b });
                } else if vals.iter().all(|v| *v >= b) {
                    facets.insert(Inequality {
                        normal: a.iter().map(|x| -x).collect(),
                        bound: -b,
                    });
                }
            });
        }
        Ok(ConvexHull {
            dimension: k,
            equalities,
            facets: facets.into_iter().collect(),
        })
    }

    pub fn contains(&self, x: &Weight) -> bool {
        self.contains_scaled(x, &BigInt::from(1))
    }

    /// Membership in the hull dilated by `n`.
    pub fn contains_scaled(&self, x: &Weight, n: &BigInt) -> bool {
        let c = x.coords();
        self.equalities.iter().all(|e| e.value(c) == n * &e.bound)
            && self.facets.iter().all(|f| f.value(c) <= n * &f.bound)
    }

    pub fn contains_rational(&self, x: &[BigRational]) -> bool {
        let b = |v: &BigInt| BigRational::from(v.clone());
        self.equalities.iter().all(|e| e.value_rational(x) == b(&e.bound))
            && self.facets.iter().all(|f| f.value_rational(x) <= b(&f.bound))
    }
}

/// `Conv(Wλ)` for a dominant `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitHull {
    pub vertices: BTreeSet<Weight>,
    pub hull: ConvexHull,
}

impl OrbitHull {
    pub fn new(d: &RootDatum, lambda: &Weight) -> Result<Self> {
        if !d.is_dominant(lambda) {
            return Err(Error::NotDominant(lambda.clone()));
        }
        let vertices = d.orbit(lambda);
        let pts: Vec<Weight> = vertices.iter().cloned().collect();
        let hull = ConvexHull::new(&pts)?;
        Ok(OrbitHull { vertices, hull })
    }

    pub fn contains(&self, x: &Weight) -> bool {
        self.hull.contains(x)
    }

    /// Every vertex satisfies every inequality, and each facet passes
    /// through some vertex.
    pub fn is_consistent(&self) -> bool {
        let ok = |f: &Inequality| {
            self.vertices.iter().all(|v| f.value(v.coords()) <= f.bound)
                && self.vertices.iter().any(|v| f.value(v.coords()) == f.bound)
        };
        self.hull.facets.iter().all(ok)
            && self
                .hull
                .equalities
                .iter()
                .all(|e| self.vertices.iter().all(|v| e.value(v.coords()) == e.bound))
    }

    /// The facet set is permuted by the Weyl group.
    pub fn is_w_stable(&self, w: &WeylGroup) -> bool {
        let facets: HashSet<&Inequality> = self.hull.facets.iter().collect();
        w.elements().iter().all(|m| {
            let rank = m.len();
            self.hull.facets.iter().all(|f| {
                // the image under M^-1 has normal M^T a; W is closed under inverses
                let normal: Vec<BigInt> = (0..rank).map(|j| (0..rank).map(|i| &m[i][j] * &f.normal[i]).sum()).collect();
                facets.contains(&Inequality {
                    normal,
                    bound: f.bound.clone(),
                })
            })
        })
    }
}

/// `Conv(Wμ) ⊂ Conv(Wλ)` for dominant `μ, λ`: every `wμ` lies below `λ`
/// in the rational dominance order. The span condition is part of that
/// test, since `λ − wμ` must be a combination of roots.
pub fn hull_contains_orbit(d: &RootDatum, mu: &Weight, lambda: &Weight) -> Result<bool> {
    for w in [mu, lambda] {
        if !d.is_dominant(w) {
            return Err(Error::NotDominant(w.clone()));
        }
    }
    Ok(d.orbit(mu).iter().all(|v| d.rational_dominance_leq(v, lambda)))
}

/// The three criteria for `μ <= λ`: dominance, hull containment, and the
/// tensor-factor test with the ball representation from the covering bound,
/// checked for `n <= n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderCriteria {
    pub dominance: bool,
    pub hull: bool,
    pub tensor: bool,
}

impl OrderCriteria {
    pub fn agree(&self) -> bool {
        self.dominance == self.hull && self.hull == self.tensor
    }
}

/// Squared radius `R² = 4 m² max ‖x‖²` of the covering ball for
/// `X = Wλ`, in the invariant form `gram`.
pub fn ball_radius_squared(d: &RootDatum, gram: &IntMatrix, lambda: &Weight) -> BigInt {
    let m = BigInt::from(d.orbit(lambda).len());
    // the form is W-invariant, so every orbit point has the norm of λ
    BigInt::from(4) * &m * &m * form_value(gram, lambda)
}

/// Dominant weights of norm at most `R`: the highest weights of the
/// certificate representation.
pub fn ball_weights(d: &RootDatum, gram: &IntMatrix, r_squared: &BigInt) -> Vec<Weight> {
    let rank = d.rank();
    // |x_i|² <= R² (G⁻¹)_ii bounds the box around the ellipsoid
    let inv = rational_inverse(gram);
    let bounds: Vec<i64> = (0..rank)
        .map(|i| {
            let q = BigRational::from(r_squared.clone()) * &inv[i][i];
            let cap = q.ceil().to_integer().sqrt() + 1;
            i64::try_from(cap).expect("ball fits in i64")
        })
        .collect();
    let mut out = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let w = Weight::from_i64s(&x);
        if d.is_dominant(&w) && form_value(gram, &w) <= *r_squared {
            out.push(w);
        }
        let mut i = 0;
        loop {
            if i == rank {
                out.sort();
                return out;
            }
            x[i] += 1;
            if x[i] <= bounds[i] {
                break;
            }
            x[i] = -bounds[i];
            i += 1;
        }
    }
}

fn rational_inverse(g: &IntMatrix) -> Vec<Vec<BigRational>> {
    let n = g.len();
    let aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from(g[i][j].clone())
                    } else if j - n == i {
                        BigRational::from(BigInt::from(1))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let (red, _) = linalg::rref(aug);
    red.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Irreducible factors of `V_μ^{⊗n}` for `n = 1..=n_max`.
fn power_supports(engine: &CharEngine, mu: &Weight, n_max: usize) -> Result<Vec<BTreeSet<Weight>>> {
    let mut out = vec![BTreeSet::from([mu.clone()])];
    for _ in 1..n_max {
        let mut next = BTreeSet::new();
        for chi in out.last().expect("nonempty") {
            next.extend(engine.tensor_decompose(chi, mu)?.labels().cloned());
        }
        out.push(next);
    }
    Ok(out)
}

/// Whether `V_χ` is a factor of `V_λ^{⊗n} ⊗ V_ν` for some `ν` in the ball.
/// By duality that holds iff some factor of `V_{λ*}^{⊗n} ⊗ V_χ` lies in the
/// ball. Cheap PRV chains are tried first; they only ever produce genuine
/// factors, so the full decomposition is needed only to say no.
fn reaches_ball(
    engine: &CharEngine,
    gram: &IntMatrix,
    r_squared: &BigInt,
    chi: &Weight,
    lambda_dual: &Weight,
    n: usize,
) -> Result<bool> {
    let d = engine.datum();
    let inside = |w: &Weight| form_value(gram, w) <= *r_squared;
    let orbit: Vec<Weight> = d.orbit(lambda_dual).into_iter().collect();

    let mut layer = BTreeSet::from([chi.clone()]);
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|s| orbit.iter().map(move |x| d.dominant_representative(&(s + x))))
            .collect();
        if layer.len() > 4096 {
            break;
        }
    }
    if layer.len() <= 4096 && layer.iter().any(inside) {
        return Ok(true);
    }
    let mut full = BTreeSet::from([chi.clone()]);
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for s in &full {
            next.extend(engine.tensor_decompose(s, lambda_dual)?.labels().cloned());
        }
        full = next;
    }
    Ok(full.iter().any(inside))
}

/// Criterion (c) alone, with the ball certificate built from `λ`.
pub fn tensor_criterion(engine: &CharEngine, mu: &Weight, lambda: &Weight, n_max: usize) -> Result<bool> {
    let d = engine.datum();
    let gram = d.invariant_form();
    let r2 = ball_radius_squared(d, &gram, lambda);
    let lambda_dual = engine.dual_label(lambda)?;
    for (k, support) in power_supports(engine, mu, n_max)?.iter().enumerate() {
        for chi in support {
            if !reaches_ball(engine, &gram, &r2, chi, &lambda_dual, k + 1)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn order_criteria_agree(engine: &CharEngine, mu: &Weight, lambda: &Weight, n_max: usize) -> Result<OrderCriteria> {
    let d = engine.datum();
    Ok(OrderCriteria {
        dominance: d.dominance_leq(mu, lambda),
        hull: hull_contains_orbit(d, mu, lambda)?,
        tensor: tensor_criterion(engine, mu, lambda, n_max)?,
    })
}
