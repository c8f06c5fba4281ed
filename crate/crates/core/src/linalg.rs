//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Reduced row echelon form over Q. Returns the reduced matrix and pivot columns.
pub fn rref(mut m: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

fn to_rational(a: &IntMatrix) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
        .collect()
}

pub fn rank(a: &IntMatrix) -> usize {
    rref(to_rational(a)).1.len()
}

/// Solution of `A x = b` over Q, if the system is consistent. Free variables
/// are set to zero; `unique` reports whether the solution is the only one.
#[derive(Debug, Clone)]
pub struct RationalSolution {
    pub x: Vec<BigRational>,
    pub unique: bool,
}

pub fn solve_rational(a: &IntMatrix, b: &[BigInt], cols: usize) -> Option<RationalSolution> {
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            row.iter()
                .chain(std::iter::once(bi))
                .map(|x| BigRational::from(x.clone()))
                .collect()
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red[r][cols].clone();
    }
    Some(RationalSolution {
        unique: pivots.len() == cols,
        x,
    })
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Smith normal form `P A Q = D` with `P`, `Q` unimodular and `D` diagonal,
/// each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub diagonal: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Nontrivial invariant factors; empty iff the cokernel is torsion-free.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith(a: &IntMatrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut d = a.clone();
    let mut p = identity(rows);
    let mut q = identity(cols);
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { p, q, diagonal };
            };
            d.swap(t, pi);
            p.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in q.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let f = &d[i][t] / &d[t][t];
                for j in t..cols {
                    let v = &f * &d[t][j];
                    d[i][j] -= v;
                }
                for j in 0..rows {
                    let v = &f * &p[t][j];
                    p[i][j] -= v;
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let f = &d[t][j] / &d[t][t];
                for i in t..rows {
                    let v = &f * &d[i][t];
                    d[i][j] -= v;
                }
                for i in 0..cols {
                    let v = &f * &q[i][t];
                    q[i][j] -= v;
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !d[i][j].is_multiple_of(&d[t][t]))
            });
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = d[i][j].clone();
                        d[t][j] += v;
                    }
                    for j in 0..rows {
                        let v = p[i][j].clone();
                        p[t][j] += v;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in p[t].iter_mut() {
                *x = -&*x;
            }
        }
        diagonal.push(d[t][t].clone());
    }
    Smith { p, q, diagonal }
}

/// All integer solutions of `A x = b`: a particular solution plus a basis of
/// the integer kernel. `None` when no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt], cols: usize) -> Option<(Vec<BigInt>, IntMatrix)> {
    let s = smith(a, cols);
    let c = mat_vec(&s.p, b);
    let mut y = vec![BigInt::zero(); cols];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank() {
            if !ci.is_multiple_of(&s.diagonal[i]) {
                return None;
            }
            y[i] = ci / &s.diagonal[i];
        } else if !ci.is_zero() {
            return None;
        }
    }
    let x = mat_vec(&s.q, &y);
    let kernel = (s.rank()..cols)
        .map(|k| s.q.iter().map(|row| row[k].clone()).collect())
        .collect();
    Some((x, kernel))
}

pub fn integer_kernel(a: &IntMatrix, cols: usize) -> IntMatrix {
    let zeros = vec![BigInt::zero(); a.len()];
    solve_integer(a, &zeros, cols).map(|(_, k)| k).unwrap_or_default()
}

/// Serializes a matrix as rows of integers (same encoding as weights).
pub fn serialize_matrix<S: serde::Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&crate::weight::Weight::new(row.clone()))?;
    }
    seq.end()
}
