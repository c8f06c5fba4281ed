//! Integer vectors in the character lattice and its dual.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// A vector of arbitrary-precision integers, read in a fixed basis of `X*`
/// (or of `X_*` when used as a coweight).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<BigInt>);

/// Coweights live in the dual lattice but share the representation.
pub type Coweight = Weight;

impl Weight {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Weight(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![BigInt::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[i] = BigInt::from(1);
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// The standard pairing `X_* x X* -> Z`.
    pub fn pair(&self, other: &Weight) -> BigInt {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, k: &BigInt) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    /// `self - k * other`, the shape of every reflection formula.
    pub fn sub_scaled(&self, k: &BigInt, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - k * b).collect())
    }

    /// Coordinates as machine integers, when they fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWeightError(pub String);

impl fmt::Display for ParseWeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse weight from {:?}", self.0)
    }
}

impl std::error::Error for ParseWeightError {}

impl FromStr for Weight {
    type Err = ParseWeightError;

    /// Comma-separated integers, e.g. `1,0` or `-3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Weight(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
            .map_err(|_| ParseWeightError(s.to_string()))
    }
}

// Coordinates serialize as JSON integers when they fit in an i64 and as
// decimal strings otherwise.
impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct WeightVisitor;

        impl<'de> Visitor<'de> for WeightVisitor {
            type Value = Weight;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of integers")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Weight, A::Error> {
                let mut coords = Vec::new();
                while let Some(c) = seq.next_element::<Coord>()? {
                    coords.push(match c {
                        Coord::Int(v) => BigInt::from(v),
                        Coord::Text(s) => s
                            .parse()
                            .map_err(|_| de::Error::custom(format!("bad integer {s:?}")))?,
                    });
                }
                Ok(Weight(coords))
            }
        }

        deserializer.deserialize_seq(WeightVisitor)
    }
}
