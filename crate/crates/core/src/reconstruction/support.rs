//! Supports of semiring elements as seen through a finite window: a set of
//! labels known to occur, and whether that set is the whole support.

use crate::oracle::{Label, OracleTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet {
    bits: Vec<u64>,
}

impl LabelSet {
    pub fn empty(n: usize) -> Self {
        LabelSet {
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn singleton(n: usize, x: Label) -> Self {
        let mut s = Self::empty(n);
        s.insert(x);
        s
    }

    pub fn insert(&mut self, x: Label) {
        self.bits[x / 64] |= 1 << (x % 64);
    }

    pub fn contains(&self, x: Label) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &LabelSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Label> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |k| w >> k & 1 == 1).map(move |k| i * 64 + k)
        })
    }
}

/// `known` is a subset of the true in-window support; when `complete` holds
/// it is the whole support and nothing lies outside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    pub known: LabelSet,
    pub complete: bool,
}

impl Support {
    pub fn label(n: usize, x: Label) -> Self {
        Support {
            known: LabelSet::singleton(n, x),
            complete: true,
        }
    }

    /// Support of the product of two elements with the given supports.
    /// Multiplicities are positive, so every factor of every known pair
    /// product really occurs.
    pub fn times(&self, other: &Support, t: &OracleTable) -> Support {
        let mut known = LabelSet::empty(t.len());
        let mut complete = self.complete && other.complete;
        for a in self.known.iter() {
            for b in other.known.iter() {
                match t.known(a, b) {
                    Some(p) => p.iter().for_each(|&(z, _)| known.insert(z)),
                    None => complete = false,
                }
            }
        }
        Support { known, complete }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitset_basics() {
        let mut s = LabelSet::empty(130);
        for x in [0, 63, 64, 129] {
            s.insert(x);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(s.len(), 4);
        assert!(s.contains(64) && !s.contains(65));
        let mut t = LabelSet::singleton(130, 5);
        assert!(!s.is_subset(&t));
        t.union_with(&s);
        assert!(s.is_subset(&t));
        assert!(LabelSet::empty(3).is_empty());
    }
}
