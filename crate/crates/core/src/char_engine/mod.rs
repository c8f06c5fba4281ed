//! Formal characters and the representation semiring of a root datum.
//!
//! Weight multiplicities come from Freudenthal's recursion and tensor
//! products from the Brauer–Klimyk rule; both are exact. Results are cached
//! per engine behind a read-write lock, so an engine can be shared across
//! threads.

mod freudenthal;
mod fundamentals;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::root_datum::{weyl_group, RootDatum, WeylGroup};
use crate::weight::Weight;

pub use fundamentals::FundamentalPolynomial;

/// Weight multiplicities of a representation, keyed by weight in
/// lexicographic order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalCharacter {
    entries: BTreeMap<Weight, BigUint>,
}

impl FormalCharacter {
    pub fn multiplicity(&self, w: &Weight) -> BigUint {
        self.entries.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigUint)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total multiplicity mass, i.e. the dimension.
    pub fn dimension(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn add_weight(&mut self, w: Weight, m: &BigUint) {
        if !m.is_zero() {
            *self.entries.entry(w).or_default() += m;
        }
    }

    /// Character of the tensor product: convolution of weight multisets.
    pub fn product(&self, other: &FormalCharacter) -> FormalCharacter {
        let mut out = FormalCharacter::default();
        for (a, ma) in &self.entries {
            for (b, mb) in &other.entries {
                out.add_weight(a + b, &(ma * mb));
            }
        }
        out
    }
}

/// A class in the representation semiring: irreducibles (by dominant
/// highest weight) with positive multiplicities. The empty element is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SemiringElement {
    entries: BTreeMap<Weight, BigUint>,
}

impl SemiringElement {
    pub fn irreducible(w: Weight) -> Self {
        SemiringElement {
            entries: BTreeMap::from([(w, BigUint::one())]),
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Weight, u64)>) -> Self {
        let mut e = SemiringElement::default();
        for (w, m) in pairs {
            e.add(w, &BigUint::from(m));
        }
        e
    }

    pub fn add(&mut self, w: Weight, m: &BigUint) {
        if !m.is_zero() {
            *self.entries.entry(w).or_default() += m;
        }
    }

    pub fn sum(&self, other: &SemiringElement) -> SemiringElement {
        let mut out = self.clone();
        for (w, m) in &other.entries {
            out.add(w.clone(), m);
        }
        out
    }

    pub fn multiplicity(&self, w: &Weight) -> BigUint {
        self.entries.get(w).cloned().unwrap_or_default()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.entries.contains_key(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigUint)> {
        self.entries.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Weight> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lines `nu : mult`, highest weight first.
    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for (w, m) in self.entries.iter().rev() {
            s.push_str(&format!("{w} : {m}\n"));
        }
        s
    }
}

impl fmt::Display for SemiringElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .rev()
            .map(|(w, m)| format!("{w}:{m}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// A Z-linear combination of irreducible classes (an element of the
/// representation ring).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VirtualElement {
    entries: BTreeMap<Weight, BigInt>,
}

impl VirtualElement {
    pub fn add(&mut self, w: &Weight, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.entries.entry(w.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.entries.remove(w);
        }
    }

    pub fn add_scaled(&mut self, e: &SemiringElement, c: &BigInt) {
        for (w, m) in e.iter() {
            self.add(w, &(c * BigInt::from(m.clone())));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, w: &Weight) -> BigInt {
        self.entries.get(w).cloned().unwrap_or_default()
    }

    /// The semiring element, when every coefficient is nonnegative.
    pub fn to_semiring(&self) -> Option<SemiringElement> {
        let mut out = SemiringElement::default();
        for (w, c) in &self.entries {
            if c.is_negative() {
                return None;
            }
            out.add(w.clone(), &c.magnitude().clone());
        }
        Some(out)
    }
}

impl From<&SemiringElement> for VirtualElement {
    fn from(e: &SemiringElement) -> Self {
        let mut v = VirtualElement::default();
        v.add_scaled(e, &BigInt::one());
        v
    }
}

/// Character computations for one root datum, with memoization.
pub struct CharEngine {
    datum: RootDatum,
    weyl: WeylGroup,
    /// coroots of all positive roots, for the invariant form
    pos_coroots: Vec<Weight>,
    characters: RwLock<HashMap<Weight, Arc<FormalCharacter>>>,
    dominant_mults: RwLock<HashMap<Weight, Arc<BTreeMap<Weight, BigUint>>>>,
    products: RwLock<HashMap<(Weight, Weight), Arc<SemiringElement>>>,
}

impl CharEngine {
    pub fn new(datum: &RootDatum) -> Result<Self> {
        let weyl = weyl_group(datum)?;
        Ok(CharEngine {
            pos_coroots: datum
                .positive_root_pairs()
                .iter()
                .map(|(_, c)| c.clone())
                .collect(),
            datum: datum.clone(),
            weyl,
            characters: RwLock::default(),
            dominant_mults: RwLock::default(),
            products: RwLock::default(),
        })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn weyl_group(&self) -> &WeylGroup {
        &self.weyl
    }

    fn require_dominant(&self, w: &Weight) -> Result<()> {
        self.datum.check_rank(w)?;
        if !self.datum.is_dominant(w) {
            return Err(Error::NotDominant(w.clone()));
        }
        Ok(())
    }

    /// W-invariant form `(x, y) = sum over positive coroots of <c,x><c,y>`.
    pub(crate) fn form(&self, x: &Weight, y: &Weight) -> BigInt {
        self.pos_coroots.iter().map(|c| c.pair(x) * c.pair(y)).sum()
    }

    /// Multiplicities of the dominant weights of `V_lambda`.
    pub fn dominant_multiplicities(
        &self,
        lambda: &Weight,
    ) -> Result<Arc<BTreeMap<Weight, BigUint>>> {
        self.require_dominant(lambda)?;
        if let Some(m) = self.dominant_mults.read().unwrap().get(lambda) {
            return Ok(m.clone());
        }
        let m = Arc::new(freudenthal::dominant_multiplicities(self, lambda));
        self.dominant_mults
            .write()
            .unwrap()
            .insert(lambda.clone(), m.clone());
        Ok(m)
    }

    /// Full weight multiset of the irreducible representation `V_lambda`.
    pub fn irreducible_character(&self, lambda: &Weight) -> Result<Arc<FormalCharacter>> {
        self.require_dominant(lambda)?;
        if let Some(c) = self.characters.read().unwrap().get(lambda) {
            return Ok(c.clone());
        }
        let dom = self.dominant_multiplicities(lambda)?;
        let mut ch = FormalCharacter::default();
        for (mu, m) in dom.iter() {
            for x in self.datum.orbit(mu) {
                ch.add_weight(x, m);
            }
        }
        let ch = Arc::new(ch);
        self.characters
            .write()
            .unwrap()
            .insert(lambda.clone(), ch.clone());
        Ok(ch)
    }

    /// Weyl dimension formula.
    pub fn dimension(&self, lambda: &Weight) -> Result<BigUint> {
        self.require_dominant(lambda)?;
        let shifted = &lambda.scale(&BigInt::from(2)) + self.datum.two_rho();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for c in &self.pos_coroots {
            num *= c.pair(&shifted);
            den *= c.pair(self.datum.two_rho());
        }
        Ok((num / den).magnitude().clone())
    }

    /// Decomposition of `V_lambda (x) V_mu` into irreducibles.
    pub fn tensor_decompose(&self, lambda: &Weight, mu: &Weight) -> Result<Arc<SemiringElement>> {
        self.require_dominant(lambda)?;
        self.require_dominant(mu)?;
        let key = if lambda <= mu {
            (lambda.clone(), mu.clone())
        } else {
            (mu.clone(), lambda.clone())
        };
        if let Some(p) = self.products.read().unwrap().get(&key) {
            return Ok(p.clone());
        }
        // expand the factor with fewer distinct weights
        let (a, b) = if self.dominant_multiplicities(&key.0)?.len()
            <= self.dominant_multiplicities(&key.1)?.len()
        {
            (&key.1, &key.0)
        } else {
            (&key.0, &key.1)
        };
        let result = Arc::new(self.brauer_klimyk(a, b)?);
        self.products.write().unwrap().insert(key, result.clone());
        Ok(result)
    }

    /// `V_high (x) V_expand = sum over weights xi of V_expand of
    /// sign(w) V_{w(high + xi + rho) - rho}`, computed with doubled weights
    /// so that `rho` stays integral.
    fn brauer_klimyk(&self, high: &Weight, expand: &Weight) -> Result<SemiringElement> {
        let two = BigInt::from(2);
        let two_rho = self.datum.two_rho();
        let base = &high.scale(&two) + two_rho;
        let dom = self.dominant_multiplicities(expand)?;
        let mut acc: BTreeMap<Weight, BigInt> = BTreeMap::new();
        for (mu, m) in dom.iter() {
            let m = BigInt::from(m.clone());
            for xi in self.datum.orbit(mu) {
                let v = &base + &xi.scale(&two);
                let (d, odd) = self.datum.dominant_representative_with_sign(&v);
                if !self.datum.is_regular_dominant(&d) {
                    continue;
                }
                let nu = Weight::new(
                    (&d - two_rho)
                        .into_coords()
                        .into_iter()
                        .map(|c| c / &two)
                        .collect(),
                );
                let slot = acc.entry(nu).or_default();
                if odd {
                    *slot -= &m;
                } else {
                    *slot += &m;
                }
            }
        }
        let mut out = SemiringElement::default();
        for (nu, c) in acc {
            match c.sign() {
                Sign::Plus => out.add(nu, c.magnitude()),
                Sign::NoSign => {}
                Sign::Minus => unreachable!("negative tensor multiplicity for {nu:?}"),
            }
        }
        Ok(out)
    }

    /// Product in the semiring, extended bilinearly.
    pub fn multiply(&self, x: &SemiringElement, y: &SemiringElement) -> Result<SemiringElement> {
        let mut out = SemiringElement::default();
        for (a, ma) in x.iter() {
            for (b, mb) in y.iter() {
                let p = self.tensor_decompose(a, b)?;
                let scale = ma * mb;
                for (nu, m) in p.iter() {
                    out.add(nu.clone(), &(m * &scale));
                }
            }
        }
        Ok(out)
    }

    /// Character of a semiring element.
    pub fn character_of(&self, x: &SemiringElement) -> Result<FormalCharacter> {
        let mut out = FormalCharacter::default();
        for (nu, m) in x.iter() {
            for (w, k) in self.irreducible_character(nu)?.iter() {
                out.add_weight(w.clone(), &(k * m));
            }
        }
        Ok(out)
    }

    /// The components `dom(lambda + w mu)` predicted by the PRV rule.
    pub fn prv_components(&self, lambda: &Weight, mu: &Weight) -> Result<BTreeSet<Weight>> {
        self.require_dominant(lambda)?;
        self.require_dominant(mu)?;
        Ok(self
            .datum
            .orbit(mu)
            .iter()
            .map(|x| self.datum.dominant_representative(&(lambda + x)))
            .collect())
    }

    /// Highest weight of the dual representation, `-w0 lambda`.
    pub fn dual_label(&self, lambda: &Weight) -> Result<Weight> {
        self.require_dominant(lambda)?;
        let w0 = self.weyl.longest_element(&self.datum);
        Ok(-&WeylGroup::apply(w0, lambda))
    }

    pub fn express_in_fundamentals(&self, lambda: &Weight) -> Result<FundamentalPolynomial> {
        fundamentals::express(self, lambda)
    }

    /// Hilbert basis of the dominant monoid; semisimple data only.
    pub fn dominant_generators(&self) -> Result<Vec<Weight>> {
        fundamentals::monoid_generators(self)
    }
}

pub fn irreducible_character(d: &RootDatum, lambda: &Weight) -> Result<FormalCharacter> {
    Ok((*CharEngine::new(d)?.irreducible_character(lambda)?).clone())
}

pub fn dimension(d: &RootDatum, lambda: &Weight) -> Result<BigUint> {
    CharEngine::new(d)?.dimension(lambda)
}

pub fn tensor_decompose(d: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<SemiringElement> {
    Ok((*CharEngine::new(d)?.tensor_decompose(lambda, mu)?).clone())
}

pub fn prv_components(d: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<BTreeSet<Weight>> {
    CharEngine::new(d)?.prv_components(lambda, mu)
}

pub fn dual_label(d: &RootDatum, lambda: &Weight) -> Result<Weight> {
    CharEngine::new(d)?.dual_label(lambda)
}

pub fn express_in_fundamentals(d: &RootDatum, lambda: &Weight) -> Result<FundamentalPolynomial> {
    CharEngine::new(d)?.express_in_fundamentals(lambda)
}
