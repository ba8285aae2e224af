use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Factor, Monomial};
use crate::exactmath::Rational;

/// A finite formal linear combination with rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Combination<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for Combination<K> {
    fn default() -> Self {
        Combination {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(key: K) -> Self {
        Self::term(key, Rational::one())
    }

    pub fn term(key: K, coeff: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn scaled(&self, scale: &Rational) -> Self {
        if scale.is_zero() {
            return Self::zero();
        }
        Combination {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * scale))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(Rational::abs)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Applies a linear map defined on basis keys.
    pub fn map_linear<K2: Ord + Clone>(
        &self,
        mut f: impl FnMut(&K) -> Combination<K2>,
    ) -> Combination<K2> {
        let mut out = Combination::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k), c);
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord + fmt::Display> fmt::Display for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{k}")?;
        }
        Ok(())
    }
}

impl<K: Ord + fmt::Display> fmt::Debug for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A basis vector of `M(l) ⊗ Ω`: a monomial times the `top`-th basis vector
/// of the top space.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BasisVector {
    pub mono: Monomial,
    pub top: usize,
}

impl BasisVector {
    pub fn new(mono: Monomial, top: usize) -> Self {
        BasisVector { mono, top }
    }

    pub fn top(top: usize) -> Self {
        BasisVector {
            mono: Monomial::one(),
            top,
        }
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}>", self.mono, self.top)
    }
}

/// An element of `M(l)`.
pub type FockState = Combination<Monomial>;

/// An element of an induced module `M(l) ⊗ Ω`.
pub type ModuleState = Combination<BasisVector>;

impl FockState {
    pub fn vacuum() -> Self {
        Combination::basis(Monomial::one())
    }

    pub fn monomial(factors: &[(u32, u32, u32)]) -> Self {
        Combination::basis(Monomial::from_factors(
            factors
                .iter()
                .map(|&(i, j, n)| Factor::new(i, j, n))
                .collect(),
        ))
    }

    pub fn to_module(&self) -> ModuleState {
        self.iter()
            .map(|(m, c)| (BasisVector::new(m.clone(), 0), c.clone()))
            .collect()
    }
}

impl ModuleState {
    pub fn top_vector(top: usize) -> Self {
        Combination::basis(BasisVector::top(top))
    }

    /// Drops the top index (valid for one-dimensional top spaces).
    pub fn to_fock(&self) -> FockState {
        self.iter().map(|(b, c)| (b.mono.clone(), c.clone())).collect()
    }
}

/// One term of the JSON form of a state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJsonTerm {
    pub mono: Vec<[u32; 3]>,
    #[serde(default)]
    pub top: usize,
    pub coeff: Rational,
}

impl Serialize for ModuleState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<StateJsonTerm> = self
            .iter()
            .map(|(b, c)| StateJsonTerm {
                mono: b.mono.as_triples(),
                top: b.top,
                coeff: c.clone(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ModuleState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<StateJsonTerm>::deserialize(deserializer)?;
        let mut out = ModuleState::zero();
        for t in terms {
            let mut factors = Vec::with_capacity(t.mono.len());
            for [i, j, n] in t.mono {
                if i == 0 || n == 0 {
                    return Err(serde::de::Error::custom(format!(
                        "invalid factor [{i},{j},{n}]: color and mode must be >= 1"
                    )));
                }
                factors.push(Factor::new(i, j, n));
            }
            out.add_term(
                BasisVector::new(Monomial::from_factors(factors), t.top),
                t.coeff,
            );
        }
        Ok(out)
    }
}

impl Serialize for FockState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_module().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FockState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let m = ModuleState::deserialize(deserializer)?;
        if m.keys().any(|b| b.top != 0) {
            return Err(serde::de::Error::custom(
                "an element of M(l) must use top index 0",
            ));
        }
        Ok(m.to_fock())
    }
}
