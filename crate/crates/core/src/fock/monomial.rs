use std::fmt;

use serde::{Deserialize, Serialize};

/// A basis element `u^(i) t^j` of the current algebra: `color` is `i`
/// (1-based), `power` is `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenIndex {
    pub color: u32,
    pub power: u32,
}

impl GenIndex {
    pub fn new(color: u32, power: u32) -> Self {
        GenIndex { color, power }
    }
}

/// The mode `(u^(i) t^j)(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeOp {
    pub gen: GenIndex,
    pub mode: i64,
}

impl ModeOp {
    pub fn new(gen: GenIndex, mode: i64) -> Self {
        ModeOp { gen, mode }
    }
}

/// The variable `x_{ijn}`, i.e. the creation operator `(u^(i) t^j)(-n)`.
/// Ordered lexicographically on `(i, j, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub color: u32,
    pub power: u32,
    pub mode: u32,
}

impl Factor {
    pub fn new(color: u32, power: u32, mode: u32) -> Self {
        debug_assert!(mode >= 1, "creation variables have mode >= 1");
        Factor { color, power, mode }
    }

    pub fn gen(&self) -> GenIndex {
        GenIndex::new(self.color, self.power)
    }
}

/// A monomial in the `x_{ijn}`: a multiset of factors kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<Factor>,
}

impl Monomial {
    /// The empty monomial (the vacuum / top-space vector).
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn from_factors(mut factors: Vec<Factor>) -> Self {
        factors.sort_unstable();
        Monomial { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// Sum of the modes `n`: the weight above the top space.
    pub fn weight(&self) -> u64 {
        self.factors.iter().map(|f| f.mode as u64).sum()
    }

    /// Sum of the `t`-powers `j`: the N-weight.
    pub fn nweight(&self) -> u64 {
        self.factors.iter().map(|f| f.power as u64).sum()
    }

    pub fn multiplicity(&self, f: &Factor) -> usize {
        let start = self.factors.partition_point(|x| x < f);
        self.factors[start..].iter().take_while(|x| *x == f).count()
    }

    pub fn times(&self, f: Factor) -> Monomial {
        let mut factors = self.factors.clone();
        let at = factors.partition_point(|x| *x <= f);
        factors.insert(at, f);
        Monomial { factors }
    }

    /// Removes one copy of `f`, returning the quotient and the multiplicity
    /// `f` had.
    pub fn without(&self, f: &Factor) -> Option<(Monomial, usize)> {
        let start = self.factors.partition_point(|x| x < f);
        let mult = self.factors[start..].iter().take_while(|x| *x == f).count();
        if mult == 0 {
            return None;
        }
        let mut factors = self.factors.clone();
        factors.remove(start);
        Some((Monomial { factors }, mult))
    }

    /// The distinct modes `n` for which `x_{i j n}` divides this monomial.
    pub fn modes_of(&self, gen: GenIndex) -> impl Iterator<Item = u32> + '_ {
        let mut last = None;
        self.factors.iter().filter_map(move |f| {
            if f.gen() == gen && last != Some(f.mode) {
                last = Some(f.mode);
                Some(f.mode)
            } else {
                None
            }
        })
    }

    pub fn as_triples(&self) -> Vec<[u32; 3]> {
        self.factors
            .iter()
            .map(|f| [f.color, f.power, f.mode])
            .collect()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.factors.len() {
            let x = self.factors[i];
            let run = self.factors[i..].iter().take_while(|y| **y == x).count();
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x[{},{},{}]", x.color, x.power, x.mode)?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}
