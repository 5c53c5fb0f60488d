//! Finite rational linear combinations of indices or words.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::index::MzvIndex;
use crate::rat::{rational_str, signed_rational_str, Rational};
use crate::word::{word_to_index, BinaryWord, WordError};

/// Term keys carry a weight so sums can assert weight homogeneity.
pub trait Weighted {
    fn term_weight(&self) -> u32;
}

impl Weighted for MzvIndex {
    fn term_weight(&self) -> u32 {
        self.weight()
    }
}

impl Weighted for BinaryWord {
    fn term_weight(&self) -> u32 {
        self.len() as u32
    }
}

/// A finite Q-linear combination; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalSum<K: Ord + Clone> {
    terms: BTreeMap<K, Rational>,
}

impl<K: Ord + Clone> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn singleton(key: K) -> Self {
        let mut s = Self::zero();
        s.add_term(key, Rational::from_integer(1.into()));
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Rational)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    /// Adds `coeff * key`, removing the entry if the total cancels.
    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
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

    pub fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        FormalSum {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * factor))
                .collect(),
        }
    }

    /// Sum of all coefficients (the "mass"; counts interleavings for
    /// shuffle/stuffle outputs of singletons).
    pub fn coefficient_mass(&self) -> Rational {
        let mut m = Rational::zero();
        for c in self.terms.values() {
            m += c;
        }
        m
    }

    pub fn map_keys<K2: Ord + Clone, F: Fn(&K) -> K2>(&self, f: F) -> FormalSum<K2> {
        let mut out = FormalSum::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone + Weighted> FormalSum<K> {
    /// The common weight of all terms, if the sum is weight-homogeneous
    /// and nonzero.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let w = it.next()?.term_weight();
        it.all(|k| k.term_weight() == w).then_some(w)
    }
}

impl FormalSum<BinaryWord> {
    /// Decodes every word term to its index; fails if any word ends in x0.
    pub fn decode(&self) -> Result<FormalSum<MzvIndex>, WordError> {
        let mut out = FormalSum::zero();
        for (w, c) in &self.terms {
            out.add_term(word_to_index(w)?, c.clone());
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> Add for FormalSum<K> {
    type Output = FormalSum<K>;
    fn add(mut self, rhs: FormalSum<K>) -> FormalSum<K> {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<K: Ord + Clone> Sub for FormalSum<K> {
    type Output = FormalSum<K>;
    fn sub(mut self, rhs: FormalSum<K>) -> FormalSum<K> {
        for (k, c) in rhs.terms {
            self.add_term(k, -c);
        }
        self
    }
}

impl<K: Ord + Clone> Neg for FormalSum<K> {
    type Output = FormalSum<K>;
    fn neg(self) -> FormalSum<K> {
        FormalSum {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Debug for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for FormalSum<K> {
    /// `+1*(2,3) +1*(3,2) +1*(5)`; `0` for the empty sum.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}*{}", signed_rational_str(c), k)?;
        }
        Ok(())
    }
}

impl<K: Ord + Clone + fmt::Display> FormalSum<K> {
    /// Rendering without leading `+` on the first term, for prose-like
    /// output: `(5) + (3,2) + (2,3)`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            use num_traits::One;
            use num_traits::Signed;
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    out.push_str("-");
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if !mag.is_one() {
                out.push_str(&format!("{}·", rational_str(&mag)));
            }
            out.push_str(&k.to_string());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn ix(parts: &[u32]) -> MzvIndex {
        MzvIndex::of(parts)
    }

    #[test]
    fn cancellation_drops_zero_coeffs() {
        let mut s = FormalSum::singleton(ix(&[2, 1]));
        s.add_term(ix(&[2, 1]), rat(-1, 1));
        assert!(s.is_zero());
    }

    #[test]
    fn arithmetic_and_homogeneity() {
        let a = FormalSum::singleton(ix(&[3]));
        let b = FormalSum::singleton(ix(&[2, 1]));
        let s = a.clone() + b.clone();
        assert_eq!(s.len(), 2);
        assert_eq!(s.homogeneous_weight(), Some(3));
        let mixed = s + FormalSum::singleton(ix(&[2]));
        assert_eq!(mixed.homogeneous_weight(), None);
        let d = a - b;
        assert_eq!(d.coeff(&ix(&[2, 1])), rat(-1, 1));
    }

    #[test]
    fn display_format() {
        let mut s = FormalSum::zero();
        s.add_term(ix(&[5]), rat(1, 1));
        s.add_term(ix(&[3, 2]), rat(-4, 3));
        assert_eq!(s.to_string(), "-4/3*(3,2) +1*(5)");
        assert_eq!(s.pretty(), "-4/3·(3,2) + (5)");
        assert_eq!(FormalSum::<MzvIndex>::zero().to_string(), "0");
    }
}
