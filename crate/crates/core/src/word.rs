//! Binary words over {x0, x1} encoding indices as iterated-integral words.
//!
//! The index `(s_1, ..., s_l)` maps to `x0^{s_1-1} x1 ... x0^{s_l-1} x1`;
//! word length equals weight. Duality reverses the word and swaps letters.

use std::fmt;

use thiserror::Error;

use crate::index::{IndexError, MzvIndex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("word `{0}` does not end in x1, so it encodes no index")]
    NoTrailingX1(BinaryWord),
    #[error("word `{0}` is not admissible (must start x0 and end x1)")]
    NotAdmissible(BinaryWord),
    #[error("unrecognized letter `{0}` in word literal")]
    BadLetter(char),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    X0,
    X1,
}

impl Letter {
    pub fn swapped(self) -> Letter {
        match self {
            Letter::X0 => Letter::X1,
            Letter::X1 => Letter::X0,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinaryWord {
    letters: Vec<Letter>,
}

impl BinaryWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        BinaryWord { letters }
    }

    pub fn empty() -> Self {
        BinaryWord::default()
    }

    /// Parses `"01"` or `"x0x1"` (either digit or x-prefixed form).
    pub fn parse(s: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for c in s.trim().chars() {
            match c {
                '0' => letters.push(Letter::X0),
                '1' => letters.push(Letter::X1),
                'x' | ' ' => {}
                other => return Err(WordError::BadLetter(other)),
            }
        }
        Ok(BinaryWord { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn starts_with_x0(&self) -> bool {
        self.letters.first() == Some(&Letter::X0)
    }

    pub fn ends_with_x1(&self) -> bool {
        self.letters.last() == Some(&Letter::X1)
    }

    /// Admissible words start x0 and end x1: exactly the words of
    /// admissible indices.
    pub fn is_admissible(&self) -> bool {
        self.starts_with_x0() && self.ends_with_x1()
    }

    /// Reverse the word and swap x0 <-> x1 (an involution).
    pub fn tau(&self) -> BinaryWord {
        BinaryWord {
            letters: self.letters.iter().rev().map(|l| l.swapped()).collect(),
        }
    }

    pub fn prefix(&self, n: usize) -> BinaryWord {
        BinaryWord {
            letters: self.letters[..n].to_vec(),
        }
    }

    pub fn suffix(&self, from: usize) -> BinaryWord {
        BinaryWord {
            letters: self.letters[from..].to_vec(),
        }
    }

    /// Exponent list of the encoded multiple polylogarithm: part i is one
    /// plus the number of x0's before the i-th x1. Requires a trailing x1.
    pub fn exponents(&self) -> Result<Vec<u32>, WordError> {
        if !self.ends_with_x1() {
            return Err(WordError::NoTrailingX1(self.clone()));
        }
        let mut parts = Vec::new();
        let mut run = 0u32;
        for &l in &self.letters {
            match l {
                Letter::X0 => run += 1,
                Letter::X1 => {
                    parts.push(run + 1);
                    run = 0;
                }
            }
        }
        Ok(parts)
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for l in &self.letters {
            match l {
                Letter::X0 => write!(f, "x0")?,
                Letter::X1 => write!(f, "x1")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn index_to_word(index: &MzvIndex) -> BinaryWord {
    let mut letters = Vec::with_capacity(index.weight() as usize);
    for &p in index.parts() {
        letters.extend(std::iter::repeat(Letter::X0).take(p as usize - 1));
        letters.push(Letter::X1);
    }
    BinaryWord { letters }
}

pub fn word_to_index(word: &BinaryWord) -> Result<MzvIndex, WordError> {
    let parts = word.exponents()?;
    MzvIndex::new(parts).map_err(|_| WordError::NoTrailingX1(word.clone()))
}

/// MZV duality: tau on the index word. Involution on admissible indices,
/// preserving weight.
pub fn dual(index: &MzvIndex) -> Result<MzvIndex, IndexError> {
    index.ensure_admissible()?;
    let w = index_to_word(index).tau();
    Ok(word_to_index(&w).expect("tau of an admissible word ends in x1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::enumerate_admissible;

    fn ix(parts: &[u32]) -> MzvIndex {
        MzvIndex::of(parts)
    }

    fn w(s: &str) -> BinaryWord {
        BinaryWord::parse(s).unwrap()
    }

    #[test]
    fn encoding_examples() {
        assert_eq!(index_to_word(&ix(&[2])), w("01"));
        assert_eq!(index_to_word(&ix(&[2, 1])), w("011"));
        assert_eq!(index_to_word(&ix(&[3, 2])), w("00101"));
        assert_eq!(index_to_word(&ix(&[2])).len(), 2);
    }

    #[test]
    fn decoding() {
        assert_eq!(word_to_index(&w("01")).unwrap(), ix(&[2]));
        assert_eq!(word_to_index(&w("101")).unwrap(), ix(&[1, 2]));
        assert!(word_to_index(&w("010")).is_err());
        assert!(word_to_index(&BinaryWord::empty()).is_err());
    }

    #[test]
    fn duality_examples() {
        assert_eq!(dual(&ix(&[3])).unwrap(), ix(&[2, 1]));
        assert_eq!(dual(&ix(&[2, 2])).unwrap(), ix(&[2, 2]));
        assert_eq!(dual(&ix(&[4])).unwrap(), ix(&[2, 1, 1]));
        assert!(dual(&ix(&[1, 2])).is_err());
    }

    #[test]
    fn roundtrip_and_involution_exhaustive() {
        // all indices of weight <= 12 (admissible or not), via every word
        // ending in x1
        for weight in 1..=12usize {
            for bits in 0..(1u64 << (weight - 1)) {
                let mut letters: Vec<Letter> = (0..weight - 1)
                    .rev()
                    .map(|i| {
                        if bits >> i & 1 == 1 {
                            Letter::X1
                        } else {
                            Letter::X0
                        }
                    })
                    .collect();
                letters.push(Letter::X1);
                let word = BinaryWord::new(letters);
                let index = word_to_index(&word).unwrap();
                assert_eq!(index.weight() as usize, weight);
                assert_eq!(index_to_word(&index), word);
                assert_eq!(word.tau().tau(), word);
            }
        }
        // dual is a weight-preserving involution on admissible indices
        for weight in 2..=12 {
            for index in enumerate_admissible(weight).unwrap() {
                let d = dual(&index).unwrap();
                assert!(d.is_admissible());
                assert_eq!(d.weight(), weight);
                assert_eq!(dual(&d).unwrap(), index);
            }
        }
    }
}
