//! MZV indices: compositions of positive integers, the arguments of zeta.
//!
//! An index `(s_1, ..., s_l)` has weight `s_1 + ... + s_l` and depth `l`.
//! It is admissible when `s_1 >= 2`, which is exactly the convergence
//! condition of the defining nested series.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on `enumerate_admissible` weight (2^18 indices at the cap).
pub const DEFAULT_WEIGHT_CAP: u32 = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("index must have at least one part")]
    Empty,
    #[error("index parts must be positive integers, got `{0}`")]
    BadPart(String),
    #[error("index {0} is not admissible (first part must be >= 2)")]
    NotAdmissible(MzvIndex),
    #[error("weight {weight} out of range {min}..={max}")]
    WeightOutOfRange { weight: u32, min: u32, max: u32 },
}

/// A composition `(s_1, ..., s_l)` of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MzvIndex {
    parts: Vec<u32>,
}

impl MzvIndex {
    pub fn new(parts: Vec<u32>) -> Result<Self, IndexError> {
        if parts.is_empty() {
            return Err(IndexError::Empty);
        }
        if let Some(&p) = parts.iter().find(|&&p| p == 0) {
            return Err(IndexError::BadPart(p.to_string()));
        }
        Ok(MzvIndex { parts })
    }

    /// Panicking constructor for literal indices in code and tests.
    pub fn of(parts: &[u32]) -> Self {
        Self::new(parts.to_vec()).expect("literal index must be valid")
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn is_admissible(&self) -> bool {
        self.parts[0] >= 2
    }

    pub fn ensure_admissible(&self) -> Result<(), IndexError> {
        if self.is_admissible() {
            Ok(())
        } else {
            Err(IndexError::NotAdmissible(self.clone()))
        }
    }

    /// `(s, s, ..., s)` with `k` repetitions.
    pub fn repeated(part: u32, k: usize) -> Self {
        Self::of(&vec![part; k])
    }

    /// Canonical machine form: comma-separated parts, e.g. `3,2,2`.
    pub fn canonical(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.canonical())
    }
}

impl fmt::Debug for MzvIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for MzvIndex {
    type Err = IndexError;

    /// Accepts `3,2,2` and `(3,2,2)`; rejects zeros, negatives, empty input.
    fn from_str(s: &str) -> Result<Self, IndexError> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        if s.trim().is_empty() {
            return Err(IndexError::Empty);
        }
        let parts = s
            .split(',')
            .map(|p| {
                let p = p.trim();
                p.parse::<u32>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| IndexError::BadPart(p.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        MzvIndex::new(parts)
    }
}

impl TryFrom<String> for MzvIndex {
    type Error = IndexError;
    fn try_from(s: String) -> Result<Self, IndexError> {
        s.parse()
    }
}

impl From<MzvIndex> for String {
    fn from(ix: MzvIndex) -> String {
        ix.canonical()
    }
}

/// All admissible indices of weight `w`, ordered by the integer value of
/// their binary word read as bits (x0 = 0, x1 = 1), ascending. This is the
/// column order of every relation matrix.
pub fn enumerate_admissible(w: u32) -> Result<Vec<MzvIndex>, IndexError> {
    enumerate_admissible_with_cap(w, DEFAULT_WEIGHT_CAP)
}

pub fn enumerate_admissible_with_cap(w: u32, cap: u32) -> Result<Vec<MzvIndex>, IndexError> {
    if !(2..=cap).contains(&w) {
        return Err(IndexError::WeightOutOfRange {
            weight: w,
            min: 2,
            max: cap,
        });
    }
    // The word of an admissible weight-w index is x0 <middle w-2 letters> x1;
    // counting the middle bits upward yields exactly the word-value order.
    let n = w as usize - 2;
    let mut out = Vec::with_capacity(1usize << n);
    for bits in 0u64..(1u64 << n) {
        let mut parts = Vec::new();
        let mut run = 1u32; // leading x0
        for i in (0..n).rev() {
            if bits >> i & 1 == 1 {
                parts.push(run + 1);
                run = 0;
            } else {
                run += 1;
            }
        }
        parts.push(run + 1); // trailing x1
        out.push(MzvIndex { parts });
    }
    Ok(out)
}

/// All compositions of `w` into parts 2 and 3 (the Hoffman set B_w),
/// in ascending lexicographic order of their parts.
pub fn enumerate_hoffman(w: u32) -> Result<Vec<MzvIndex>, IndexError> {
    if w < 2 {
        return Err(IndexError::WeightOutOfRange {
            weight: w,
            min: 2,
            max: u32::MAX,
        });
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    hoffman_rec(w, &mut stack, &mut out);
    Ok(out)
}

fn hoffman_rec(rem: u32, stack: &mut Vec<u32>, out: &mut Vec<MzvIndex>) {
    if rem == 0 {
        out.push(MzvIndex {
            parts: stack.clone(),
        });
        return;
    }
    for p in [2u32, 3] {
        if rem >= p && rem - p != 1 {
            stack.push(p);
            hoffman_rec(rem - p, stack, out);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(parts: &[u32]) -> MzvIndex {
        MzvIndex::of(parts)
    }

    #[test]
    fn weight_and_depth() {
        assert_eq!(ix(&[3, 2, 2]).weight(), 7);
        assert_eq!(ix(&[2]).weight(), 2);
        assert_eq!(ix(&[2, 3]).weight(), 5);
        assert_eq!(ix(&[3, 2, 2]).depth(), 3);
    }

    #[test]
    fn admissibility() {
        assert!(ix(&[2, 1]).is_admissible());
        assert!(!ix(&[1, 2]).is_admissible());
        assert!(ix(&[1]).ensure_admissible().is_err());
    }

    #[test]
    fn parse_syntax() {
        assert_eq!("3,2,2".parse::<MzvIndex>().unwrap(), ix(&[3, 2, 2]));
        assert_eq!("(2, 1)".parse::<MzvIndex>().unwrap(), ix(&[2, 1]));
        assert!("".parse::<MzvIndex>().is_err());
        assert!("0,2".parse::<MzvIndex>().is_err());
        assert!("-1".parse::<MzvIndex>().is_err());
        assert!("2,,3".parse::<MzvIndex>().is_err());
    }

    #[test]
    fn enumerate_small_weights() {
        assert_eq!(enumerate_admissible(2).unwrap(), vec![ix(&[2])]);
        assert_eq!(
            enumerate_admissible(3).unwrap(),
            vec![ix(&[3]), ix(&[2, 1])]
        );
        let w5 = enumerate_admissible(5).unwrap();
        assert_eq!(w5.len(), 8);
        // word-value order, spot checks
        assert_eq!(w5[0], ix(&[5]));
        assert_eq!(w5[2], ix(&[3, 2]));
        assert_eq!(w5[4], ix(&[2, 3]));
        assert_eq!(w5[7], ix(&[2, 1, 1, 1]));
    }

    /// Independent oracle: enumerate all compositions of w recursively,
    /// keep those with first part >= 2.
    fn brute_admissible(w: u32) -> Vec<Vec<u32>> {
        fn rec(rem: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if rem == 0 {
                out.push(acc.clone());
                return;
            }
            for p in 1..=rem {
                acc.push(p);
                rec(rem - p, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(w, &mut Vec::new(), &mut out);
        out.retain(|c| c[0] >= 2);
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for w in 2..=9 {
            let mut ours: Vec<Vec<u32>> = enumerate_admissible(w)
                .unwrap()
                .into_iter()
                .map(|i| i.parts)
                .collect();
            let mut brute = brute_admissible(w);
            ours.sort();
            brute.sort();
            assert_eq!(ours, brute, "weight {w}");
        }
    }

    #[test]
    fn counting_two_pow() {
        for w in 2..=16u32 {
            assert_eq!(
                enumerate_admissible(w).unwrap().len() as u64,
                1u64 << (w - 2)
            );
        }
        assert!(enumerate_admissible(21).is_err());
        assert!(enumerate_admissible(1).is_err());
    }

    #[test]
    fn hoffman_sets() {
        assert_eq!(
            enumerate_hoffman(5).unwrap(),
            vec![ix(&[2, 3]), ix(&[3, 2])]
        );
        assert_eq!(
            enumerate_hoffman(7).unwrap(),
            vec![ix(&[2, 2, 3]), ix(&[2, 3, 2]), ix(&[3, 2, 2])]
        );
        assert_eq!(enumerate_hoffman(4).unwrap(), vec![ix(&[2, 2])]);
        assert!(enumerate_hoffman(1).is_err());
    }
}
