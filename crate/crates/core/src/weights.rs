use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// A nonempty set of weights `A ⊆ [1, n-1]`, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightSet {
    exponent: u64,
    residues: Vec<u64>,
}

impl fmt::Debug for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightSet(mod {}: {:?})", self.exponent, self.residues)
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl WeightSet {
    /// Sorts and deduplicates; rejects empty input and values outside `[1, n-1]`.
    pub fn new(exponent: u64, residues: impl IntoIterator<Item = u64>) -> Result<Self> {
        if exponent < 2 {
            return Err(Error::InvalidWeights(format!("exponent {exponent} < 2")));
        }
        let mut residues: Vec<u64> = residues.into_iter().collect();
        if let Some(&bad) = residues.iter().find(|&&a| a == 0 || a >= exponent) {
            return Err(Error::InvalidWeights(format!(
                "weight {bad} outside [1, {}]",
                exponent - 1
            )));
        }
        residues.sort_unstable();
        residues.dedup();
        if residues.is_empty() {
            return Err(Error::InvalidWeights("empty weight set".into()));
        }
        Ok(Self { exponent, residues })
    }

    /// `[1, n-1]`.
    pub fn full(exponent: u64) -> Result<Self> {
        Self::new(exponent, 1..exponent)
    }

    /// `{1, ..., r}`.
    pub fn interval(exponent: u64, r: u64) -> Result<Self> {
        Self::new(exponent, 1..=r)
    }

    /// `{±1, ..., ±r}`.
    pub fn symmetric(exponent: u64, r: u64) -> Result<Self> {
        Self::new(exponent, (1..=r).flat_map(|a| [a, exponent - a]))
    }

    /// The units of `Z_n`.
    pub fn units(exponent: u64) -> Result<Self> {
        Self::new(exponent, arith::units(exponent))
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, a: u64) -> bool {
        self.residues.binary_search(&a).is_ok()
    }

    /// `λA`; `λ` should be a unit so the image stays inside `[1, n-1]`.
    pub fn dilate(&self, lambda: u64) -> Result<Self> {
        Self::new(
            self.exponent,
            self.residues
                .iter()
                .map(|&a| arith::mul_mod(a, lambda, self.exponent)),
        )
    }

    pub fn is_subset(&self, other: &WeightSet) -> bool {
        self.exponent == other.exponent && self.residues.iter().all(|&a| other.contains(a))
    }
}

/// Parses `1,5-7,-1` style lists. Negative values `v` map to `n + v`; zero
/// (or anything that reduces to zero) is rejected.
pub fn parse_weight_list(spec: &str, exponent: u64) -> Result<WeightSet> {
    let n = exponent as i64;
    let map = |v: i64| -> Result<u64> {
        let r = if v < 0 { n + v } else { v };
        if r <= 0 || r >= n {
            return Err(Error::InvalidWeights(format!(
                "weight {v} does not map into [1, {}]",
                n - 1
            )));
        }
        Ok(r as u64)
    };
    let parse = |t: &str| -> Result<i64> {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::InvalidWeights(format!("cannot parse `{t}`")))
    };
    let mut out = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        // a range separator is any '-' that is not a leading sign
        let sep = token
            .char_indices()
            .skip(1)
            .find(|&(i, c)| c == '-' && !token[..i].ends_with(['-', ' ']))
            .map(|(i, _)| i);
        match sep {
            Some(i) => {
                let (lo, hi) = (parse(&token[..i])?, parse(&token[i + 1..])?);
                if lo > hi {
                    return Err(Error::InvalidWeights(format!("empty range `{token}`")));
                }
                for v in lo..=hi {
                    out.push(map(v)?);
                }
            }
            None => out.push(map(parse(token)?)?),
        }
    }
    WeightSet::new(exponent, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors() {
        let a = WeightSet::new(8, [7, 1, 7]).unwrap();
        assert_eq!(a.residues(), &[1, 7]);
        assert!(WeightSet::new(8, []).is_err());
        assert!(WeightSet::new(8, [0]).is_err());
        assert!(WeightSet::new(8, [8]).is_err());
        assert_eq!(WeightSet::symmetric(100, 2).unwrap().residues(), &[1, 2, 98, 99]);
        assert_eq!(WeightSet::units(12).unwrap().residues(), &[1, 5, 7, 11]);
        assert_eq!(WeightSet::new(7, [1, 2, 4]).unwrap().dilate(3).unwrap().residues(), &[3, 5, 6]);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_weight_list("1,5-7", 12).unwrap().residues(), &[1, 5, 6, 7]);
        assert_eq!(parse_weight_list("1,-1", 8).unwrap().residues(), &[1, 7]);
        assert_eq!(parse_weight_list("-2--1, 1-2", 100).unwrap().residues(), &[1, 2, 98, 99]);
        assert!(parse_weight_list("0", 8).is_err());
        assert!(parse_weight_list("-8", 8).is_err());
        assert!(parse_weight_list("3-1", 8).is_err());
        assert!(parse_weight_list("x", 8).is_err());
        assert!(parse_weight_list("", 8).is_err());
    }
}
