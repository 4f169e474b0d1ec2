//! Digit-restricted (Moran) sets `E = {x : a_j(x) ∈ allowed(j) for all j}`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qtilde::ColumnSource;

/// Allowed digits at one rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DigitSet {
    /// Every digit of the column.
    All,
    /// An explicit sorted, deduplicated subset.
    Only(Vec<usize>),
}

impl DigitSet {
    pub fn only(mut digits: Vec<usize>) -> Self {
        digits.sort_unstable();
        digits.dedup();
        DigitSet::Only(digits)
    }

    pub fn digits(&self, n: usize) -> Vec<usize> {
        match self {
            DigitSet::All => (0..n).collect(),
            DigitSet::Only(d) => d.clone(),
        }
    }

    pub fn count(&self, n: usize) -> usize {
        match self {
            DigitSet::All => n,
            DigitSet::Only(d) => d.len(),
        }
    }

    pub fn contains(&self, digit: usize) -> bool {
        match self {
            DigitSet::All => true,
            DigitSet::Only(d) => d.binary_search(&digit).is_ok(),
        }
    }

    /// Adds `digit` to the set (a no-op for [`DigitSet::All`]).
    pub fn with(&self, digit: usize) -> Self {
        match self {
            DigitSet::All => DigitSet::All,
            DigitSet::Only(d) => {
                let mut d = d.clone();
                d.push(digit);
                DigitSet::only(d)
            }
        }
    }
}

impl Serialize for DigitSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DigitSet::All => s.serialize_str("all"),
            DigitSet::Only(d) => d.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for DigitSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Word(String),
            List(Vec<usize>),
        }
        match Repr::deserialize(d)? {
            Repr::Word(w) if w == "all" => Ok(DigitSet::All),
            Repr::Word(w) => Err(serde::de::Error::custom(format!("expected \"all\" or a digit list, got {w:?}"))),
            Repr::List(l) => Ok(DigitSet::only(l)),
        }
    }
}

/// Per-rank allowed digit sets: an explicit prefix followed by a periodic tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoranSpec {
    #[serde(default)]
    pub allowed_prefix: Vec<DigitSet>,
    pub allowed_period: Vec<DigitSet>,
}

impl MoranSpec {
    /// No restriction at any rank.
    pub fn full() -> Self {
        Self { allowed_prefix: Vec::new(), allowed_period: vec![DigitSet::All] }
    }

    /// The same digit subset at every rank.
    pub fn constant(digits: Vec<usize>) -> Self {
        Self { allowed_prefix: Vec::new(), allowed_period: vec![DigitSet::only(digits)] }
    }

    pub fn allowed(&self, j: usize) -> &DigitSet {
        assert!(j >= 1, "ranks start at 1");
        let m = self.allowed_prefix.len();
        if j <= m {
            &self.allowed_prefix[j - 1]
        } else {
            &self.allowed_period[(j - m - 1) % self.allowed_period.len()]
        }
    }

    /// Checks every rank against the digit counts of `m`.
    pub fn validate(&self, m: &impl ColumnSource) -> Result<()> {
        if self.allowed_period.is_empty() {
            return Err(Error::InvalidSpec("allowed_period must be nonempty".into()));
        }
        let horizon = self.allowed_prefix.len().max(m.prefix_len())
            + self.allowed_period.len().lcm(&m.period_len());
        for j in 1..=horizon {
            let n = m.digits(j);
            match self.allowed(j) {
                DigitSet::All => {}
                DigitSet::Only(d) if d.is_empty() => {
                    return Err(Error::InvalidSpec(format!("rank {j}: empty digit set")));
                }
                DigitSet::Only(d) => {
                    if let Some(&bad) = d.iter().find(|&&a| a >= n) {
                        return Err(Error::InvalidSpec(format!(
                            "rank {j}: digit {bad} out of range for {n} digits"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `Π_{j≤k} |allowed(j)|`, the number of rank-`k` cylinders of the spec.
    pub fn cylinder_count(&self, m: &impl ColumnSource, k: usize) -> BigUint {
        (1..=k).fold(BigUint::one(), |acc, j| acc * self.allowed(j).count(m.digits(j)))
    }

    /// Ranks `j <= k` whose digit is fully determined.
    pub fn forced_ranks(&self, m: &impl ColumnSource, k: usize) -> Vec<usize> {
        (1..=k).filter(|&j| self.allowed(j).count(m.digits(j)) == 1).collect()
    }
}

impl fmt::Display for MoranSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtilde::QMatrix;

    #[test]
    fn serde_shapes() {
        let spec: MoranSpec =
            serde_json::from_str(r#"{"allowed_prefix": [[2,0],[0,2]], "allowed_period": ["all"]}"#).unwrap();
        assert_eq!(spec.allowed(1), &DigitSet::Only(vec![0, 2]));
        assert_eq!(spec.allowed(7), &DigitSet::All);
        assert_eq!(
            serde_json::to_string(&spec).unwrap(),
            r#"{"allowed_prefix":[[0,2],[0,2]],"allowed_period":["all"]}"#
        );
        assert!(serde_json::from_str::<MoranSpec>(r#"{"allowed_period": ["some"]}"#).is_err());
    }

    #[test]
    fn validation() {
        let t = QMatrix::s_adic(3);
        assert!(MoranSpec::constant(vec![0, 2]).validate(&t).is_ok());
        assert!(MoranSpec::constant(vec![0, 3]).validate(&t).is_err());
        assert!(MoranSpec::constant(vec![]).validate(&t).is_err());
        let none = MoranSpec { allowed_prefix: vec![], allowed_period: vec![] };
        assert!(none.validate(&t).is_err());
    }

    #[test]
    fn counts() {
        let t = QMatrix::s_adic(3);
        let cantor = MoranSpec::constant(vec![0, 2]);
        assert_eq!(cantor.cylinder_count(&t, 10), BigUint::from(1024u32));
        assert_eq!(MoranSpec::full().cylinder_count(&t, 3), BigUint::from(27u32));
        assert!(cantor.forced_ranks(&t, 5).is_empty());
    }
}
