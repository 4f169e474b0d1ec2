use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::MoranSpec;
use crate::error::{Error, Result};
use crate::qtilde::{ColumnSource, Cylinder};

pub const DEFAULT_MAX_RANK: u32 = 22;

/// Overrides the rank budget when set.
pub const RANK_BUDGET_ENV: &str = "DIMLAB_RANK_BUDGET";

/// Enumeration ceiling: a rank budget `r` admits at most `2^r` cylinders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_rank: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_rank: DEFAULT_MAX_RANK }
    }
}

impl Budget {
    pub fn new(max_rank: u32) -> Self {
        Self { max_rank: max_rank.min(62) }
    }

    /// The default budget, unless `DIMLAB_RANK_BUDGET` holds a valid rank.
    pub fn from_env() -> Self {
        std::env::var(RANK_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or_else(Self::default, Self::new)
    }

    pub fn max_cylinders(&self) -> u64 {
        1u64 << self.max_rank
    }

    pub fn check(&self, requested: &BigUint) -> Result<()> {
        match requested.to_u64() {
            Some(n) if n <= self.max_cylinders() => Ok(()),
            _ => Err(Error::BudgetExceeded { requested: requested.to_string(), budget: self.max_cylinders() }),
        }
    }
}

/// All rank-`k` cylinders of `spec` under `m`, left to right, with exact endpoints.
///
/// Zero-length cylinders (possible under a probability matrix with zero
/// entries) are dropped, together with all their descendants.
pub fn enumerate_cylinders(spec: &MoranSpec, m: &impl ColumnSource, k: usize, budget: &Budget) -> Result<Vec<Cylinder>> {
    spec.validate(m)?;
    budget.check(&spec.cylinder_count(m, k))?;
    let mut level = vec![Cylinder::unit()];
    for j in 1..=k {
        let digits = spec.allowed(j).digits(m.digits(j));
        let mut next = Vec::with_capacity(level.len() * digits.len());
        for parent in &level {
            for &a in &digits {
                let child = parent.child(m, a);
                if !child.is_degenerate() {
                    next.push(child);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtilde::QMatrix;
    use crate::rational::rat;

    #[test]
    fn full_binary_rank_three() {
        let q = QMatrix::s_adic(2);
        let cyl = enumerate_cylinders(&MoranSpec::full(), &q, 3, &Budget::default()).unwrap();
        assert_eq!(cyl.len(), 8);
        assert_eq!(cyl[0].left, rat(0, 1));
        assert_eq!(cyl[7].right, rat(1, 1));
        assert!(cyl.windows(2).all(|w| w[0].right == w[1].left));
    }

    #[test]
    fn cantor_rank_two() {
        let t = QMatrix::s_adic(3);
        let cyl = enumerate_cylinders(&MoranSpec::constant(vec![0, 2]), &t, 2, &Budget::default()).unwrap();
        let got: Vec<_> = cyl.iter().map(|c| (c.left.clone(), c.right.clone())).collect();
        assert_eq!(
            got,
            vec![
                (rat(0, 1), rat(1, 9)),
                (rat(2, 9), rat(3, 9)),
                (rat(6, 9), rat(7, 9)),
                (rat(8, 9), rat(1, 1))
            ]
        );
    }

    #[test]
    fn budget_guard() {
        let q = QMatrix::s_adic(2);
        let e = enumerate_cylinders(&MoranSpec::full(), &q, 11, &Budget::new(10)).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { budget: 1024, .. }));
        assert!(enumerate_cylinders(&MoranSpec::full(), &q, 10, &Budget::new(10)).is_ok());
    }
}
