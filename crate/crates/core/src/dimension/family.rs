//! Dimension with respect to the cylinder family, and the closed-form
//! oracle for digit-uniform matrices.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::boxcount::{dim_estimate, DimensionEstimate, Method, ScaleSample};
use super::MoranSpec;
use crate::error::{Error, Result};
use crate::limsup::LimsupEstimator;
use crate::qtilde::ColumnSource;
use crate::rational::{ln_rational, Rational};

/// Rank-`k` samples `ln N_k / ln(1/ℓ_k)` with `N_k` the number of
/// nondegenerate spec cylinders and `ℓ_k` the largest of their lengths.
///
/// Cylinder lengths are products of independent per-rank factors, so both
/// quantities factorize rank by rank and the computation never enumerates
/// words; this is what keeps ranks in the hundreds tractable.
pub fn family_samples(spec: &MoranSpec, m: &impl ColumnSource, ranks: &[usize]) -> Result<Vec<ScaleSample>> {
    spec.validate(m)?;
    if ranks.iter().any(|&k| k == 0) {
        return Err(Error::InvalidParameter("ranks must be at least 1".into()));
    }
    let top = ranks.iter().copied().max().unwrap_or(0);
    let mut count = BigUint::one();
    let mut longest = Rational::one();
    let mut by_rank = Vec::with_capacity(top);
    for j in 1..=top {
        let col = m.column(j);
        let live: Vec<&Rational> = spec
            .allowed(j)
            .digits(col.len())
            .into_iter()
            .map(|a| col.entry(a))
            .filter(|e| !e.is_zero())
            .collect();
        count *= live.len();
        longest *= live.into_iter().max().cloned().unwrap_or_else(Rational::zero);
        let sample = if count.is_zero() {
            ScaleSample { scale: Rational::zero(), count: BigUint::zero(), log_ratio: 0.0 }
        } else {
            ScaleSample::new(longest.clone(), count.clone(), -ln_rational(&longest))
        };
        by_rank.push(sample);
    }
    Ok(ranks.iter().map(|&k| by_rank[k - 1].clone()).collect())
}

/// Tail-window estimate of the cylinder-family dimension over `ranks`.
pub fn family_dim(
    spec: &MoranSpec,
    m: &impl ColumnSource,
    ranks: &[usize],
    est: &LimsupEstimator,
) -> Result<DimensionEstimate> {
    dim_estimate(family_samples(spec, m, ranks)?, Method::CylinderFamily, est)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoranOracle {
    /// `(Σ_{j≤k} ln|allowed(j)|) / (Σ_{j≤k} ln n_j)` for `k = 1..=k_max`.
    pub partials: Vec<f64>,
    pub estimate: f64,
}

/// Closed-form dimension of a Moran set under a digit-uniform matrix.
pub fn moran_dim_oracle(spec: &MoranSpec, m: &impl ColumnSource, k_max: usize, est: &LimsupEstimator) -> Result<MoranOracle> {
    spec.validate(m)?;
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    for (idx, col) in m.distinct_columns().into_iter().enumerate() {
        if !col.is_uniform() {
            return Err(Error::NonUniformColumns { column: idx + 1 });
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    let partials: Vec<f64> = (1..=k_max)
        .map(|j| {
            let n = m.digits(j);
            num += (spec.allowed(j).count(n) as f64).ln();
            den += (n as f64).ln();
            num / den
        })
        .collect();
    let estimate = est.estimate(&partials).expect("k_max >= 1");
    Ok(MoranOracle { partials, estimate })
}
