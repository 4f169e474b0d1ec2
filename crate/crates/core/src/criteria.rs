//! Scalar preservation criteria for F_ξ: column entropies, the entropy-ratio
//! limsup, the sparse set `T` with its density `B`, the cylinder log-ratio
//! along a digit path, and the resulting verdict.
//!
//! Conventions: natural logarithms, `0·ln 0 = 0` in `h_j`, and `ln(1/0) = +∞`
//! in `B` (reported as an infinite estimate rather than an error).

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dimension::{DigitSet, MoranSpec};
use crate::error::{Error, Result};
use crate::limsup::LimsupEstimator;
use crate::qtilde::{ColumnSource, DigitWord, PMatrix, QMatrix};
use crate::rational::{ln_rational, Rational};

/// `(h_j, b_j) = (−Σ_i p_ij ln p_ij, −Σ_i p_ij ln q_ij)`.
pub fn entropy_terms(q: &QMatrix, p: &PMatrix, j: usize) -> (f64, f64) {
    let (qc, pc) = (q.column(j), p.column(j));
    let mut h = 0.0;
    let mut b = 0.0;
    for (pi, qi) in pc.entries().iter().zip(qc.entries()) {
        if pi.is_zero() {
            continue;
        }
        let w = crate::rational::to_f64(pi);
        h -= w * ln_rational(pi);
        b -= w * ln_rational(qi);
    }
    (h, b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiRatio {
    /// `Σ_{j≤k} h_j`, indexed from `k = 1`.
    pub h_partials: Vec<f64>,
    /// `Σ_{j≤k} b_j`.
    pub b_partials: Vec<f64>,
    pub partials: Vec<f64>,
    pub estimate: f64,
    pub window_min: f64,
}

/// Partial ratios `(h_1+…+h_k)/(b_1+…+b_k)` for `k = 1..=k_max` and their tail-max.
pub fn li_ratio(q: &QMatrix, p: &PMatrix, k_max: usize, est: &LimsupEstimator) -> Result<LiRatio> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    let mut h_partials = Vec::with_capacity(k_max);
    let mut b_partials = Vec::with_capacity(k_max);
    let mut partials = Vec::with_capacity(k_max);
    let (mut hs, mut bs) = (0.0, 0.0);
    for j in 1..=k_max {
        let (h, b) = entropy_terms(q, p, j);
        hs += h;
        bs += b;
        if bs == 0.0 {
            return Err(Error::DegenerateDenominator);
        }
        h_partials.push(hs);
        b_partials.push(bs);
        partials.push(hs / bs);
    }
    let estimate = est.estimate(&partials).expect("k_max >= 1");
    let window_min = est.tail_min(&partials).expect("k_max >= 1");
    Ok(LiRatio { h_partials, b_partials, partials, estimate, window_min })
}

/// `T` restricted to `[1, k_max]` and the density partials of `B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseT {
    pub members: Vec<usize>,
    /// `(Σ_{j∈T_k} ln(1/p_j))/k` for `k = 1..=k_max`; `+∞` once a zero column joins `T`.
    #[serde(with = "extended_vec")]
    pub b_partials: Vec<f64>,
    #[serde(with = "crate::rational::serde_extended_f64")]
    pub estimate: f64,
    /// First rank whose minimal probability is exactly zero.
    pub infinite_from: Option<usize>,
}

/// `p_j := min_i p_ij`; `T = {j : p_j < q_min/2}` and `B = limsup (Σ_{j∈T_k} ln(1/p_j))/k`.
pub fn sparse_t_and_b(q: &QMatrix, p: &PMatrix, k_max: usize, est: &LimsupEstimator) -> SparseT {
    let threshold = q.q_min() / Rational::from_integer(2.into());
    let mut members = Vec::new();
    let mut b_partials = Vec::with_capacity(k_max);
    let mut infinite_from = None;
    let mut sum = 0.0;
    for j in 1..=k_max {
        let pj = p.column(j).min_entry();
        if pj < &threshold {
            members.push(j);
            if pj.is_zero() {
                infinite_from.get_or_insert(j);
                sum = f64::INFINITY;
            } else {
                sum -= ln_rational(pj);
            }
        }
        b_partials.push(sum / j as f64);
    }
    let estimate = est.estimate(&b_partials).unwrap_or(0.0);
    SparseT { members, b_partials, estimate, infinite_from }
}

/// `ln q_{a_k k} / Σ_{j<k} ln q_{a_j j}` for `k = 2..=|w|`; empty for shorter words.
pub fn lemma1_ratio(q: &QMatrix, w: &DigitWord) -> Result<Vec<f64>> {
    w.check(q)?;
    let logs: Vec<f64> = w
        .digits()
        .iter()
        .enumerate()
        .map(|(idx, &a)| ln_rational(q.column(idx + 1).entry(a)))
        .collect();
    let mut out = Vec::with_capacity(logs.len().saturating_sub(1));
    let mut acc = logs.first().copied().unwrap_or(0.0);
    for &l in logs.iter().skip(1) {
        out.push(l / acc);
        acc += l;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PDP")]
    Pdp,
    #[serde(rename = "NotPDP_BPositive")]
    NotPdpBPositive,
    #[serde(rename = "NotPDP_MeasureDim")]
    NotPdpMeasureDim,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Pdp => "PDP",
            Verdict::NotPdpBPositive => "NotPDP_BPositive",
            Verdict::NotPdpMeasureDim => "NotPDP_MeasureDim",
            Verdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub k_max: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub q_min: Rational,
    pub window_fraction: f64,
    pub tolerance: f64,
    pub t_members: Vec<usize>,
    #[serde(rename = "B_partials", with = "extended_vec")]
    pub big_b_partials: Vec<f64>,
    #[serde(rename = "B_estimate", with = "crate::rational::serde_extended_f64")]
    pub big_b_estimate: f64,
    #[serde(rename = "B_infinite_from")]
    pub big_b_infinite_from: Option<usize>,
    pub h_partials: Vec<f64>,
    pub b_partials: Vec<f64>,
    pub li_ratio_partials: Vec<f64>,
    pub li_estimate: f64,
    pub li_window_min: f64,
    pub verdict: Verdict,
}

impl CriterionReport {
    pub fn in_t(&self, k: usize) -> bool {
        self.t_members.binary_search(&k).is_ok()
    }
}

/// Classifies F_ξ from the two finite-range criteria.
///
/// `B` above `tol` gives `NotPDP_BPositive`; otherwise an entropy ratio below
/// `1 − tol` gives `NotPDP_MeasureDim`. PDP needs the whole tail window of the
/// ratio inside the band; a window that straddles `1 − tol` is `Inconclusive`.
pub fn classify(li: &LiRatio, b: &SparseT, tol: f64) -> Verdict {
    if b.estimate > tol {
        Verdict::NotPdpBPositive
    } else if li.estimate < 1.0 - tol {
        Verdict::NotPdpMeasureDim
    } else if li.window_min < 1.0 - tol {
        Verdict::Inconclusive
    } else {
        Verdict::Pdp
    }
}

pub fn pdp_verdict(
    q: &QMatrix,
    p: &PMatrix,
    k_max: usize,
    measure_dim_tol: f64,
    est: &LimsupEstimator,
) -> Result<CriterionReport> {
    if !(measure_dim_tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be nonnegative, got {measure_dim_tol}")));
    }
    let li = li_ratio(q, p, k_max, est)?;
    let sparse = sparse_t_and_b(q, p, k_max, est);
    let verdict = classify(&li, &sparse, measure_dim_tol);
    Ok(CriterionReport {
        k_max,
        q_min: q.q_min().clone(),
        window_fraction: est.window_fraction(),
        tolerance: measure_dim_tol,
        t_members: sparse.members,
        big_b_partials: sparse.b_partials,
        big_b_estimate: sparse.estimate,
        big_b_infinite_from: sparse.infinite_from,
        h_partials: li.h_partials,
        b_partials: li.b_partials,
        li_ratio_partials: li.partials,
        li_estimate: li.estimate,
        li_window_min: li.window_min,
        verdict,
    })
}

/// The test set `L` at rank budget `k`: all digits outside `T`, and at each
/// rank of `T` only the digit of least probability (smallest index on ties).
pub fn counterexample_l(q: &QMatrix, p: &PMatrix, k: usize) -> MoranSpec {
    let threshold = q.q_min() / Rational::from_integer(2.into());
    let allowed_prefix = (1..=k)
        .map(|j| {
            let col = p.column(j);
            if col.min_entry() < &threshold {
                DigitSet::Only(vec![col.argmin()])
            } else {
                DigitSet::All
            }
        })
        .collect();
    MoranSpec { allowed_prefix, allowed_period: vec![DigitSet::All] }
}

mod extended_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "crate::rational::serde_extended_f64")] f64);

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&x| Wrap(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<Wrap>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}
