//! Grid box counts `N(δ)` computed exactly from rational endpoints, and the
//! tail-window estimator shared by every dimension method.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limsup::LimsupEstimator;
use crate::qtilde::{ColumnSource, Cylinder, Interval};

use crate::rational::{biguint_of, ln_biguint, pow_int, Rational};

pub const MIN_SCALES: usize = 4;

/// The grid scale `δ = base^{−exponent}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridScale {
    pub base: u32,
    pub exponent: u32,
}

impl GridScale {
    pub fn delta(&self) -> Rational {
        Rational::new(BigInt::one(), pow_int(self.base, self.exponent))
    }

    pub fn ln_inverse(&self) -> f64 {
        self.exponent as f64 * (self.base as f64).ln()
    }
}

/// One scale of a dimension estimate: `log_ratio = ln N / ln(1/δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSample {
    #[serde(with = "crate::rational::serde_rational")]
    pub scale: Rational,
    #[serde(with = "biguint_string")]
    pub count: BigUint,
    pub log_ratio: f64,
}

impl ScaleSample {
    /// Builds a sample from a count and `ln(1/δ)`; empty or single-scale sets give 0.
    pub fn new(scale: Rational, count: BigUint, ln_inv_scale: f64) -> Self {
        let log_ratio = if count.is_zero() || ln_inv_scale <= 0.0 {
            0.0
        } else {
            ln_biguint(&count) / ln_inv_scale
        };
        Self { scale, count, log_ratio }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DyadicBox,
    CylinderFamily,
    MoranOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub method: Method,
    /// Grid base for box counts; absent for cylinder families.
    pub grid_base: Option<u32>,
    pub samples: Vec<ScaleSample>,
    pub estimate: f64,
    /// 1-based sample positions of the tail window.
    pub window: (usize, usize),
}

/// `N(δ)` for each scale: grid cells `[iδ, (i+1)δ)` meeting the union of `intervals`.
///
/// Intervals are half-open; a point interval meets exactly the cell containing it.
pub fn box_counts(intervals: &[Interval], scales: &[GridScale]) -> Vec<ScaleSample> {
    let mut sorted: Vec<&Interval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.left.cmp(&b.left));
    scales
        .iter()
        .map(|s| {
            let cells = pow_int(s.base, s.exponent);
            let mut count = BigInt::zero();
            let mut last: Option<BigInt> = None;
            for iv in &sorted {
                let mut lo = floor_scaled(&iv.left, &cells);
                let hi = if iv.is_point() { lo.clone() } else { ceil_scaled(&iv.right, &cells) - 1 };
                if let Some(l) = &last {
                    if &lo <= l {
                        lo = l + 1;
                    }
                }
                if hi >= lo {
                    count += &hi - &lo + 1;
                    last = Some(hi);
                }
            }
            ScaleSample::new(s.delta(), biguint_of(&count), s.ln_inverse())
        })
        .collect()
}

fn floor_scaled(x: &Rational, cells: &BigInt) -> BigInt {
    (x.numer() * cells).div_floor(x.denom())
}

fn ceil_scaled(x: &Rational, cells: &BigInt) -> BigInt {
    (x.numer() * cells).div_ceil(x.denom())
}

/// Tail-window maximum of the sample log-ratios.
pub fn dim_estimate(samples: Vec<ScaleSample>, method: Method, est: &LimsupEstimator) -> Result<DimensionEstimate> {
    if samples.len() < MIN_SCALES {
        return Err(Error::TooFewScales { got: samples.len(), needed: MIN_SCALES });
    }
    let ratios: Vec<f64> = samples.iter().map(|s| s.log_ratio).collect();
    let estimate = est.estimate(&ratios).expect("nonempty");
    let w = est.window(ratios.len());
    Ok(DimensionEstimate { method, grid_base: None, samples, estimate, window: (*w.start(), *w.end()) })
}

/// `Some(s)` when every column is uniform with the same digit count `s`.
pub fn matched_base(m: &impl ColumnSource) -> Option<u32> {
    let cols = m.distinct_columns();
    let n = cols.first()?.len();
    cols.iter().all(|c| c.len() == n && c.is_uniform()).then_some(n as u32)
}

/// Exponents `1..=N` with `base^{−N} >= finest`.
pub fn scale_ladder(base: u32, finest: &Rational) -> Vec<GridScale> {
    let mut out = Vec::new();
    let mut exponent = 1;
    loop {
        let s = GridScale { base, exponent };
        if &s.delta() < finest {
            break;
        }
        out.push(s);
        exponent += 1;
        if exponent > 4096 {
            break;
        }
    }
    out
}

/// Box-counting estimate for a cylinder union, on the grid matched to `m`
/// (`s^{−n}` for an s-adic matrix, dyadic otherwise) down to the largest
/// cylinder length.
pub fn box_dimension(cylinders: &[Cylinder], m: &impl ColumnSource, est: &LimsupEstimator) -> Result<DimensionEstimate> {
    let base = matched_base(m).unwrap_or(2);
    let finest = cylinders.iter().map(Cylinder::length).max().unwrap_or_else(Rational::zero);
    if finest.is_zero() {
        return Err(Error::TooFewScales { got: 0, needed: MIN_SCALES });
    }
    let scales = scale_ladder(base, &finest);
    let intervals: Vec<Interval> = cylinders.iter().map(Cylinder::interval).collect();
    let mut d = dim_estimate(box_counts(&intervals, &scales), Method::DyadicBox, est)?;
    d.grid_base = Some(base);
    Ok(d)
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
