//! The product measure μ_ξ of a random variable with independent Q̃-digits
//! and its distribution function F_ξ.
//!
//! F_ξ maps the Q-cylinder of a word onto the P-cylinder of the same word,
//! so every image here is computed by re-running the cylinder construction
//! under P.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qtilde::{cylinder, ColumnSource, Cylinder, DigitWord, ExpansionDigits, Interval, PMatrix, QMatrix};
use crate::rational::{format_rational, from_f64, is_unit_interval_point, ln_rational, Rational};

/// Default digit budget for pointwise evaluation of F_ξ.
pub const DEFAULT_POINT_RANK: usize = 256;

/// `μ_ξ(Δ_w) = Π_j p_{a_j j}`, exactly.
pub fn mu_cylinder(p: &PMatrix, w: &DigitWord) -> Result<Rational> {
    w.check(p)?;
    Ok(w
        .digits()
        .iter()
        .enumerate()
        .fold(Rational::one(), |acc, (idx, &a)| acc * p.column(idx + 1).entry(a)))
}

/// `F_ξ(Δ^Q_w)`, the cylinder of `w` under P. Its length is `mu_cylinder(p, w)`.
pub fn f_xi_cylinder(q: &QMatrix, p: &PMatrix, w: &DigitWord) -> Result<Cylinder> {
    w.check(q)?;
    cylinder(p, w)
}

/// Encloses `F_ξ(x)` in an exact interval of width at most `tol`.
///
/// Digits of `x` are taken under Q, at least one, until the P-image of the
/// current cylinder is narrow enough. A zero-probability digit collapses the image to a point,
/// which is returned as a degenerate interval.
pub fn f_xi_point(q: &QMatrix, p: &PMatrix, x: &Rational, tol: f64, max_rank: usize) -> Result<Interval> {
    if !is_unit_interval_point(x) {
        return Err(Error::OutOfUnitInterval(format_rational(x)));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let tol_r = from_f64(tol)?;
    let mut left = Rational::zero();
    let mut len = Rational::one();
    let mut digits = ExpansionDigits::new(q, x.clone());
    for rank in 0..=max_rank {
        if rank > 0 && (len.is_zero() || len <= tol_r) {
            let right = &left + &len;
            return Ok(Interval { left, right });
        }
        if rank == max_rank {
            break;
        }
        let a = digits.next().expect("expansion is infinite");
        let col = p.column(rank + 1);
        left += col.offset(a) * &len;
        len *= col.entry(a);
    }
    Err(Error::ToleranceNotReached { tol, max_rank })
}

/// `ln μ_ξ(Δ_w) / ln λ(Δ_w)`, the local dimension ratio along `w`.
pub fn local_dim_ratio(q: &QMatrix, p: &PMatrix, w: &DigitWord) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mu = mu_cylinder(p, w)?;
    if mu.is_zero() {
        return Err(Error::ZeroMeasureCylinder);
    }
    let lambda = cylinder(q, w)?.length();
    Ok(ln_rational(&mu) / ln_rational(&lambda))
}
