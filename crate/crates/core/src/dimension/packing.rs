//! Finite-scale packing premeasures on the line.
//!
//! A packing is a family of pairwise disjoint open balls `(c − d/2, c + d/2)`
//! with diameters `d ∈ {ε/2^t : t = 0..=t_max}`. Centered packings take `c ∈ E`;
//! uncentered ones only require each ball to meet `E`, with centers drawn from
//! `E` and the midpoints between consecutive points of `E`. The best value of
//! `Σ d^α` over these candidates is found by weighted interval scheduling, so
//! the result is an attained packing and a lower bound for the supremum.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, to_f64, Rational};

pub const MAX_RADIUS_LEVELS: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingMode {
    Centered,
    Uncentered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    #[serde(with = "crate::rational::serde_rational")]
    pub center: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub diameter: Rational,
}

impl Ball {
    pub fn lo(&self) -> Rational {
        &self.center - &self.diameter / Rational::from_integer(2.into())
    }

    pub fn hi(&self) -> Rational {
        &self.center + &self.diameter / Rational::from_integer(2.into())
    }

    /// Open balls on the line are disjoint iff one ends where or before the other starts.
    pub fn disjoint(&self, other: &Ball) -> bool {
        self.hi() <= other.lo() || other.hi() <= self.lo()
    }

    pub fn meets(&self, x: &Rational) -> bool {
        (&self.center - x).abs() * Rational::from_integer(2.into()) < self.diameter
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub value: f64,
    pub balls: Vec<Ball>,
}

fn sorted_points(points: &[Rational]) -> Vec<Rational> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    pts
}

fn min_gap(pts: &[Rational]) -> Option<Rational> {
    pts.windows(2).map(|w| &w[1] - &w[0]).min()
}

/// Smallest `t` with `ε/2^t` no wider than the closest pair of points.
pub fn separation_levels(points: &[Rational], eps: &Rational) -> u32 {
    let pts = sorted_points(points);
    let Some(gap) = min_gap(&pts) else { return 0 };
    let mut d = eps.clone();
    let mut t = 0;
    while d > gap && t < MAX_RADIUS_LEVELS {
        d /= Rational::from_integer(2.into());
        t += 1;
    }
    t
}

fn diameters(eps: &Rational, t_max: u32) -> Vec<Rational> {
    let half = Rational::new(1.into(), 2.into());
    let mut out = Vec::with_capacity(t_max as usize + 1);
    let mut d = eps.clone();
    for _ in 0..=t_max {
        out.push(d.clone());
        d *= &half;
    }
    out
}

fn candidates(pts: &[Rational], eps: &Rational, t_max: u32, mode: PackingMode) -> Vec<Ball> {
    let ladder = diameters(eps, t_max);
    let mut out = Vec::new();
    for p in pts {
        out.extend(ladder.iter().map(|d| Ball { center: p.clone(), diameter: d.clone() }));
    }
    if mode == PackingMode::Uncentered {
        let two = Rational::from_integer(2.into());
        for w in pts.windows(2) {
            let center = (&w[0] + &w[1]) / &two;
            for d in &ladder {
                let ball = Ball { center: center.clone(), diameter: d.clone() };
                if ball.meets(&w[0]) {
                    out.push(ball);
                }
            }
        }
    }
    out
}

/// Best `Σ |B_i|^α` over disjoint candidate balls of diameter at most `eps`.
pub fn packing_premeasure(
    points: &[Rational],
    alpha: f64,
    eps: &Rational,
    t_max: u32,
    mode: PackingMode,
) -> Result<PackingResult> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {}", format_rational(eps))));
    }
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be nonnegative, got {alpha}")));
    }
    if t_max > MAX_RADIUS_LEVELS {
        return Err(Error::InvalidParameter(format!("at most {MAX_RADIUS_LEVELS} radius levels")));
    }
    let pts = sorted_points(points);
    if pts.is_empty() {
        return Ok(PackingResult { value: 0.0, balls: Vec::new() });
    }
    let finest = eps / Rational::from_integer(num_traits::pow(2u32.into(), t_max as usize));
    if let Some(gap) = min_gap(&pts) {
        if finest > gap {
            return Err(Error::GridTooCoarse { finest: format_rational(&finest), gap: format_rational(&gap) });
        }
    }

    let mut balls = candidates(&pts, eps, t_max, mode);
    balls.sort_by_key(Ball::hi);
    let his: Vec<Rational> = balls.iter().map(Ball::hi).collect();
    let weights: Vec<f64> = balls
        .iter()
        .map(|b| if alpha == 0.0 { 1.0 } else { to_f64(&b.diameter).powf(alpha) })
        .collect();
    // best[i]: optimum over the first i balls (by right end)
    let mut best = vec![0.0f64; balls.len() + 1];
    let mut prev = Vec::with_capacity(balls.len());
    for (i, ball) in balls.iter().enumerate() {
        let lo = ball.lo();
        let p = his.partition_point(|h| h <= &lo);
        prev.push(p);
        best[i + 1] = best[i].max(weights[i] + best[p]);
    }
    let mut chosen = Vec::new();
    let mut i = balls.len();
    while i > 0 {
        if best[i] == best[i - 1] {
            i -= 1;
        } else {
            chosen.push(balls[i - 1].clone());
            i = prev[i - 1];
        }
    }
    chosen.reverse();
    Ok(PackingResult { value: best[balls.len()], balls: chosen })
}

/// Centered and uncentered premeasures; fails if the uncentered value
/// drops below the centered one.
pub fn premeasure_ordering_check(points: &[Rational], alpha: f64, eps: &Rational, t_max: u32) -> Result<(f64, f64)> {
    let centered = packing_premeasure(points, alpha, eps, t_max, PackingMode::Centered)?.value;
    let uncentered = packing_premeasure(points, alpha, eps, t_max, PackingMode::Uncentered)?.value;
    if uncentered < centered * (1.0 - 1e-12) {
        return Err(Error::OrderingViolated { centered, uncentered });
    }
    Ok((centered, uncentered))
}

impl PackingResult {
    /// Checks disjointness, the diameter bound and the center rule.
    pub fn is_valid_packing(&self, points: &[Rational], eps: &Rational, mode: PackingMode) -> bool {
        let pairwise = self
            .balls
            .iter()
            .enumerate()
            .all(|(i, a)| self.balls[i + 1..].iter().all(|b| a.disjoint(b)));
        let sized = self.balls.iter().all(|b| &b.diameter <= eps && b.diameter.is_positive());
        let placed = self.balls.iter().all(|b| match mode {
            PackingMode::Centered => points.contains(&b.center),
            PackingMode::Uncentered => points.iter().any(|x| b.meets(x)),
        });
        pairwise && sized && placed
    }
}
