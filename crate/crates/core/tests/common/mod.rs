#![allow(dead_code)]

use dimlab::dimension::PackingMode;
use dimlab::qtilde::{ColumnSource, DigitWord};
use dimlab::rational::{rat, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every word of rank `k` under `m`, in lexicographic order.
pub fn all_words(m: &impl ColumnSource, k: usize) -> Vec<DigitWord> {
    let mut words = vec![Vec::new()];
    for j in 1..=k {
        let n = m.digits(j);
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    words.into_iter().map(DigitWord::new).collect()
}

pub fn random_word(m: &impl ColumnSource, k: usize, rng: &mut impl rand::Rng) -> DigitWord {
    DigitWord::new((1..=k).map(|j| rng.gen_range(0..m.digits(j))).collect())
}

/// Best `Σ d^α` by trying every assignment of at most one diameter per center.
/// Coordinates are integers in units of 1/64; diameters are `32 >> t`.
pub fn brute_force(centers: &[i64], points: &[i64], alpha: f64, t_max: u32, mode: PackingMode) -> f64 {
    let ladder: Vec<i64> = (0..=t_max).map(|t| 32 >> t).collect();
    let options = ladder.len() + 1;
    let total = options.pow(centers.len() as u32);
    let mut best = 0.0f64;
    let mut chosen: Vec<(i64, i64)> = Vec::with_capacity(centers.len());
    'outer: for code in 0..total {
        chosen.clear();
        let mut c = code;
        for &x in centers {
            let pick = c % options;
            c /= options;
            if pick == 0 {
                continue;
            }
            let half = ladder[pick - 1] / 2;
            let (lo, hi) = (x - half, x + half);
            if mode == PackingMode::Uncentered && !points.iter().any(|&p| p > lo && p < hi) {
                continue 'outer;
            }
            if chosen.iter().any(|&(l, h)| !(h <= lo || hi <= l)) {
                continue 'outer;
            }
            chosen.push((lo, hi));
        }
        let v: f64 = chosen.iter().map(|&(l, h)| if alpha == 0.0 { 1.0 } else { ((h - l) as f64 / 64.0).powf(alpha) }).sum();
        best = best.max(v);
    }
    best
}

/// Distinct points `v/16`, returned in 1/64 units.
pub fn lattice_set(rng: &mut ChaCha8Rng, size: usize) -> Vec<i64> {
    let mut pts: Vec<i64> = Vec::new();
    while pts.len() < size {
        let v = rng.gen_range(0..16);
        if !pts.contains(&v) {
            pts.push(v);
        }
    }
    pts.sort_unstable();
    pts.into_iter().map(|v| 4 * v).collect()
}

pub fn to_rationals(units: &[i64]) -> Vec<Rational> {
    units.iter().map(|&u| rat(u, 64)).collect()
}

