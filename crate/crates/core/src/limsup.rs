//! Finite surrogate for `limsup`: the maximum over a tail window of partials.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_WINDOW_FRACTION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimsupEstimator {
    window_fraction: f64,
}

impl Default for LimsupEstimator {
    fn default() -> Self {
        Self { window_fraction: DEFAULT_WINDOW_FRACTION }
    }
}

impl LimsupEstimator {
    pub fn new(window_fraction: f64) -> Result<Self> {
        if !(window_fraction > 0.0 && window_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "window fraction must lie in (0, 1], got {window_fraction}"
            )));
        }
        Ok(Self { window_fraction })
    }

    pub fn window_fraction(&self) -> f64 {
        self.window_fraction
    }

    /// 1-based positions `[⌈f·n⌉, n]` of a series of length `n >= 1`.
    pub fn window(&self, n: usize) -> RangeInclusive<usize> {
        let start = ((self.window_fraction * n as f64).ceil() as usize).clamp(1, n.max(1));
        start..=n
    }

    fn tail<'a>(&self, values: &'a [f64]) -> &'a [f64] {
        if values.is_empty() {
            return values;
        }
        let w = self.window(values.len());
        &values[w.start() - 1..]
    }

    /// Tail-window maximum; `None` for an empty series.
    pub fn estimate(&self, values: &[f64]) -> Option<f64> {
        self.tail(values).iter().copied().reduce(f64::max)
    }

    /// Tail-window minimum, used to detect series that straddle a threshold.
    pub fn tail_min(&self, values: &[f64]) -> Option<f64> {
        self.tail(values).iter().copied().reduce(f64::min)
    }

    /// 1-based position of the tail maximum (first occurrence).
    pub fn argmax(&self, values: &[f64]) -> Option<usize> {
        let w = self.window(values.len());
        let best = self.estimate(values)?;
        w.into_iter().find(|&i| values[i - 1] == best)
    }
}
