//! Numerical stand-in for `lim_{h→0⁺} r(h) = 0` along a step schedule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance on the tail of a residual trace.
pub const DEFAULT_ATOL: f64 = 1e-4;

/// Step schedule `h_k = h0 * ratio^k`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HSchedule {
    h0: f64,
    ratio: f64,
    count: usize,
}

/// Smallest admissible step of any schedule.
pub const MIN_STEP: f64 = 1e-9;

impl HSchedule {
    pub fn new(h0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(h0.is_finite() && h0 > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "h0 must be positive, got {h0}"
            )));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "ratio must lie in (0, 1), got {ratio}"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidConfig("count must be positive".into()));
        }
        let schedule = HSchedule { h0, ratio, count };
        if schedule.smallest() < MIN_STEP {
            return Err(Error::InvalidConfig(format!(
                "smallest step {:e} is below {MIN_STEP:e}",
                schedule.smallest()
            )));
        }
        Ok(schedule)
    }

    pub fn h0(&self) -> f64 {
        self.h0
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn smallest(&self) -> f64 {
        self.h0 * self.ratio.powi(self.count as i32 - 1)
    }

    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |k| self.h0 * self.ratio.powi(k as i32))
    }
}

impl Default for HSchedule {
    fn default() -> Self {
        HSchedule {
            h0: 1e-2,
            ratio: 0.7,
            count: 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConvergesToZero,
    Diverges,
    Inconclusive,
}

impl Verdict {
    pub fn converges(self) -> bool {
        self == Verdict::ConvergesToZero
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ConvergesToZero => "converges-to-zero",
            Verdict::Diverges => "diverges",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// A residual trace `(h, r(h))` with its verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub residuals: Vec<(f64, f64)>,
    pub verdict: Verdict,
    /// Smallest residual observed along the trace.
    pub floor: f64,
}

impl LimitEstimate {
    /// Builds the estimate and assesses it against `atol`.
    pub fn from_trace(residuals: Vec<(f64, f64)>, atol: f64) -> Self {
        let values: Vec<f64> = residuals.iter().map(|&(_, r)| r).collect();
        let verdict = assess(&values, atol);
        let floor = values.iter().copied().fold(f64::INFINITY, f64::min);
        LimitEstimate {
            residuals,
            verdict,
            floor,
        }
    }

    pub fn last(&self) -> Option<f64> {
        self.residuals.last().map(|&(_, r)| r)
    }
}

/// Number of trailing residuals that must all be within tolerance.
const TAIL: usize = 3;

/// Upticks between residuals that are both below `atol * NOISE_FRACTION`
/// are rounding noise and are not counted.
const NOISE_FRACTION: f64 = 1e-3;

/// Convergence test on a residual trace ordered by decreasing step.
///
/// Converges when the last three residuals are within `atol` and the
/// final half of the trace is non-increasing, allowing a single uptick of
/// at most 2x. Diverges when all of the last three exceed `atol`.
pub fn assess(values: &[f64], atol: f64) -> Verdict {
    if values.is_empty() || values.iter().any(|r| !r.is_finite()) {
        return Verdict::Diverges;
    }
    let tail = &values[values.len().saturating_sub(TAIL)..];
    if tail.iter().all(|&r| r > atol) {
        return Verdict::Diverges;
    }
    if !tail.iter().all(|&r| r <= atol) {
        return Verdict::Inconclusive;
    }
    let noise = atol * NOISE_FRACTION;
    let half = &values[values.len() / 2..];
    let mut upticks = 0;
    for pair in half.windows(2) {
        let (prev, next) = (pair[0], pair[1]);
        if next <= prev || (prev <= noise && next <= noise) {
            continue;
        }
        upticks += 1;
        if upticks > 1 || next > 2.0 * prev {
            return Verdict::Inconclusive;
        }
    }
    Verdict::ConvergesToZero
}
