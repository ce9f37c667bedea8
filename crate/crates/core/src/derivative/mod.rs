//! Metric derivatives of interval-valued functions.
//!
//! A one-sided derivative `A` at `t0` is verified through four limit
//! conditions on the Hausdorff distance, each of the form
//! `lim_{h→0⁺} (1/h) H(·, ·) = 0`:
//!
//! | variant | residual                               |
//! |---------|----------------------------------------|
//! | `L1`    | `H(F(t0), F(t0 - h) + hA) / h`         |
//! | `L2`    | `H(F(t0 - h), F(t0) - hA) / h`         |
//! | `R1`    | `H(F(t0 + h), F(t0) + hA) / h`         |
//! | `R2`    | `H(F(t0), F(t0 + h) - hA) / h`         |
//!
//! `F` is left (right) differentiable when either left (right) variant
//! converges. Pairs `D1 = (R1, L1)` and `D2 = (R2, L2)` define
//! H¹- and H²-differentiability; `D3 = (R2, L1)` and `D4 = (R1, L2)` are
//! the mixed pairs. Two pairs holding at once force a singleton
//! derivative.
//!
//! Candidates for `A` come from one-sided endpoint derivatives; the
//! classifier only reports a derivative after the limits confirm it.

mod calculus;
mod candidates;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::ivf::{IntervalFn, Side};
use crate::limit::{HSchedule, LimitEstimate, Verdict, DEFAULT_ATOL};

pub use calculus::{calculus_check, CalculusReport, IdentityCheck};
pub use candidates::{
    candidate_derivatives, endpoint_derivatives, gh_derivative, Candidates, GhDerivative,
    GhEstimate,
};

/// Maximum Hausdorff gap between left and right candidates for a
/// two-sided derivative.
pub const MATCH_TOL: f64 = 1e-4;
/// Maximum width of a derivative forced to be a singleton.
pub const SINGLETON_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiffConfig {
    pub schedule: HSchedule,
    pub atol: f64,
    pub match_tol: f64,
    pub singleton_tol: f64,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            schedule: HSchedule::default(),
            atol: DEFAULT_ATOL,
            match_tol: MATCH_TOL,
            singleton_tol: SINGLETON_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LimitVariant {
    L1,
    L2,
    R1,
    R2,
}

impl LimitVariant {
    pub const ALL: [LimitVariant; 4] = [
        LimitVariant::L1,
        LimitVariant::L2,
        LimitVariant::R1,
        LimitVariant::R2,
    ];

    pub fn side(self) -> Side {
        match self {
            LimitVariant::L1 | LimitVariant::L2 => Side::Left,
            LimitVariant::R1 | LimitVariant::R2 => Side::Right,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LimitVariant::L1 => "L1",
            LimitVariant::L2 => "L2",
            LimitVariant::R1 => "R1",
            LimitVariant::R2 => "R2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Combo {
    D1,
    D2,
    D3,
    D4,
}

impl Combo {
    pub const ALL: [Combo; 4] = [Combo::D1, Combo::D2, Combo::D3, Combo::D4];

    /// `(right variant, left variant)`.
    pub fn variants(self) -> (LimitVariant, LimitVariant) {
        use LimitVariant::*;
        match self {
            Combo::D1 => (R1, L1),
            Combo::D2 => (R2, L2),
            Combo::D3 => (R2, L1),
            Combo::D4 => (R1, L2),
        }
    }
}

/// `(1/h) H(·, ·)` for one variant at one step.
pub fn metric_residual(
    f: &IntervalFn,
    t0: f64,
    a: Interval,
    variant: LimitVariant,
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "step must be positive, got {h}"
        )));
    }
    let at = f.eval(t0)?;
    let d = match variant {
        LimitVariant::L1 => at.hausdorff(&f.eval(t0 - h)?.add(a.scale(h)?)?),
        LimitVariant::L2 => f.eval(t0 - h)?.hausdorff(&at.add(a.scale(-h)?)?),
        LimitVariant::R1 => f.eval(t0 + h)?.hausdorff(&at.add(a.scale(h)?)?),
        LimitVariant::R2 => at.hausdorff(&f.eval(t0 + h)?.add(a.scale(-h)?)?),
    };
    Ok(d / h)
}

fn trace_of<R>(schedule: &HSchedule, atol: f64, mut residual: R) -> LimitEstimate
where
    R: FnMut(f64) -> Result<f64>,
{
    let trace = schedule
        .steps()
        .map(|h| (h, residual(h).unwrap_or(f64::INFINITY)))
        .collect();
    LimitEstimate::from_trace(trace, atol)
}

/// Residual trace of one variant over the schedule. Evaluation failures
/// count as an infinite residual.
pub fn limit_estimate(
    f: &IntervalFn,
    t0: f64,
    a: Interval,
    variant: LimitVariant,
    schedule: &HSchedule,
    atol: f64,
) -> LimitEstimate {
    trace_of(schedule, atol, |h| metric_residual(f, t0, a, variant, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    H1,
    H2,
    #[serde(rename = "singleton-multi")]
    SingletonMulti,
    /// Exactly one of the mixed pairs `D3`/`D4` holds.
    #[serde(rename = "mixed")]
    Mixed,
    #[serde(rename = "left-only")]
    LeftOnly,
    #[serde(rename = "right-only")]
    RightOnly,
    #[serde(rename = "none")]
    None,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::H1 => "H1",
            Classification::H2 => "H2",
            Classification::SingletonMulti => "singleton-multi",
            Classification::Mixed => "mixed",
            Classification::LeftOnly => "left-only",
            Classification::RightOnly => "right-only",
            Classification::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariantFlag {
    pub verdict: Verdict,
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeReport {
    pub t0: f64,
    pub left: Option<Interval>,
    pub right: Option<Interval>,
    pub derivative: Option<Interval>,
    /// Endpoint-formula gH-derivative, when it stabilized.
    pub gh_value: Option<Interval>,
    /// `H(derivative, gh_value)`.
    pub consistency: Option<f64>,
    pub variants: BTreeMap<LimitVariant, VariantFlag>,
    pub combos: BTreeMap<Combo, bool>,
    pub classification: Classification,
    /// A pair that forces a singleton holds with a wide derivative.
    pub singleton_conflict: bool,
    #[serde(skip)]
    pub traces: BTreeMap<LimitVariant, LimitEstimate>,
}

impl DerivativeReport {
    pub fn holds(&self, combo: Combo) -> bool {
        self.combos.get(&combo).copied().unwrap_or(false)
    }

    pub fn combo_count(&self) -> usize {
        self.combos.values().filter(|&&b| b).count()
    }

    pub fn verdict(&self, variant: LimitVariant) -> Option<Verdict> {
        self.variants.get(&variant).map(|v| v.verdict)
    }

    pub fn is_differentiable(&self) -> bool {
        self.derivative.is_some()
    }
}

fn average(a: Interval, b: Interval) -> Result<Interval> {
    Interval::new(0.5 * (a.lo() + b.lo()), 0.5 * (a.hi() + b.hi()))
}

/// Full classification of `F` at `t0`.
pub fn classify_point(f: &IntervalFn, t0: f64, cfg: &DiffConfig) -> Result<DerivativeReport> {
    f.eval(t0)?;
    let mut variants = BTreeMap::new();
    let mut traces = BTreeMap::new();
    let mut one_sided = [None, None];
    let mut admissible = [false, false];

    for side in [Side::Left, Side::Right] {
        let Some(candidate) = candidates::side_candidate(f, t0, side, cfg) else {
            continue;
        };
        admissible[side as usize] = true;
        let Ok(a) = candidate else {
            continue;
        };
        let mut any = false;
        for variant in LimitVariant::ALL.into_iter().filter(|v| v.side() == side) {
            let est = limit_estimate(f, t0, a, variant, &cfg.schedule, cfg.atol);
            any |= est.verdict.converges();
            variants.insert(
                variant,
                VariantFlag {
                    verdict: est.verdict,
                    floor: est.floor,
                },
            );
            traces.insert(variant, est);
        }
        if any {
            one_sided[side as usize] = Some(a);
        }
    }
    let [left, right] = one_sided;

    let derivative = match (left, right, admissible) {
        (Some(l), Some(r), _) if l.hausdorff(&r) <= cfg.match_tol => Some(average(l, r)?),
        // at an end of the domain only the one-sided derivative exists
        (Some(l), None, [true, false]) => Some(l),
        (None, Some(r), [false, true]) => Some(r),
        _ => None,
    };

    let both_sides = left.is_some() && right.is_some() && derivative.is_some();
    let converged = |v: LimitVariant| {
        variants
            .get(&v)
            .is_some_and(|f: &VariantFlag| f.verdict.converges())
    };
    let combos: BTreeMap<Combo, bool> = Combo::ALL
        .into_iter()
        .map(|c| {
            let (r, l) = c.variants();
            (c, both_sides && converged(r) && converged(l))
        })
        .collect();
    let count = combos.values().filter(|&&b| b).count();
    let holds = |c: Combo| combos[&c];

    let classification = if both_sides {
        if count >= 2 {
            Classification::SingletonMulti
        } else if holds(Combo::D1) {
            Classification::H1
        } else if holds(Combo::D2) {
            Classification::H2
        } else if holds(Combo::D3) || holds(Combo::D4) {
            Classification::Mixed
        } else {
            Classification::None
        }
    } else {
        match (left, right) {
            (Some(_), None) => Classification::LeftOnly,
            (None, Some(_)) => Classification::RightOnly,
            _ => Classification::None,
        }
    };

    let forced_singleton = count >= 2 || classification == Classification::Mixed;
    let singleton_conflict =
        forced_singleton && derivative.is_some_and(|d| d.width() > cfg.singleton_tol);

    let gh_value = gh_derivative(f, t0, cfg).ok().and_then(|g| g.formula.value);
    let consistency = match (derivative, gh_value) {
        (Some(d), Some(g)) => Some(d.hausdorff(&g)),
        _ => None,
    };

    Ok(DerivativeReport {
        t0,
        left,
        right,
        derivative,
        gh_value,
        consistency,
        variants,
        combos,
        classification,
        singleton_conflict,
        traces,
    })
}

/// Residual traces of the three symmetric limits at an interior point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricResiduals {
    pub s1: LimitEstimate,
    pub s2: LimitEstimate,
    pub s3: LimitEstimate,
}

pub fn symmetric_residuals(
    f: &IntervalFn,
    t0: f64,
    a: Interval,
    cfg: &DiffConfig,
) -> Result<SymmetricResiduals> {
    f.eval(t0)?;
    let h0 = cfg.schedule.h0();
    if !(f.side_admissible(t0, Side::Left, h0) && f.side_admissible(t0, Side::Right, h0)) {
        return Err(Error::OutsideDomain {
            t: t0,
            domain: f.domain().to_string(),
        });
    }
    let s1 = trace_of(&cfg.schedule, cfg.atol, |h| {
        Ok(f.eval(t0 + h)?
            .hausdorff(&f.eval(t0 - h)?.add(a.scale(2.0 * h)?)?)
            / h)
    });
    let s2 = trace_of(&cfg.schedule, cfg.atol, |h| {
        Ok(f.eval(t0 - h)?
            .hausdorff(&f.eval(t0 + h)?.add(a.scale(-2.0 * h)?)?)
            / h)
    });
    let s3 = trace_of(&cfg.schedule, cfg.atol, |h| {
        let plus = f.eval(t0 + h)?.add(a.scale(-h)?)?;
        let minus = f.eval(t0 - h)?.add(a.scale(h)?)?;
        Ok(plus.hausdorff(&minus) / h)
    });
    Ok(SymmetricResiduals { s1, s2, s3 })
}
