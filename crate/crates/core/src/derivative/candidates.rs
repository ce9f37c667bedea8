//! Endpoint derivative estimates and the gH-derivative.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::ivf::{Endpoint, IntervalFn, Side};
use crate::limit::LimitEstimate;

use super::DiffConfig;

/// Base steps tried for one-sided finite differences, coarse to fine.
const FD_STEPS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

/// Relative agreement required between Richardson estimates at two
/// consecutive base steps.
const FD_STABLE: f64 = 1e-8;

fn one_sided_difference(f: &Endpoint, t0: f64, f0: f64, side: Side, h: f64) -> f64 {
    match side {
        Side::Left => (f0 - f(t0 - h)) / h,
        Side::Right => (f(t0 + h) - f0) / h,
    }
}

/// One-sided difference with two levels of Richardson extrapolation
/// (error `O(h³)`), built from steps `h`, `h/2`, `h/4`.
fn richardson(f: &Endpoint, t0: f64, f0: f64, side: Side, h: f64) -> f64 {
    let d1 = one_sided_difference(f, t0, f0, side, h);
    let d2 = one_sided_difference(f, t0, f0, side, h / 2.0);
    let d4 = one_sided_difference(f, t0, f0, side, h / 4.0);
    let r1 = 2.0 * d2 - d1;
    let r2 = 2.0 * d4 - d2;
    (4.0 * r2 - r1) / 3.0
}

/// One-sided derivative of a scalar endpoint by extrapolated finite
/// differences. Fails when no two consecutive base steps agree.
pub fn endpoint_derivative(f: &Endpoint, fun: &IntervalFn, t0: f64, side: Side) -> Result<f64> {
    let domain = fun.domain();
    let f0 = f(t0);
    let estimates: Vec<f64> = FD_STEPS
        .iter()
        .copied()
        .filter(|&h| {
            let t = match side {
                Side::Left => t0 - h,
                Side::Right => t0 + h,
            };
            domain.contains(t)
        })
        .map(|h| richardson(f, t0, f0, side, h))
        .collect();
    for pair in estimates.windows(2) {
        let (coarse, fine) = (pair[0], pair[1]);
        if coarse.is_finite()
            && fine.is_finite()
            && (coarse - fine).abs() <= FD_STABLE * fine.abs().max(1.0)
        {
            return Ok(fine);
        }
    }
    Err(Error::DerivativeDiverged { t0 })
}

/// One-sided derivatives `(d⁻, d⁺)` of both endpoints; analytic when the
/// function carries them.
pub fn endpoint_derivatives(f: &IntervalFn, t0: f64, side: Side) -> Result<(f64, f64)> {
    if let Some(d) = f.analytic_derivative(t0, side) {
        return Ok(d);
    }
    let lo = endpoint_derivative(&f.lo_fn(), f, t0, side)?;
    let hi = endpoint_derivative(&f.hi_fn(), f, t0, side)?;
    Ok((lo, hi))
}

/// Candidate one-sided derivatives `[min(d⁻, d⁺), max(d⁻, d⁺)]`.
///
/// A side is `None` when `t0` sits too close to that end of the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidates {
    pub left: Option<Interval>,
    pub right: Option<Interval>,
}

pub(crate) fn side_candidate(
    f: &IntervalFn,
    t0: f64,
    side: Side,
    cfg: &DiffConfig,
) -> Option<Result<Interval>> {
    if !f.side_admissible(t0, side, cfg.schedule.h0()) {
        return None;
    }
    Some(
        endpoint_derivatives(f, t0, side).and_then(|(a, b)| {
            Interval::hull_of(a, b).map_err(|_| Error::DerivativeDiverged { t0 })
        }),
    )
}

pub fn candidate_derivatives(f: &IntervalFn, t0: f64, cfg: &DiffConfig) -> Result<Candidates> {
    f.eval(t0)?;
    let left = side_candidate(f, t0, Side::Left, cfg).transpose()?;
    let right = side_candidate(f, t0, Side::Right, cfg).transpose()?;
    Ok(Candidates { left, right })
}

/// A two-sided value assembled from one-sided estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhEstimate {
    /// Present only when the estimate stabilized.
    pub value: Option<Interval>,
    pub left: Option<Interval>,
    pub right: Option<Interval>,
    pub stable: bool,
}

impl GhEstimate {
    fn combine(left: Option<Interval>, right: Option<Interval>, sides_ok: bool, tol: f64) -> Self {
        let value = match (left, right) {
            _ if !sides_ok => None,
            (Some(l), Some(r)) if l.hausdorff(&r) <= tol => {
                Interval::new(0.5 * (l.lo() + r.lo()), 0.5 * (l.hi() + r.hi())).ok()
            }
            (Some(l), None) => Some(l),
            (None, Some(r)) => Some(r),
            _ => None,
        };
        GhEstimate {
            value,
            left,
            right,
            stable: value.is_some(),
        }
    }
}

/// The gH-derivative two ways: from endpoint derivatives, and as the limit
/// of the difference quotient `(F(t0 + h) ⊖ F(t0)) / h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GhDerivative {
    pub formula: GhEstimate,
    pub quotient: GhEstimate,
}

pub fn gh_derivative(f: &IntervalFn, t0: f64, cfg: &DiffConfig) -> Result<GhDerivative> {
    f.eval(t0)?;
    let sides: Vec<Side> = [Side::Left, Side::Right]
        .into_iter()
        .filter(|&s| f.side_admissible(t0, s, cfg.schedule.h0()))
        .collect();
    if sides.is_empty() {
        return Err(Error::OutsideDomain {
            t: t0,
            domain: f.domain().to_string(),
        });
    }

    // Endpoint formula. Endpoints must agree from both sides to be
    // differentiable at t0.
    let mut one_sided = [None, None];
    for &side in &sides {
        let (a, b) = endpoint_derivatives(f, t0, side)?;
        one_sided[side as usize] = Some((a, b));
    }
    let endpoint_match = match (one_sided[0], one_sided[1]) {
        (Some((a, b)), Some((c, d))) => {
            (a - c).abs() <= cfg.match_tol && (b - d).abs() <= cfg.match_tol
        }
        _ => true,
    };
    let to_interval = |d: Option<(f64, f64)>| d.and_then(|(a, b)| Interval::hull_of(a, b).ok());
    let mut formula = GhEstimate::combine(
        to_interval(one_sided[0]),
        to_interval(one_sided[1]),
        endpoint_match,
        cfg.match_tol,
    );
    if let (true, Some((a, b)), Some((c, d))) = (endpoint_match, one_sided[0], one_sided[1]) {
        formula.value = Interval::hull_of(0.5 * (a + c), 0.5 * (b + d)).ok();
    }

    // Difference quotient.
    let mut quotient_sides = [None, None];
    let mut quotient_ok = true;
    for &side in &sides {
        match quotient_limit(f, t0, side, cfg) {
            Some(q) => quotient_sides[side as usize] = Some(q),
            None => quotient_ok = false,
        }
    }
    let quotient = GhEstimate::combine(
        quotient_sides[0],
        quotient_sides[1],
        quotient_ok,
        cfg.match_tol,
    );
    Ok(GhDerivative { formula, quotient })
}

/// Extrapolated one-sided limit of the gH difference quotient, or `None`
/// when the quotient trace does not settle.
fn quotient_limit(f: &IntervalFn, t0: f64, side: Side, cfg: &DiffConfig) -> Option<Interval> {
    let at = f.eval(t0).ok()?;
    let mut quotients = Vec::with_capacity(cfg.schedule.count());
    for h in cfg.schedule.steps() {
        let q = match side {
            Side::Right => f.eval(t0 + h).ok()?.gh(at).ok()?,
            Side::Left => at.gh(f.eval(t0 - h).ok()?).ok()?,
        };
        quotients.push((h, q.scale(1.0 / h).ok()?));
    }
    let n = quotients.len();
    let limit = if n >= 2 {
        let r = cfg.schedule.ratio();
        let (prev, last) = (quotients[n - 2].1, quotients[n - 1].1);
        Interval::hull_of(
            (last.lo() - r * prev.lo()) / (1.0 - r),
            (last.hi() - r * prev.hi()) / (1.0 - r),
        )
        .ok()?
    } else {
        quotients[0].1
    };
    let trace = quotients
        .iter()
        .map(|&(h, q)| (h, q.hausdorff(&limit)))
        .collect();
    LimitEstimate::from_trace(trace, cfg.atol)
        .verdict
        .converges()
        .then_some(limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivf::Domain;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    // No analytic derivatives attached: exercises the finite differences.
    fn abs_width() -> IntervalFn {
        IntervalFn::new("abs", Domain::real_line(), |_| 0.0, f64::abs)
    }

    fn exp_pair() -> IntervalFn {
        IntervalFn::new(
            "exp",
            Domain::real_line(),
            |t: f64| (-t).exp(),
            |t: f64| 2.0 * (-t).exp(),
        )
    }

    fn sym_square() -> IntervalFn {
        IntervalFn::new("sq", Domain::real_line(), |t| -t * t, |t| t * t)
    }

    #[test]
    fn abs_width_candidates_at_kink() {
        let c = candidate_derivatives(&abs_width(), 0.0, &DiffConfig::default()).unwrap();
        assert_eq!(c.left.unwrap(), iv(-1.0, 0.0));
        assert_eq!(c.right.unwrap(), iv(0.0, 1.0));
    }

    #[test]
    fn exp_pair_candidates() {
        let c = candidate_derivatives(&exp_pair(), 0.0, &DiffConfig::default()).unwrap();
        assert!(c.left.unwrap().hausdorff(&iv(-2.0, -1.0)) < 1e-8);
        assert!(c.right.unwrap().hausdorff(&iv(-2.0, -1.0)) < 1e-8);
    }

    #[test]
    fn constant_candidates() {
        let f = IntervalFn::new("c", Domain::real_line(), |_| -1.0, |_| 4.0);
        let c = candidate_derivatives(&f, 2.5, &DiffConfig::default()).unwrap();
        assert_eq!(c.left.unwrap(), Interval::ZERO);
        assert_eq!(c.right.unwrap(), Interval::ZERO);
    }

    #[test]
    fn boundary_has_one_side() {
        let f = IntervalFn::new("f", Domain::closed(0.0, 1.0), |t| t, |t| 2.0 * t);
        let c = candidate_derivatives(&f, 0.0, &DiffConfig::default()).unwrap();
        assert!(c.left.is_none());
        assert!(c.right.unwrap().hausdorff(&iv(1.0, 2.0)) < 1e-9);
    }

    #[test]
    fn divergent_endpoint_is_an_error() {
        let f = IntervalFn::new(
            "osc",
            Domain::real_line(),
            |_| 0.0,
            |t: f64| 1.0 + t.abs().sqrt() * (1.0 / t.abs().max(1e-300)).sin().abs(),
        );
        assert!(matches!(
            candidate_derivatives(&f, 0.0, &DiffConfig::default()),
            Err(Error::DerivativeDiverged { .. })
        ));
    }

    #[test]
    fn gh_derivative_two_routes() {
        let cfg = DiffConfig::default();
        let g = gh_derivative(&sym_square(), 1.0, &cfg).unwrap();
        let f = g.formula.value.unwrap();
        let q = g.quotient.value.unwrap();
        assert!(f.hausdorff(&iv(-2.0, 2.0)) < 1e-8);
        assert!(q.hausdorff(&f) < 1e-6);

        let g = gh_derivative(&exp_pair(), 0.0, &cfg).unwrap();
        assert!(g.formula.value.unwrap().hausdorff(&iv(-2.0, -1.0)) < 1e-8);
        assert!(g.quotient.value.unwrap().hausdorff(&iv(-2.0, -1.0)) < 1e-6);

        let c = IntervalFn::new("c", Domain::real_line(), |_| 1.0, |_| 3.0);
        let g = gh_derivative(&c, 0.0, &cfg).unwrap();
        assert_eq!(g.formula.value.unwrap(), Interval::ZERO);
        assert_eq!(g.quotient.value.unwrap(), Interval::ZERO);
    }

    #[test]
    fn gh_derivative_fails_at_kink() {
        let g = gh_derivative(&abs_width(), 0.0, &DiffConfig::default()).unwrap();
        assert!(!g.formula.stable);
        assert!(!g.quotient.stable);
        assert!(g.quotient.right.unwrap().hausdorff(&iv(0.0, 1.0)) < 1e-12);
        assert!(g.quotient.left.unwrap().hausdorff(&iv(-1.0, 0.0)) < 1e-12);
    }
}
