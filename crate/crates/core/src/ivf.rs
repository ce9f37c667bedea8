//! Interval-valued functions `F(t) = [f⁻(t), f⁺(t)]`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::limit::{HSchedule, LimitEstimate};

/// Endpoint callable.
pub type Endpoint = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One-sided analytic derivative of an endpoint: `d(t, side)`.
pub type EndpointDerivative = Arc<dyn Fn(f64, Side) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Approach {
    Left,
    Right,
    Both,
}

/// A real interval, possibly unbounded or open at either end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Domain {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Domain {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Domain {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn real_line() -> Self {
        Domain::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, t: f64) -> bool {
        if !t.is_finite() {
            return false;
        }
        let above = if self.lo_closed {
            t >= self.lo
        } else {
            t > self.lo
        };
        let below = if self.hi_closed {
            t <= self.hi
        } else {
            t < self.hi
        };
        above && below
    }

    /// True when `t` is an included endpoint of the domain.
    pub fn is_boundary(&self, t: f64) -> bool {
        (self.lo_closed && t == self.lo) || (self.hi_closed && t == self.hi)
    }

    pub fn intersect(&self, other: &Domain) -> Result<Domain> {
        let (lo, lo_closed) = if self.lo > other.lo {
            (self.lo, self.lo_closed)
        } else if other.lo > self.lo {
            (other.lo, other.lo_closed)
        } else {
            (self.lo, self.lo_closed && other.lo_closed)
        };
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        let empty = lo > hi || (lo == hi && !(lo_closed && hi_closed));
        if empty {
            return Err(Error::EmptyDomain);
        }
        Ok(Domain {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// An interval-valued function on a real domain.
///
/// Endpoint callables must be deterministic. `f_lo(t) <= f_hi(t)` is
/// checked on every evaluation; a violation is an error, never repaired.
#[derive(Clone)]
pub struct IntervalFn {
    name: String,
    domain: Domain,
    f_lo: Endpoint,
    f_hi: Endpoint,
    derivatives: Option<(EndpointDerivative, EndpointDerivative)>,
}

impl fmt::Debug for IntervalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntervalFn")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("analytic_derivatives", &self.derivatives.is_some())
            .finish()
    }
}

impl IntervalFn {
    pub fn new<L, H>(name: impl Into<String>, domain: Domain, f_lo: L, f_hi: H) -> Self
    where
        L: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        IntervalFn {
            name: name.into(),
            domain,
            f_lo: Arc::new(f_lo),
            f_hi: Arc::new(f_hi),
            derivatives: None,
        }
    }

    /// Attaches one-sided analytic derivatives of both endpoints.
    pub fn with_derivatives<L, H>(mut self, d_lo: L, d_hi: H) -> Self
    where
        L: Fn(f64, Side) -> f64 + Send + Sync + 'static,
        H: Fn(f64, Side) -> f64 + Send + Sync + 'static,
    {
        self.derivatives = Some((Arc::new(d_lo), Arc::new(d_hi)));
        self
    }

    /// Constant function `C` on `domain`.
    pub fn constant(name: impl Into<String>, domain: Domain, c: Interval) -> Self {
        let (lo, hi) = (c.lo(), c.hi());
        IntervalFn::new(name, domain, move |_| lo, move |_| hi)
            .with_derivatives(|_, _| 0.0, |_, _| 0.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    /// Raw endpoint values, without any checks.
    pub fn endpoints(&self, t: f64) -> (f64, f64) {
        ((self.f_lo)(t), (self.f_hi)(t))
    }

    pub fn lo_fn(&self) -> Endpoint {
        Arc::clone(&self.f_lo)
    }

    pub fn hi_fn(&self) -> Endpoint {
        Arc::clone(&self.f_hi)
    }

    /// One-sided analytic endpoint derivatives `(d⁻, d⁺)`, if provided.
    pub fn analytic_derivative(&self, t: f64, side: Side) -> Option<(f64, f64)> {
        self.derivatives
            .as_ref()
            .map(|(dl, dh)| (dl(t, side), dh(t, side)))
    }

    pub fn eval(&self, t: f64) -> Result<Interval> {
        if !self.domain.contains(t) {
            return Err(Error::OutsideDomain {
                t,
                domain: self.domain.to_string(),
            });
        }
        let (lo, hi) = self.endpoints(t);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite { lo, hi });
        }
        if lo > hi {
            return Err(Error::EndpointInversion { t, lo, hi });
        }
        Interval::new(lo, hi)
    }

    /// `(F ⊖ G)(t) = F(t) ⊖ G(t)` on the common domain.
    pub fn gh_minus(&self, other: &IntervalFn) -> Result<IntervalFn> {
        let domain = self.domain.intersect(&other.domain)?;
        let (fl, fh, gl, gh) = (self.lo_fn(), self.hi_fn(), other.lo_fn(), other.hi_fn());
        let (fl2, fh2, gl2, gh2) = (fl.clone(), fh.clone(), gl.clone(), gh.clone());
        Ok(IntervalFn::new(
            format!("({})⊖({})", self.name, other.name),
            domain,
            move |t| (fl(t) - gl(t)).min(fh(t) - gh(t)),
            move |t| (fl2(t) - gl2(t)).max(fh2(t) - gh2(t)),
        ))
    }

    /// Pointwise Minkowski sum on the common domain.
    pub fn plus(&self, other: &IntervalFn) -> Result<IntervalFn> {
        let domain = self.domain.intersect(&other.domain)?;
        let (fl, fh, gl, gh) = (self.lo_fn(), self.hi_fn(), other.lo_fn(), other.hi_fn());
        Ok(IntervalFn::new(
            format!("({})+({})", self.name, other.name),
            domain,
            move |t| fl(t) + gl(t),
            move |t| fh(t) + gh(t),
        ))
    }

    /// Pointwise scalar multiple `λF`.
    pub fn scaled(&self, lambda: f64) -> IntervalFn {
        let (fl, fh) = (self.lo_fn(), self.hi_fn());
        let name = format!("{lambda}·({})", self.name);
        if lambda >= 0.0 {
            IntervalFn::new(
                name,
                self.domain,
                move |t| lambda * fl(t),
                move |t| lambda * fh(t),
            )
        } else {
            IntervalFn::new(
                name,
                self.domain,
                move |t| lambda * fh(t),
                move |t| lambda * fl(t),
            )
        }
    }

    /// Evaluation points `t0 ± h` along the schedule on one side, stopping at
    /// the first point outside the domain.
    fn approach(&self, t0: f64, side: Side, sched: &HSchedule) -> Result<Vec<(f64, Interval)>> {
        let sign = match side {
            Side::Left => -1.0,
            Side::Right => 1.0,
        };
        let mut out = Vec::with_capacity(sched.count());
        for h in sched.steps() {
            let t = t0 + sign * h;
            if !self.domain.contains(t) {
                return Err(Error::OutsideDomain {
                    t,
                    domain: self.domain.to_string(),
                });
            }
            out.push((h, self.eval(t)?));
        }
        Ok(out)
    }

    /// Limit of `F(t)` as `t → t0` from the requested side(s).
    pub fn limit_at(
        &self,
        t0: f64,
        approach: Approach,
        sched: &HSchedule,
        atol: f64,
    ) -> Result<Interval> {
        let one_side = |side| -> Result<Interval> {
            let points = self.approach(t0, side, sched)?;
            let n = points.len();
            let extrapolated = if n >= 2 {
                let r = sched.ratio();
                let (prev, last) = (points[n - 2].1, points[n - 1].1);
                let lo = (last.lo() - r * prev.lo()) / (1.0 - r);
                let hi = (last.hi() - r * prev.hi()) / (1.0 - r);
                Interval::hull_of(lo, hi).map_err(|_| Error::NoLimit { t0 })?
            } else {
                points[0].1
            };
            let trace = points
                .iter()
                .map(|&(h, v)| (h, v.hausdorff(&extrapolated)))
                .collect();
            if LimitEstimate::from_trace(trace, atol).verdict.converges() {
                Ok(extrapolated)
            } else {
                Err(Error::NoLimit { t0 })
            }
        };
        match approach {
            Approach::Left => one_side(Side::Left),
            Approach::Right => one_side(Side::Right),
            Approach::Both => {
                let l = one_side(Side::Left)?;
                let r = one_side(Side::Right)?;
                if l.hausdorff(&r) > atol {
                    return Err(Error::NoLimit { t0 });
                }
                Interval::new(0.5 * (l.lo() + r.lo()), 0.5 * (l.hi() + r.hi()))
            }
        }
    }

    /// Residual trace `max± H(F(t0 ± h), F(t0))` over the admissible sides.
    pub fn continuity_probe(&self, t0: f64, sched: &HSchedule, atol: f64) -> Result<LimitEstimate> {
        let at = self.eval(t0)?;
        let sides: Vec<Side> = [Side::Left, Side::Right]
            .into_iter()
            .filter(|&s| self.side_admissible(t0, s, sched.h0()))
            .collect();
        let mut trace = Vec::with_capacity(sched.count());
        for h in sched.steps() {
            let mut r: f64 = 0.0;
            for &side in &sides {
                let t = match side {
                    Side::Left => t0 - h,
                    Side::Right => t0 + h,
                };
                r = r.max(self.eval(t)?.hausdorff(&at));
            }
            trace.push((h, r));
        }
        Ok(LimitEstimate::from_trace(trace, atol))
    }

    /// True when `t0 ∓ h` stays in the domain for every step up to `h_max`.
    pub fn side_admissible(&self, t0: f64, side: Side, h_max: f64) -> bool {
        let t = match side {
            Side::Left => t0 - h_max,
            Side::Right => t0 + h_max,
        };
        self.domain.contains(t0) && self.domain.contains(t)
    }

    /// `max ‖F(t)‖` over a uniform grid on `[a, b]`. Under-approximates the
    /// supremum between grid nodes.
    pub fn sup_norm(&self, a: f64, b: f64, grid_size: usize) -> Result<f64> {
        if grid_size < 2 {
            return Err(Error::InvalidConfig("grid_size must be at least 2".into()));
        }
        if !(a <= b) {
            return Err(Error::InvalidConfig(format!("need a <= b, got [{a}, {b}]")));
        }
        let mut best: f64 = 0.0;
        for k in 0..grid_size {
            let t = a + (b - a) * k as f64 / (grid_size - 1) as f64;
            best = best.max(self.eval(t)?.norm());
        }
        Ok(best)
    }
}
