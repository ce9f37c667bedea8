//! Riemann integration of interval-valued functions, primitives and the
//! two Newton–Leibniz reconstructions.

pub(crate) mod gauss;
mod hull;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::derivative::{classify_point, Classification, DiffConfig};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::ivf::{Domain, IntervalFn, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TagRule {
    Left,
    Right,
    Midpoint,
}

impl TagRule {
    fn tag(self, lo: f64, hi: f64) -> f64 {
        match self {
            TagRule::Left => lo,
            TagRule::Right => hi,
            TagRule::Midpoint => 0.5 * (lo + hi),
        }
    }
}

/// Tagged partition `t0 < t1 < ... < tn` with `ξ_i ∈ [t_{i-1}, t_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    nodes: Vec<f64>,
    tags: Vec<f64>,
}

impl Partition {
    pub fn new(nodes: Vec<f64>, tags: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || tags.len() != nodes.len() - 1 {
            return Err(Error::InvalidConfig(format!(
                "partition needs n+1 nodes and n tags, got {} nodes and {} tags",
                nodes.len(),
                tags.len()
            )));
        }
        if nodes.iter().any(|t| !t.is_finite()) || nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "partition nodes must be finite and strictly increasing".into(),
            ));
        }
        for (i, &xi) in tags.iter().enumerate() {
            if !(nodes[i] <= xi && xi <= nodes[i + 1]) {
                return Err(Error::InvalidConfig(format!(
                    "tag {xi} lies outside cell [{}, {}]",
                    nodes[i],
                    nodes[i + 1]
                )));
            }
        }
        Ok(Partition { nodes, tags })
    }

    pub fn uniform(a: f64, b: f64, cells: usize, rule: TagRule) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidConfig(
                "partition needs at least one cell".into(),
            ));
        }
        let step = (b - a) / cells as f64;
        let mut nodes: Vec<f64> = (0..=cells).map(|i| a + i as f64 * step).collect();
        nodes[cells] = b;
        let tags = nodes.windows(2).map(|w| rule.tag(w[0], w[1])).collect();
        Partition::new(nodes, tags)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn tags(&self) -> &[f64] {
        &self.tags
    }

    pub fn cells(&self) -> usize {
        self.tags.len()
    }

    pub fn mesh(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// CSV with header `node,tag`; the final node has an empty tag.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node,tag\n");
        for (i, node) in self.nodes.iter().enumerate() {
            match self.tags.get(i) {
                Some(tag) => writeln!(out, "{node},{tag}").unwrap(),
                None => writeln!(out, "{node},").unwrap(),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub initial_cells: usize,
    pub max_doublings: u32,
    /// Hausdorff distance between successive refinements.
    pub tol: f64,
    pub tag_rule: TagRule,
}

impl QuadConfig {
    pub fn new(
        initial_cells: usize,
        max_doublings: u32,
        tol: f64,
        tag_rule: TagRule,
    ) -> Result<Self> {
        if initial_cells == 0 || max_doublings == 0 {
            return Err(Error::InvalidConfig(
                "initial_cells and max_doublings must be positive".into(),
            ));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tol must be positive, got {tol}"
            )));
        }
        if max_doublings > 30 {
            return Err(Error::InvalidConfig(format!(
                "max_doublings {max_doublings} exceeds 30"
            )));
        }
        Ok(QuadConfig {
            initial_cells,
            max_doublings,
            tol,
            tag_rule,
        })
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            initial_cells: 4,
            max_doublings: 20,
            tol: 1e-8,
            tag_rule: TagRule::Midpoint,
        }
    }
}

/// `Σ (t_i − t_{i−1}) F(ξ_i)` as a Minkowski sum.
pub fn riemann_sum(f: &IntervalFn, p: &Partition) -> Result<Interval> {
    let mut sum = Interval::ZERO;
    for (w, &xi) in p.nodes.windows(2).zip(&p.tags) {
        sum = sum.add(f.eval(xi)?.scale(w[1] - w[0])?)?;
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: Interval,
    /// Hausdorff distance between the last two refinements, or to the
    /// left/right-tag average when that is larger.
    pub err: f64,
    pub cells: usize,
}

fn check_range(domain: &Domain, a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidConfig(format!(
            "integration range [{a}, {b}] must be finite with a <= b"
        )));
    }
    for t in [a, b] {
        if !domain.contains(t) {
            return Err(Error::OutsideDomain {
                t,
                domain: domain.to_string(),
            });
        }
    }
    Ok(())
}

/// Refines uniform partitions by doubling until successive sums are within
/// `cfg.tol`.
///
/// With midpoint tags a kink in the integrand keeps the same error across
/// nested refinements (it depends only on the distance to the nearest node),
/// so successive sums can agree long before they are accurate. Midpoint
/// convergence is therefore confirmed against the average of the left- and
/// right-tagged sums on the same partition, whose gap to the midpoint sum
/// bounds the error in both the smooth and the kinked case.
fn refine<T: Copy>(
    a: f64,
    b: f64,
    cfg: &QuadConfig,
    zero: T,
    sum: impl Fn(&Partition) -> Result<T>,
    average: impl Fn(T, T) -> Result<T>,
    dist: impl Fn(&T, &T) -> f64,
) -> Result<(T, f64, usize)> {
    if a == b {
        return Ok((zero, 0.0, 0));
    }
    let mut cells = cfg.initial_cells;
    let mut prev = sum(&Partition::uniform(a, b, cells, cfg.tag_rule)?)?;
    let mut err = f64::INFINITY;
    for _ in 0..cfg.max_doublings {
        cells *= 2;
        let next = sum(&Partition::uniform(a, b, cells, cfg.tag_rule)?)?;
        err = dist(&prev, &next);
        prev = next;
        if err <= cfg.tol && cfg.tag_rule == TagRule::Midpoint {
            let left = sum(&Partition::uniform(a, b, cells, TagRule::Left)?)?;
            let right = sum(&Partition::uniform(a, b, cells, TagRule::Right)?)?;
            err = err.max(dist(&next, &average(left, right)?));
        }
        if err <= cfg.tol {
            return Ok((prev, err, cells));
        }
    }
    Err(Error::DidNotConverge {
        doublings: cfg.max_doublings,
        err,
    })
}

/// `∫ₐᵇ F`. `a == b` gives θ; `a > b` is rejected.
pub fn integrate(f: &IntervalFn, a: f64, b: f64, cfg: &QuadConfig) -> Result<IntegralResult> {
    check_range(&f.domain(), a, b)?;
    let (value, err, cells) = refine(
        a,
        b,
        cfg,
        Interval::ZERO,
        |p| riemann_sum(f, p),
        |x, y| x.add(y)?.scale(0.5),
        |x, y| x.hausdorff(y),
    )?;
    Ok(IntegralResult { value, err, cells })
}

/// Scalar counterpart of [`integrate`] under the same refinement policy.
pub fn integrate_scalar(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<(f64, f64)> {
    check_range(&Domain::real_line(), a, b)?;
    let sum = |p: &Partition| {
        let s: f64 = p
            .nodes
            .windows(2)
            .zip(&p.tags)
            .map(|(w, &xi)| (w[1] - w[0]) * f(xi))
            .sum();
        if s.is_finite() {
            Ok(s)
        } else {
            Err(Error::RangeOverflow)
        }
    };
    let (value, err, _) = refine(
        a,
        b,
        cfg,
        0.0,
        sum,
        |x, y| Ok(0.5 * (x + y)),
        |x, y| (x - y).abs(),
    )?;
    Ok((value, err))
}

/// Width of the fixed panels behind a primitive.
const PRIMITIVE_PANEL: f64 = 1.0 / 16.0;

/// Endpoint antiderivatives of `F` from `a`.
///
/// `[a, t]` is covered by whole panels of a grid anchored at `a` plus one
/// partial panel. Whole-panel integrals are cached, so a quadrature error
/// from a kink inside a panel is the same constant for every later `t`
/// instead of a wobble that differencing would amplify.
struct Antiderivative {
    f: IntervalFn,
    a: f64,
    fallback_tol: f64,
    /// `cumulative[k]` holds both endpoint integrals over `[a, a + kΔ]`.
    cumulative: Mutex<Vec<(f64, f64)>>,
    memo: Mutex<HashMap<u64, (f64, f64)>>,
}

impl Antiderivative {
    fn piece(&self, x: f64, y: f64) -> (f64, f64) {
        let (lo, hi) = (self.f.lo_fn(), self.f.hi_fn());
        (
            gauss::integrate(&*lo, x, y, self.fallback_tol),
            gauss::integrate(&*hi, x, y, self.fallback_tol),
        )
    }

    fn node(&self, k: usize) -> f64 {
        self.a + k as f64 * PRIMITIVE_PANEL
    }

    fn whole_panels(&self, k: usize) -> (f64, f64) {
        let mut cum = self.cumulative.lock().unwrap();
        while cum.len() <= k {
            let j = cum.len() - 1;
            let (lo, hi) = cum[j];
            let (dl, dh) = self.piece(self.node(j), self.node(j + 1));
            cum.push((lo + dl, hi + dh));
        }
        cum[k]
    }

    fn at(&self, t: f64) -> (f64, f64) {
        if let Some(&v) = self.memo.lock().unwrap().get(&t.to_bits()) {
            return v;
        }
        let v = if t < self.a || !self.f.domain().contains(t) {
            (f64::NAN, f64::NAN)
        } else {
            let mut k = ((t - self.a) / PRIMITIVE_PANEL).floor() as usize;
            if self.node(k) > t {
                k -= 1;
            }
            let (lo, hi) = self.whole_panels(k);
            let (dl, dh) = self.piece(self.node(k), t);
            (lo + dl, hi + dh)
        };
        self.memo.lock().unwrap().insert(t.to_bits(), v);
        v
    }
}

/// `G(t) = ∫ₐᵗ F` on `[a, sup dom F]`.
///
/// Endpoints are integrated with composite Gauss–Legendre rather than
/// Riemann sums so that `G` is smooth enough to difference numerically.
/// Points where quadrature fails evaluate to a non-finite error.
pub fn primitive(f: &IntervalFn, a: f64, cfg: &QuadConfig) -> Result<IntervalFn> {
    let dom = f.domain();
    if !dom.contains(a) {
        return Err(Error::OutsideDomain {
            t: a,
            domain: dom.to_string(),
        });
    }
    let domain = Domain {
        lo: a,
        lo_closed: true,
        ..dom
    };
    let anti = Arc::new(Antiderivative {
        f: f.clone(),
        a,
        fallback_tol: cfg.tol,
        cumulative: Mutex::new(vec![(0.0, 0.0)]),
        memo: Mutex::new(HashMap::new()),
    });
    let hi = Arc::clone(&anti);
    Ok(IntervalFn::new(
        format!("∫{}", f.name()),
        domain,
        move |t| anti.at(t).0,
        move |t| hi.at(t).1,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reconstruction {
    pub value: Interval,
    /// `F(t)` evaluated directly.
    pub target: Interval,
    /// `H(value, target)`.
    pub residual: f64,
}

/// Number of interior points probed to confirm the class on a range.
const RANGE_PROBES: usize = 9;
/// Grid size for the derivative when no analytic endpoints are available.
const DERIVATIVE_GRID: usize = 257;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    H1,
    H2,
}

fn check_class(f: &IntervalFn, a: f64, t: f64, mode: Mode, cfg: &DiffConfig) -> Result<()> {
    for k in 1..=RANGE_PROBES {
        let s = a + (t - a) * k as f64 / (RANGE_PROBES + 1) as f64;
        let class = classify_point(f, s, cfg)?.classification;
        let ok = matches!(
            (mode, class),
            (_, Classification::SingletonMulti)
                | (Mode::H1, Classification::H1)
                | (Mode::H2, Classification::H2)
        );
        if !ok {
            let msg = format!("{} is {} at t = {s}", f.name(), class.as_str());
            return Err(match mode {
                Mode::H1 => Error::NotH1OnRange(msg),
                Mode::H2 => Error::NotH2OnRange(msg),
            });
        }
    }
    Ok(())
}

/// `F′` on `[a, t]`, from analytic endpoint derivatives when present and
/// otherwise from classified grid points with linear interpolation.
fn derivative_fn(
    f: &IntervalFn,
    a: f64,
    t: f64,
    mode: Mode,
    cfg: &DiffConfig,
) -> Result<IntervalFn> {
    let domain = Domain::closed(a, t);
    if f.has_analytic_derivatives() {
        let g = f.clone();
        let g2 = f.clone();
        let side = move |s: f64| if s < t { Side::Right } else { Side::Left };
        return Ok(IntervalFn::new(
            format!("{}′", f.name()),
            domain,
            move |s| {
                let (d_lo, d_hi) = g.analytic_derivative(s, side(s)).unwrap();
                d_lo.min(d_hi)
            },
            move |s| {
                let (d_lo, d_hi) = g2.analytic_derivative(s, side(s)).unwrap();
                d_lo.max(d_hi)
            },
        ));
    }
    let n = DERIVATIVE_GRID - 1;
    let mut lo = Vec::with_capacity(DERIVATIVE_GRID);
    let mut hi = Vec::with_capacity(DERIVATIVE_GRID);
    for k in 0..=n {
        let s = a + (t - a) * k as f64 / n as f64;
        let report = classify_point(f, s, cfg)?;
        let d = report.derivative.ok_or_else(|| {
            let msg = format!("{} has no derivative at t = {s}", f.name());
            match mode {
                Mode::H1 => Error::NotH1OnRange(msg),
                Mode::H2 => Error::NotH2OnRange(msg),
            }
        })?;
        lo.push(d.lo());
        hi.push(d.hi());
    }
    let interp = move |ys: &[f64], s: f64| {
        let x = ((s - a) / (t - a) * n as f64).clamp(0.0, n as f64);
        let i = (x.floor() as usize).min(n - 1);
        let w = x - i as f64;
        (1.0 - w) * ys[i] + w * ys[i + 1]
    };
    Ok(IntervalFn::new(
        format!("{}′", f.name()),
        domain,
        move |s| interp(&lo, s),
        move |s| interp(&hi, s),
    ))
}

fn reconstruct(
    f: &IntervalFn,
    a: f64,
    t: f64,
    mode: Mode,
    diff: &DiffConfig,
    quad: &QuadConfig,
) -> Result<Reconstruction> {
    if !(a <= t) {
        return Err(Error::InvalidConfig(format!(
            "reconstruction needs a <= t, got a = {a}, t = {t}"
        )));
    }
    let start = f.eval(a)?;
    let target = f.eval(t)?;
    let value = if a == t {
        start
    } else {
        check_class(f, a, t, mode, diff)?;
        let df = derivative_fn(f, a, t, mode, diff)?;
        let integral = integrate(&df, a, t, quad)?.value;
        match mode {
            Mode::H1 => start.add(integral)?,
            Mode::H2 => start.gh(integral.neg())?,
        }
    };
    Ok(Reconstruction {
        value,
        target,
        residual: value.hausdorff(&target),
    })
}

/// `F(a) + ∫ₐᵗ F′` for functions of the first class on `[a, t]`.
pub fn reconstruct_h1(
    f: &IntervalFn,
    a: f64,
    t: f64,
    diff: &DiffConfig,
    quad: &QuadConfig,
) -> Result<Reconstruction> {
    reconstruct(f, a, t, Mode::H1, diff, quad)
}

/// `F(a) ⊖ (−∫ₐᵗ F′)` for functions of the second class on `[a, t]`.
pub fn reconstruct_h2(
    f: &IntervalFn,
    a: f64,
    t: f64,
    diff: &DiffConfig,
    quad: &QuadConfig,
) -> Result<Reconstruction> {
    reconstruct(f, a, t, Mode::H2, diff, quad)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HullMembership {
    /// `(1/(b−a)) ∫ₐᵇ F`.
    pub mean: Interval,
    pub inside: bool,
    /// Signed distance of `(mean⁻, mean⁺)` to the sampled hull, positive inside.
    pub margin: f64,
}

pub const HULL_SAMPLES: usize = 1000;
pub const HULL_TOL: f64 = 1e-6;

/// Checks that the mean value lies in the convex hull of `{(f⁻(t), f⁺(t))}`.
pub fn hull_membership(f: &IntervalFn, a: f64, b: f64, cfg: &QuadConfig) -> Result<HullMembership> {
    if !(a < b) {
        return Err(Error::InvalidConfig(format!(
            "hull membership needs a < b, got [{a}, {b}]"
        )));
    }
    let mean = integrate(f, a, b, cfg)?.value.scale(1.0 / (b - a))?;
    let mut points = Vec::with_capacity(HULL_SAMPLES);
    for k in 0..HULL_SAMPLES {
        let t = a + (b - a) * k as f64 / (HULL_SAMPLES - 1) as f64;
        let v = f.eval(t.min(b))?;
        points.push((v.lo(), v.hi()));
    }
    let hull = hull::convex_hull(points);
    let margin = hull::signed_distance(&hull, (mean.lo(), mean.hi()));
    Ok(HullMembership {
        mean,
        inside: margin >= -HULL_TOL,
        margin,
    })
}
