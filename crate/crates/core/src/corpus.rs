//! Named reference functions with analytic one-sided endpoint derivatives
//! and expected derivative values.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::derivative::Classification;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::ivf::{Domain, IntervalFn, Side};

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedPoint {
    pub t: f64,
    pub classification: Classification,
    pub derivative: Option<Interval>,
    pub left: Option<Interval>,
    pub right: Option<Interval>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub function: IntervalFn,
    pub expected: Vec<ExpectedPoint>,
    pub notes: &'static str,
    /// Range used for randomized sampling; lies inside the domain.
    pub sample_range: (f64, f64),
    /// Points where an endpoint is not differentiable.
    pub breakpoints: Vec<f64>,
}

impl CorpusEntry {
    /// `n` interior points `a + (k + 1/2)(b − a)/n` of the sample range.
    pub fn sample_points(&self, n: usize) -> Vec<f64> {
        let (a, b) = self.sample_range;
        (0..n)
            .map(|k| a + (k as f64 + 0.5) * (b - a) / n as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegistryItem {
    pub name: &'static str,
    pub formula: &'static str,
    /// Parameter names with their defaults.
    pub params: BTreeMap<&'static str, f64>,
    pub domain: String,
    pub sample_range: (f64, f64),
    pub notes: &'static str,
}

struct Registration {
    name: &'static str,
    formula: &'static str,
    params: &'static [(&'static str, f64)],
    build: fn(&Params) -> Result<CorpusEntry>,
}

const REGISTRY: &[Registration] = &[
    Registration {
        name: "abs_width",
        formula: "[0, |t|]",
        params: &[],
        build: abs_width,
    },
    Registration {
        name: "sym_square",
        formula: "[-t^2, t^2]",
        params: &[],
        build: sym_square,
    },
    Registration {
        name: "exp_pair",
        formula: "[e^-t, 2e^-t]",
        params: &[],
        build: exp_pair,
    },
    Registration {
        name: "sin_amplitude",
        formula: "(2 + sin t)[-1, 1] on (0, 2pi)",
        params: &[],
        build: sin_amplitude,
    },
    Registration {
        name: "constant",
        formula: "[lo, hi]",
        params: &[("lo", -1.0), ("hi", 1.0)],
        build: constant,
    },
    Registration {
        name: "linear_cone",
        formula: "t [lo, hi]",
        params: &[("lo", 0.0), ("hi", 1.0)],
        build: linear_cone,
    },
    Registration {
        name: "shrinking",
        formula: "[0, 1 - t] on (-inf, 1]",
        params: &[],
        build: shrinking,
    },
];

pub fn names() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|s| s.name)
}

/// Builds the named entry. Missing parameters take their defaults;
/// unrecognized ones are rejected.
pub fn lookup(name: &str, params: &Params) -> Result<CorpusEntry> {
    let reg = REGISTRY
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownCorpusEntry(name.to_string()))?;
    if let Some(bad) = params
        .keys()
        .find(|k| !reg.params.iter().any(|(p, _)| p == k))
    {
        return Err(Error::InvalidConfig(format!(
            "{name} has no parameter `{bad}`"
        )));
    }
    let mut full = Params::new();
    for &(p, default) in reg.params {
        full.insert(p.to_string(), params.get(p).copied().unwrap_or(default));
    }
    (reg.build)(&full)
}

/// Registry listing with default parameters.
pub fn list() -> Vec<RegistryItem> {
    REGISTRY
        .iter()
        .map(|s| {
            let e = lookup(s.name, &Params::new()).expect("defaults are valid");
            RegistryItem {
                name: s.name,
                formula: s.formula,
                params: s.params.iter().copied().collect(),
                domain: e.function.domain().to_string(),
                sample_range: e.sample_range,
                notes: e.notes,
            }
        })
        .collect()
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("static interval")
}

fn point(t: f64, classification: Classification, derivative: Interval) -> ExpectedPoint {
    ExpectedPoint {
        t,
        classification,
        derivative: Some(derivative),
        left: None,
        right: None,
    }
}

/// Picks the one-sided value at a kink located at `at`.
fn kinked(t: f64, side: Side, at: f64, below: f64, above: f64) -> f64 {
    if t > at || (t == at && side == Side::Right) {
        above
    } else {
        below
    }
}

fn abs_width(_: &Params) -> Result<CorpusEntry> {
    let function = IntervalFn::new("abs_width", Domain::real_line(), |_| 0.0, f64::abs)
        .with_derivatives(|_, _| 0.0, |t, side| kinked(t, side, 0.0, -1.0, 1.0));
    Ok(CorpusEntry {
        name: "abs_width",
        function,
        expected: vec![
            ExpectedPoint {
                t: 0.0,
                classification: Classification::None,
                derivative: None,
                left: Some(iv(-1.0, 0.0)),
                right: Some(iv(0.0, 1.0)),
            },
            point(1.0, Classification::H1, iv(0.0, 1.0)),
            point(-1.0, Classification::H2, iv(-1.0, 0.0)),
        ],
        notes: "kink at 0: left derivative [-1,0] via L2, right derivative [0,1] via R1, no two-sided derivative",
        sample_range: (-2.0, 2.0),
        breakpoints: vec![0.0],
    })
}

fn sym_square(_: &Params) -> Result<CorpusEntry> {
    let function = IntervalFn::new("sym_square", Domain::real_line(), |t| -t * t, |t| t * t)
        .with_derivatives(|t, _| -2.0 * t, |t, _| 2.0 * t);
    Ok(CorpusEntry {
        name: "sym_square",
        function,
        expected: vec![
            point(1.0, Classification::H1, iv(-2.0, 2.0)),
            point(0.5, Classification::H1, iv(-1.0, 1.0)),
            point(0.0, Classification::SingletonMulti, Interval::ZERO),
            point(-0.5, Classification::H2, iv(-1.0, 1.0)),
            point(-1.0, Classification::H2, iv(-2.0, 2.0)),
        ],
        notes: "derivative [-2|t|, 2|t|]; singleton at 0 where all four limit pairs hold",
        sample_range: (-2.0, 2.0),
        breakpoints: vec![],
    })
}

fn exp_pair(_: &Params) -> Result<CorpusEntry> {
    let function = IntervalFn::new(
        "exp_pair",
        Domain::real_line(),
        |t: f64| (-t).exp(),
        |t: f64| 2.0 * (-t).exp(),
    )
    .with_derivatives(|t: f64, _| -(-t).exp(), |t: f64, _| -2.0 * (-t).exp());
    let expected = [0.0, 0.5, 1.0]
        .into_iter()
        .map(|t: f64| point(t, Classification::H2, iv(-2.0 * (-t).exp(), -(-t).exp())))
        .collect();
    Ok(CorpusEntry {
        name: "exp_pair",
        function,
        expected,
        notes: "shrinking width: second class with derivative [-2e^-t, -e^-t]; R1 alone never converges",
        sample_range: (-1.0, 2.0),
        breakpoints: vec![],
    })
}

fn sin_amplitude(_: &Params) -> Result<CorpusEntry> {
    let function = IntervalFn::new(
        "sin_amplitude",
        Domain::open(0.0, 2.0 * PI),
        |t: f64| -(2.0 + t.sin()),
        |t: f64| 2.0 + t.sin(),
    )
    .with_derivatives(|t: f64, _| -t.cos(), |t: f64, _| t.cos());
    let expected = [
        (0.5, Classification::H1),
        (1.0, Classification::H1),
        (2.0, Classification::H2),
        (4.0, Classification::H2),
    ]
    .into_iter()
    .map(|(t, class)| {
        let c = f64::cos(t).abs();
        point(t, class, iv(-c, c))
    })
    .collect();
    Ok(CorpusEntry {
        name: "sin_amplitude",
        function,
        expected,
        notes: "derivative (cos t)[-1,1]; class follows the sign of cos t (first class where the width grows, second where it shrinks)",
        sample_range: (0.1, 6.1),
        breakpoints: vec![],
    })
}

fn param_interval(params: &Params) -> Result<Interval> {
    Interval::new(params["lo"], params["hi"])
}

fn constant(params: &Params) -> Result<CorpusEntry> {
    let c = param_interval(params)?;
    let expected = [-1.0, 0.0, 1.0]
        .into_iter()
        .map(|t| point(t, Classification::SingletonMulti, Interval::ZERO))
        .collect();
    Ok(CorpusEntry {
        name: "constant",
        function: IntervalFn::constant("constant", Domain::real_line(), c),
        expected,
        notes: "zero derivative everywhere; every limit pair holds",
        sample_range: (-2.0, 2.0),
        breakpoints: vec![],
    })
}

fn linear_cone(params: &Params) -> Result<CorpusEntry> {
    let c = param_interval(params)?;
    let (lo, hi) = (c.lo(), c.hi());
    let function = IntervalFn::new(
        "linear_cone",
        Domain::real_line(),
        move |t| (t * lo).min(t * hi),
        move |t| (t * lo).max(t * hi),
    )
    .with_derivatives(
        move |t, side| kinked(t, side, 0.0, hi, lo),
        move |t, side| kinked(t, side, 0.0, lo, hi),
    );
    let at_zero = if c.is_singleton() {
        Classification::SingletonMulti
    } else {
        Classification::Mixed
    };
    let (pos, neg) = if c.is_singleton() {
        (
            Classification::SingletonMulti,
            Classification::SingletonMulti,
        )
    } else {
        (Classification::H1, Classification::H2)
    };
    Ok(CorpusEntry {
        name: "linear_cone",
        function,
        expected: vec![
            point(1.0, pos, c),
            point(0.0, at_zero, c),
            point(-1.0, neg, c),
        ],
        notes: "derivative C everywhere; at 0 only the R1/L2 pair holds, so a wide derivative comes from a single mixed pair",
        sample_range: (-2.0, 2.0),
        breakpoints: vec![0.0],
    })
}

fn shrinking(_: &Params) -> Result<CorpusEntry> {
    let domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: 1.0,
        lo_closed: false,
        hi_closed: true,
    };
    let function = IntervalFn::new("shrinking", domain, |_| 0.0, |t| 1.0 - t)
        .with_derivatives(|_, _| 0.0, |_, _| -1.0);
    Ok(CorpusEntry {
        name: "shrinking",
        function,
        expected: vec![
            point(0.5, Classification::H2, iv(-1.0, 0.0)),
            ExpectedPoint {
                t: 1.0,
                classification: Classification::LeftOnly,
                derivative: Some(iv(-1.0, 0.0)),
                left: Some(iv(-1.0, 0.0)),
                right: None,
            },
        ],
        notes: "width decreases to 0 at t = 1; second class with derivative [-1,0]",
        sample_range: (-1.0, 0.9),
        breakpoints: vec![],
    })
}
