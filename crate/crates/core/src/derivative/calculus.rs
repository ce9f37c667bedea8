//! Sum, difference and scalar rules for metric derivatives.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::ivf::IntervalFn;

use super::{classify_point, Classification, DerivativeReport, DiffConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub rule: String,
    /// `a`, `b` or `c`.
    pub case: &'static str,
    /// Hausdorff distance between both sides of the identity.
    pub residual: Option<f64>,
    pub skipped: Option<String>,
}

impl IdentityCheck {
    fn measured(rule: impl Into<String>, case: &'static str, residual: f64) -> Self {
        IdentityCheck {
            rule: rule.into(),
            case,
            residual: Some(residual),
            skipped: None,
        }
    }

    fn skipped(rule: impl Into<String>, case: &'static str, reason: impl Into<String>) -> Self {
        IdentityCheck {
            rule: rule.into(),
            case,
            residual: None,
            skipped: Some(reason.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalculusReport {
    pub t0: f64,
    pub f_class: Classification,
    pub g_class: Classification,
    pub checks: Vec<IdentityCheck>,
}

impl CalculusReport {
    pub fn check(&self, rule: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.rule == rule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    H1,
    H2,
    Either,
}

fn kind(report: &DerivativeReport) -> Option<Kind> {
    match report.classification {
        Classification::H1 => Some(Kind::H1),
        Classification::H2 => Some(Kind::H2),
        Classification::SingletonMulti => Some(Kind::Either),
        _ => None,
    }
}

fn derivative_of(
    f: &IntervalFn,
    t0: f64,
    cfg: &DiffConfig,
) -> Result<(DerivativeReport, Interval)> {
    let report = classify_point(f, t0, cfg)?;
    match report.derivative {
        Some(d) => Ok((report, d)),
        None => Err(Error::PrerequisiteNotDifferentiable(format!(
            "{} at t = {t0} ({})",
            f.name(),
            report.classification.as_str()
        ))),
    }
}

/// Measures the sum, gH-difference and scalar rules at `t0`.
///
/// Both functions must be differentiable at `t0`. Identities that need a
/// Hukuhara difference are skipped when the width condition fails.
pub fn calculus_check(
    f: &IntervalFn,
    g: &IntervalFn,
    t0: f64,
    lambdas: &[f64],
    cfg: &DiffConfig,
) -> Result<CalculusReport> {
    let (f_report, df) = derivative_of(f, t0, cfg)?;
    let (g_report, dg) = derivative_of(g, t0, cfg)?;
    let mut checks = Vec::new();

    for &lambda in lambdas {
        let rule = format!("({lambda}F)' = {lambda}F'");
        let (_, d) = derivative_of(&f.scaled(lambda), t0, cfg)?;
        checks.push(IdentityCheck::measured(
            rule,
            "a",
            d.hausdorff(&df.scale(lambda)?),
        ));
    }

    let fg_hukuhara = f.eval(t0)?.gh_sub(g.eval(t0)?)?.hukuhara;
    let sum = f.plus(g)?;
    let diff = f.gh_minus(g)?;

    match (kind(&f_report), kind(&g_report)) {
        (None, _) | (_, None) => {
            let reason = "F or G is not H1/H2 at t0";
            checks.push(IdentityCheck::skipped("(F+G)'", "-", reason));
            checks.push(IdentityCheck::skipped("(F⊖G)'", "-", reason));
        }
        (Some(kf), Some(kg)) if kf == kg || kf == Kind::Either || kg == Kind::Either => {
            let (_, d) = derivative_of(&sum, t0, cfg)?;
            checks.push(IdentityCheck::measured(
                "(F+G)' = F'+G'",
                "b",
                d.hausdorff(&df.add(dg)?),
            ));

            let rule = "(F⊖G)' = F'⊖G'";
            let dd = df.gh_sub(dg)?;
            if !fg_hukuhara {
                checks.push(IdentityCheck::skipped(rule, "b", "w(F(t0)) < w(G(t0))"));
            } else if !dd.hukuhara {
                checks.push(IdentityCheck::skipped(rule, "b", "w(F') < w(G')"));
            } else {
                let (_, d) = derivative_of(&diff, t0, cfg)?;
                checks.push(IdentityCheck::measured(rule, "b", d.hausdorff(&dd.value)));
            }
        }
        (Some(_), Some(_)) => {
            let rule = "(F+G)' = F'⊖(-G')";
            let expected = df.gh_sub(dg.neg())?;
            if !expected.hukuhara {
                checks.push(IdentityCheck::skipped(rule, "c", "w(F') < w(G')"));
            } else {
                let (_, d) = derivative_of(&sum, t0, cfg)?;
                checks.push(IdentityCheck::measured(
                    rule,
                    "c",
                    d.hausdorff(&expected.value),
                ));
            }

            let rule = "(F⊖G)' = F'+(-G')";
            if !fg_hukuhara {
                checks.push(IdentityCheck::skipped(rule, "c", "w(F(t0)) < w(G(t0))"));
            } else {
                let (_, d) = derivative_of(&diff, t0, cfg)?;
                checks.push(IdentityCheck::measured(
                    rule,
                    "c",
                    d.hausdorff(&df.add(dg.neg())?),
                ));
            }
        }
    }

    Ok(CalculusReport {
        t0,
        f_class: f_report.classification,
        g_class: g_report.classification,
        checks,
    })
}
