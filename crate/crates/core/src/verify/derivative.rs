//! Derivative invariants at random points of random corpus entries.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Case, CheckFn};
use crate::corpus::{self, CorpusEntry, Params};
use crate::derivative::{
    classify_point, gh_derivative, limit_estimate, symmetric_residuals, Classification, Combo,
    DerivativeReport, DiffConfig,
};
use crate::interval::Interval;

/// Agreement required between the metric derivative and the endpoint formula.
const CONSISTENCY_TOL: f64 = 1e-4;
/// Agreement required between the two gH-derivative routes.
const ROUTE_TOL: f64 = 1e-6;
/// Perturbation that must break a converging limit pair.
const PERTURBATION: f64 = 1e-2;

/// Random corpus entry with random parameters, and a random point in its
/// sample range.
pub(super) fn draw(rng: &mut ChaCha8Rng) -> (CorpusEntry, f64) {
    let names: Vec<&str> = corpus::names().collect();
    let name = *names.choose(rng).expect("registry is not empty");
    let entry = corpus::lookup(name, &random_params(name, rng)).expect("valid parameters");
    let (a, b) = entry.sample_range;
    let t = rng.gen_range(a..b);
    (entry, t)
}

pub(super) fn random_params(name: &str, rng: &mut ChaCha8Rng) -> Params {
    match name {
        "constant" | "linear_cone" => {
            let x: f64 = rng.gen_range(-2.0..2.0);
            let y: f64 = rng.gen_range(-2.0..2.0);
            Params::from([("lo".to_string(), x.min(y)), ("hi".to_string(), x.max(y))])
        }
        _ => Params::new(),
    }
}

fn classify(entry: &CorpusEntry, t: f64) -> Option<DerivativeReport> {
    classify_point(&entry.function, t, &DiffConfig::default()).ok()
}

fn describe(entry: &CorpusEntry, t: f64, detail: impl std::fmt::Display) -> String {
    format!("{} at t = {t}: {detail}", entry.function.name())
}

fn metric_matches_gh(rng: &mut ChaCha8Rng) -> Case {
    let (entry, t) = draw(rng);
    let Some(r) = classify(&entry, t) else {
        return Case::Fail(describe(&entry, t, "classification failed"));
    };
    let Some(g) = r.gh_value else {
        return Case::Skip;
    };
    match r.consistency {
        Some(c) => Case::from_bool(c <= CONSISTENCY_TOL, || {
            describe(&entry, t, format!("H(metric, gH) = {c:e}"))
        }),
        None => Case::Fail(describe(
            &entry,
            t,
            format!("gH derivative {g} but no metric derivative"),
        )),
    }
}

fn differentiable_is_continuous(rng: &mut ChaCha8Rng) -> Case {
    let (entry, t) = draw(rng);
    let Some(r) = classify(&entry, t) else {
        return Case::Skip;
    };
    if r.derivative.is_none() {
        return Case::Skip;
    }
    let cfg = DiffConfig::default();
    match entry.function.continuity_probe(t, &cfg.schedule, cfg.atol) {
        Ok(est) => Case::from_bool(est.verdict.converges(), || {
            describe(
                &entry,
                t,
                format!("continuity verdict {}", est.verdict.as_str()),
            )
        }),
        Err(e) => Case::Fail(describe(&entry, t, e)),
    }
}

fn derivative_is_unique(rng: &mut ChaCha8Rng) -> Case {
    let (entry, t) = draw(rng);
    let Some(r) = classify(&entry, t) else {
        return Case::Skip;
    };
    let Some(d) = r.derivative else {
        return Case::Skip;
    };
    let combos: Vec<Combo> = Combo::ALL.into_iter().filter(|&c| r.holds(c)).collect();
    if combos.is_empty() {
        return Case::Skip;
    }
    let cfg = DiffConfig::default();
    let widened = Interval::new(d.lo() - PERTURBATION, d.hi() + PERTURBATION).expect("finite");
    for combo in combos {
        let (right, left) = combo.variants();
        let still = [right, left].into_iter().all(|v| {
            limit_estimate(&entry.function, t, widened, v, &cfg.schedule, cfg.atol)
                .verdict
                .converges()
        });
        if still {
            return Case::Fail(describe(
                &entry,
                t,
                format!("{combo:?} also holds for {widened}"),
            ));
        }
    }
    Case::Pass
}

fn multiple_pairs_force_singleton(rng: &mut ChaCha8Rng) -> Case {
    let (entry, t) = draw(rng);
    let Some(r) = classify(&entry, t) else {
        return Case::Skip;
    };
    if r.combo_count() < 2 {
        return Case::Skip;
    }
    let w = r.derivative.map_or(f64::INFINITY, |d| d.width());
    Case::from_bool(w <= DiffConfig::default().singleton_tol, || {
        describe(
            &entry,
            t,
            format!("{} pairs hold with width {w:e}", r.combo_count()),
        )
    })
}

fn symmetric_limits(rng: &mut ChaCha8Rng) -> Case {
    let (entry, t) = draw(rng);
    let Some(r) = classify(&entry, t) else {
        return Case::Skip;
    };
    let Some(d) = r.derivative else {
        return Case::Skip;
    };
    let cfg = DiffConfig::default();
    let Ok(s) = symmetric_residuals(&entry.function, t, d, &cfg) else {
        return Case::Skip;
    };
    let mut checked = false;
    for (combos, est, label) in [
        (&[Combo::D1][..], &s.s1, "s1"),
        (&[Combo::D2][..], &s.s2, "s2"),
        (&[Combo::D3, Combo::D4][..], &s.s3, "s3"),
    ] {
        if combos.iter().any(|&c| r.holds(c)) {
            checked = true;
            if !est.verdict.converges() {
                return Case::Fail(describe(
                    &entry,
                    t,
                    format!("{label} {}", est.verdict.as_str()),
                ));
            }
        }
    }
    if checked {
        Case::Pass
    } else {
        Case::Skip
    }
}

fn gh_routes_agree(rng: &mut ChaCha8Rng) -> Case {
    let (entry, t) = draw(rng);
    let Ok(g) = gh_derivative(&entry.function, t, &DiffConfig::default()) else {
        return Case::Skip;
    };
    match (g.formula.value, g.quotient.value) {
        (Some(f), Some(q)) => Case::from_bool(f.hausdorff(&q) <= ROUTE_TOL, || {
            describe(&entry, t, format!("formula {f} vs quotient {q}"))
        }),
        _ => Case::Skip,
    }
}

fn class_matches_width_trend(rng: &mut ChaCha8Rng) -> Case {
    let (entry, t) = draw(rng);
    let Some(r) = classify(&entry, t) else {
        return Case::Skip;
    };
    let Some(d) = r.derivative else {
        return Case::Skip;
    };
    // The width changes at rate ±w(F′): first class when it grows, second
    // when it shrinks.
    let Some((dl, dh)) = entry
        .function
        .analytic_derivative(t, crate::ivf::Side::Right)
    else {
        return Case::Skip;
    };
    let growth = dh - dl;
    if growth.abs() <= 1e-3 {
        return Case::Skip;
    }
    let want = if growth > 0.0 {
        Classification::H1
    } else {
        Classification::H2
    };
    Case::from_bool(r.classification == want, || {
        describe(
            &entry,
            t,
            format!(
                "{} with width rate {growth:e}, derivative {d}",
                r.classification.as_str()
            ),
        )
    })
}

pub(crate) const CHECKS: &[(&str, CheckFn)] = &[
    ("metric_matches_gh", metric_matches_gh),
    ("differentiable_is_continuous", differentiable_is_continuous),
    ("derivative_is_unique", derivative_is_unique),
    (
        "multiple_pairs_force_singleton",
        multiple_pairs_force_singleton,
    ),
    ("symmetric_limits", symmetric_limits),
    ("gh_routes_agree", gh_routes_agree),
    ("class_matches_width_trend", class_matches_width_trend),
];
