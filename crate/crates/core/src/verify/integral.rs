//! Integral properties on random corpus functions and ranges.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::derivative::random_params;
use super::{Case, CheckFn};
use crate::corpus::{self, CorpusEntry};
use crate::error::Result;
use crate::integral::{gauss, hull_membership, integrate, integrate_scalar, QuadConfig};
use crate::interval::Interval;

/// Tolerance on every integral identity.
const TOL: f64 = 1e-6;

fn entry(rng: &mut ChaCha8Rng) -> CorpusEntry {
    let names: Vec<&str> = corpus::names().collect();
    let name = *names.choose(rng).expect("registry is not empty");
    corpus::lookup(name, &random_params(name, rng)).expect("valid parameters")
}

/// Random `a < b` inside `[lo, hi]`.
fn range(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> (f64, f64) {
    let x = rng.gen_range(lo..hi);
    let y = rng.gen_range(lo..hi);
    if x == y {
        (lo, hi)
    } else {
        (x.min(y), x.max(y))
    }
}

/// Two entries and a range inside both sample ranges.
fn pair(rng: &mut ChaCha8Rng) -> (CorpusEntry, CorpusEntry, f64, f64) {
    let f = entry(rng);
    let g = entry(rng);
    let lo = f.sample_range.0.max(g.sample_range.0);
    let hi = f.sample_range.1.min(g.sample_range.1);
    let (a, b) = range(rng, (lo, hi));
    (f, g, a, b)
}

fn finish(result: Result<Case>, what: impl FnOnce() -> String) -> Case {
    result.unwrap_or_else(|e| Case::Fail(format!("{}: {e}", what())))
}

fn endpoint_decomposition(rng: &mut ChaCha8Rng) -> Case {
    let f = entry(rng);
    let (a, b) = range(rng, f.sample_range);
    let what = || format!("{} on [{a}, {b}]", f.function.name());
    finish(
        (|| {
            let v = integrate(&f.function, a, b, &QuadConfig::default())?.value;
            let cuts = &f.breakpoints;
            let lo = gauss::integrate_split(&*f.function.lo_fn(), a, b, cuts, 1e-8);
            let hi = gauss::integrate_split(&*f.function.hi_fn(), a, b, cuts, 1e-8);
            let oracle = Interval::new(lo, hi)?;
            Ok(Case::from_bool(v.hausdorff(&oracle) <= TOL, || {
                format!("{}: {v} vs endpoint quadrature {oracle}", what())
            }))
        })(),
        what,
    )
}

fn linearity(rng: &mut ChaCha8Rng) -> Case {
    let (f, g, a, b) = pair(rng);
    let alpha: f64 = rng.gen_range(-3.0..3.0);
    let beta: f64 = rng.gen_range(-3.0..3.0);
    let what = || {
        format!(
            "{alpha}·{} + {beta}·{} on [{a}, {b}]",
            f.function.name(),
            g.function.name()
        )
    };
    finish(
        (|| {
            let q = QuadConfig::default();
            let combined = f.function.scaled(alpha).plus(&g.function.scaled(beta))?;
            let lhs = integrate(&combined, a, b, &q)?.value;
            let fi = integrate(&f.function, a, b, &q)?.value;
            let gi = integrate(&g.function, a, b, &q)?.value;
            let rhs = fi.scale(alpha)?.add(gi.scale(beta)?)?;
            Ok(Case::from_bool(lhs.hausdorff(&rhs) <= TOL, || {
                format!("{}: {lhs} vs {rhs}", what())
            }))
        })(),
        what,
    )
}

fn additive_over_ranges(rng: &mut ChaCha8Rng) -> Case {
    let f = entry(rng);
    let (a, b) = range(rng, f.sample_range);
    let c = rng.gen_range(a..b);
    let what = || format!("{} on [{a}, {c}, {b}]", f.function.name());
    finish(
        (|| {
            let q = QuadConfig::default();
            let whole = integrate(&f.function, a, b, &q)?.value;
            let left = integrate(&f.function, a, c, &q)?.value;
            let right = integrate(&f.function, c, b, &q)?.value;
            let split = left.add(right)?;
            Ok(Case::from_bool(whole.hausdorff(&split) <= TOL, || {
                format!("{}: {whole} vs {split}", what())
            }))
        })(),
        what,
    )
}

fn distance_bound(rng: &mut ChaCha8Rng) -> Case {
    let (f, g, a, b) = pair(rng);
    let what = || format!("{}, {} on [{a}, {b}]", f.function.name(), g.function.name());
    finish(
        (|| {
            let q = QuadConfig::default();
            let fi = integrate(&f.function, a, b, &q)?.value;
            let gi = integrate(&g.function, a, b, &q)?.value;
            let dist = |t: f64| {
                let (fl, fh) = f.function.endpoints(t);
                let (gl, gh) = g.function.endpoints(t);
                (fl - gl).abs().max((fh - gh).abs())
            };
            let (bound, _) = integrate_scalar(dist, a, b, &q)?;
            let lhs = fi.hausdorff(&gi);
            Ok(Case::from_bool(lhs <= bound + TOL, || {
                format!("{}: H(∫F, ∫G) = {lhs} > ∫H = {bound}", what())
            }))
        })(),
        what,
    )
}

fn mean_in_hull(rng: &mut ChaCha8Rng) -> Case {
    let f = entry(rng);
    let (a, b) = range(rng, f.sample_range);
    let what = || format!("{} on [{a}, {b}]", f.function.name());
    finish(
        (|| {
            let h = hull_membership(&f.function, a, b, &QuadConfig::default())?;
            Ok(Case::from_bool(h.inside, || {
                format!("{}: mean {} margin {:e}", what(), h.mean, h.margin)
            }))
        })(),
        what,
    )
}

pub(crate) const CHECKS: &[(&str, CheckFn)] = &[
    ("endpoint_decomposition", endpoint_decomposition),
    ("linearity", linearity),
    ("additive_over_ranges", additive_over_ranges),
    ("distance_bound", distance_bound),
    ("mean_in_hull", mean_in_hull),
];
