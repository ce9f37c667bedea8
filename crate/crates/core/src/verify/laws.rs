//! Algebraic laws of intervals on a dyadic grid, where every operation is
//! exact and comparisons need no tolerance.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Case, CheckFn};
use crate::interval::Interval;

/// Endpoints are `k / 256` with `|k| <= GRID`.
const GRID: i32 = 4096;

fn dyadic(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-GRID..=GRID) as f64 / 256.0
}

fn interval(rng: &mut ChaCha8Rng) -> Interval {
    let (a, b) = (dyadic(rng), dyadic(rng));
    Interval::new(a.min(b), a.max(b)).expect("finite ordered endpoints")
}

/// Scalars `k / 16` with `|k| <= 64`.
fn scalar(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-64..=64) as f64 / 16.0
}

fn intervals<const N: usize>(rng: &mut ChaCha8Rng) -> [Interval; N] {
    std::array::from_fn(|_| interval(rng))
}

/// Orders a pair so that the first has the larger width.
fn wider_first(a: Interval, b: Interval) -> (Interval, Interval) {
    if a.width() >= b.width() {
        (a, b)
    } else {
        (b, a)
    }
}

fn gh(a: Interval, b: Interval) -> Interval {
    a.gh(b).expect("dyadic arithmetic stays finite")
}

fn add(a: Interval, b: Interval) -> Interval {
    a.add(b).expect("dyadic arithmetic stays finite")
}

fn scale(a: Interval, l: f64) -> Interval {
    a.scale(l).expect("dyadic arithmetic stays finite")
}

fn h(a: Interval, b: Interval) -> f64 {
    a.hausdorff(&b)
}

fn show(named: &[(&str, Interval)]) -> String {
    named
        .iter()
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn gh_recomposition(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    let d = gh(a, b);
    let ok = if a.width() >= b.width() {
        add(b, d) == a
    } else {
        add(a, d.neg()) == b
    };
    Case::from_bool(ok, || show(&[("A", a), ("B", b)]))
}

fn gh_width(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    let ok = gh(a, b).width() == (a.width() - b.width()).abs();
    Case::from_bool(ok, || show(&[("A", a), ("B", b)]))
}

fn hausdorff_is_gh_norm(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    Case::from_bool(h(a, b) == gh(a, b).norm(), || show(&[("A", a), ("B", b)]))
}

fn gh_zero_and_self(rng: &mut ChaCha8Rng) -> Case {
    let [a] = intervals(rng);
    let ok = gh(a, Interval::ZERO) == a && gh(a, a) == Interval::ZERO;
    Case::from_bool(ok, || show(&[("A", a)]))
}

fn gh_opposite(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    Case::from_bool(gh(a.neg(), b.neg()) == gh(a, b).neg(), || {
        show(&[("A", a), ("B", b)])
    })
}

fn gh_cancels_sum(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    Case::from_bool(gh(add(a, b), b) == a, || show(&[("A", a), ("B", b)]))
}

fn gh_adds_back(rng: &mut ChaCha8Rng) -> Case {
    let [x, y] = intervals(rng);
    let (b, a) = wider_first(x, y);
    Case::from_bool(add(a, gh(b, a)) == b, || show(&[("A", a), ("B", b)]))
}

fn gh_sum_shift(rng: &mut ChaCha8Rng) -> Case {
    let [x, y, c] = intervals(rng);
    let (b, a) = wider_first(x, y);
    Case::from_bool(gh(add(b, c), a) == add(gh(b, a), c), || {
        show(&[("A", a), ("B", b), ("C", c)])
    })
}

fn gh_sum_distributes(rng: &mut ChaCha8Rng) -> Case {
    let [p, q, r, s] = intervals(rng);
    let (a, b) = wider_first(p, q);
    let (c, d) = wider_first(r, s);
    let ok = add(gh(a, b), gh(c, d)) == gh(add(a, c), add(b, d));
    Case::from_bool(ok, || show(&[("A", a), ("B", b), ("C", c), ("D", d)]))
}

fn gh_chain(rng: &mut ChaCha8Rng) -> Case {
    let mut v: [Interval; 3] = intervals(rng);
    v.sort_by(|x, y| y.width().total_cmp(&x.width()));
    let [a, b, c] = v;
    let ok = add(gh(a, b), gh(b, c)) == gh(a, c);
    Case::from_bool(ok, || show(&[("A", a), ("B", b), ("C", c)]))
}

fn h_translation_invariant(rng: &mut ChaCha8Rng) -> Case {
    let [a, b, c] = intervals(rng);
    Case::from_bool(h(add(a, c), add(b, c)) == h(a, b), || {
        show(&[("A", a), ("B", b), ("C", c)])
    })
}

fn h_scale_homogeneous(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    let l = scalar(rng);
    let ok = h(scale(a, l), scale(b, l)) == l.abs() * h(a, b);
    Case::from_bool(ok, || format!("{}, λ={l}", show(&[("A", a), ("B", b)])))
}

fn h_sum_subadditive(rng: &mut ChaCha8Rng) -> Case {
    let [a, b, c, d] = intervals(rng);
    let ok = h(add(a, b), add(c, d)) <= h(a, c) + h(b, d);
    Case::from_bool(ok, || show(&[("A", a), ("B", b), ("C", c), ("D", d)]))
}

fn h_scalar_difference(rng: &mut ChaCha8Rng) -> Case {
    let [a] = intervals(rng);
    let l = scalar(rng);
    let mut m = scalar(rng);
    if l * m < 0.0 {
        m = -m;
    }
    let ok = h(scale(a, l), scale(a, m)) == (l - m).abs() * h(a, Interval::ZERO);
    Case::from_bool(ok, || format!("{}, λ={l}, μ={m}", show(&[("A", a)])))
}

fn h_gh_transfer(rng: &mut ChaCha8Rng) -> Case {
    let [x, y, c] = intervals(rng);
    let (a, b) = wider_first(x, y);
    Case::from_bool(h(gh(a, b), c) == h(a, add(b, c)), || {
        show(&[("A", a), ("B", b), ("C", c)])
    })
}

fn h_gh_cancel_common(rng: &mut ChaCha8Rng) -> Case {
    let mut v: [Interval; 3] = intervals(rng);
    v.sort_by(|x, y| y.width().total_cmp(&x.width()));
    let [a, b, c] = if rng.gen::<bool>() {
        v
    } else {
        [v[1], v[0], v[2]]
    };
    Case::from_bool(h(a, b) == h(gh(a, c), gh(b, c)), || {
        show(&[("A", a), ("B", b), ("C", c)])
    })
}

fn h_gh_subadditive(rng: &mut ChaCha8Rng) -> Case {
    let [p, q, r, s] = intervals(rng);
    let (a, b) = wider_first(p, q);
    let (c, d) = wider_first(r, s);
    let ok = h(gh(a, b), gh(c, d)) <= h(a, c) + h(b, d);
    Case::from_bool(ok, || show(&[("A", a), ("B", b), ("C", c), ("D", d)]))
}

fn h_mixed_sum_bound(rng: &mut ChaCha8Rng) -> Case {
    let [a, b, c, d, p, q] = intervals(rng);
    let (e, f) = wider_first(p, q);
    let ok = h(add(a, b), add(add(c, d), gh(e, f))) <= h(a, add(c, e)) + h(d, add(b, f));
    Case::from_bool(ok, || {
        show(&[("A", a), ("B", b), ("C", c), ("D", d), ("E", e), ("F", f)])
    })
}

fn h_mixed_gh_bound(rng: &mut ChaCha8Rng) -> Case {
    let [p, q, r, s, e, f] = intervals(rng);
    let (a, b) = wider_first(p, q);
    let (c, d) = wider_first(r, s);
    let ok = h(gh(a, b), add(add(gh(c, d), e), f)) <= h(a, add(c, e)) + h(d, add(b, f));
    Case::from_bool(ok, || {
        show(&[("A", a), ("B", b), ("C", c), ("D", d), ("E", e), ("F", f)])
    })
}

fn metric_identity(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    let b = if rng.gen_bool(0.25) { a } else { b };
    Case::from_bool((h(a, b) == 0.0) == (a == b) && h(a, a) == 0.0, || {
        show(&[("A", a), ("B", b)])
    })
}

fn metric_symmetry(rng: &mut ChaCha8Rng) -> Case {
    let [a, b] = intervals(rng);
    Case::from_bool(h(a, b) == h(b, a), || show(&[("A", a), ("B", b)]))
}

fn metric_triangle(rng: &mut ChaCha8Rng) -> Case {
    let [a, b, c] = intervals(rng);
    Case::from_bool(h(a, c) <= h(a, b) + h(b, c), || {
        show(&[("A", a), ("B", b), ("C", c)])
    })
}

pub(crate) const CHECKS: &[(&str, CheckFn)] = &[
    ("gh_recomposition", gh_recomposition),
    ("gh_width", gh_width),
    ("hausdorff_is_gh_norm", hausdorff_is_gh_norm),
    ("gh_zero_and_self", gh_zero_and_self),
    ("gh_opposite", gh_opposite),
    ("gh_cancels_sum", gh_cancels_sum),
    ("gh_adds_back", gh_adds_back),
    ("gh_sum_shift", gh_sum_shift),
    ("gh_sum_distributes", gh_sum_distributes),
    ("gh_chain", gh_chain),
    ("h_translation_invariant", h_translation_invariant),
    ("h_scale_homogeneous", h_scale_homogeneous),
    ("h_sum_subadditive", h_sum_subadditive),
    ("h_scalar_difference", h_scalar_difference),
    ("h_gh_transfer", h_gh_transfer),
    ("h_gh_cancel_common", h_gh_cancel_common),
    ("h_gh_subadditive", h_gh_subadditive),
    ("h_mixed_sum_bound", h_mixed_sum_bound),
    ("h_mixed_gh_bound", h_mixed_gh_bound),
    ("metric_identity", metric_identity),
    ("metric_symmetry", metric_symmetry),
    ("metric_triangle", metric_triangle),
];
