use ivcalc::corpus::{self, CorpusEntry, Params};
use ivcalc::derivative::{
    calculus_check, classify_point, gh_derivative, limit_estimate, symmetric_residuals,
    Classification, Combo, DiffConfig, LimitVariant,
};
use ivcalc::{Interval, Side, Verdict};
use proptest::prelude::*;

fn entry(name: &str) -> CorpusEntry {
    corpus::lookup(name, &Params::new()).unwrap()
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

/// gH-derivative straight from the analytic one-sided endpoint derivatives.
fn endpoint_formula(e: &CorpusEntry, t: f64) -> Option<Interval> {
    let (a, b) = e.function.analytic_derivative(t, Side::Right)?;
    let (c, d) = e.function.analytic_derivative(t, Side::Left)?;
    ((a - c).abs() < 1e-12 && (b - d).abs() < 1e-12).then(|| iv(a.min(b), a.max(b)))
}

#[test]
fn metric_derivative_matches_endpoint_formula_on_every_entry() {
    let cfg = DiffConfig::default();
    for name in corpus::names() {
        let e = entry(name);
        for t in e.sample_points(20) {
            let r = classify_point(&e.function, t, &cfg).unwrap();
            let want = endpoint_formula(&e, t).unwrap();
            let got = r
                .derivative
                .unwrap_or_else(|| panic!("{name} at {t}: no derivative"));
            assert!(
                got.hausdorff(&want) <= 1e-4,
                "{name} at {t}: {got} vs {want}"
            );
            assert!(r.consistency.unwrap() <= 1e-4);
        }
    }
}

#[test]
fn cusp_has_only_one_sided_derivatives() {
    let r = classify_point(&entry("abs_width").function, 0.0, &DiffConfig::default()).unwrap();
    assert_eq!(r.classification, Classification::None);
    assert!(r.left.unwrap().hausdorff(&iv(-1.0, 0.0)) <= 1e-6);
    assert!(r.right.unwrap().hausdorff(&iv(0.0, 1.0)) <= 1e-6);
    assert_eq!(r.verdict(LimitVariant::L2), Some(Verdict::ConvergesToZero));
    assert_eq!(r.verdict(LimitVariant::R1), Some(Verdict::ConvergesToZero));
    assert_eq!(r.verdict(LimitVariant::L1), Some(Verdict::Diverges));
    assert_eq!(r.verdict(LimitVariant::R2), Some(Verdict::Diverges));
}

#[test]
fn shrinking_exponential_needs_the_second_pair() {
    let e = entry("exp_pair");
    let cfg = DiffConfig::default();
    for t in [0.0, 0.5, 1.0f64] {
        let r = classify_point(&e.function, t, &cfg).unwrap();
        assert_eq!(r.classification, Classification::H2);
        let want = iv(-2.0 * (-t).exp(), -(-t).exp());
        assert!(r.derivative.unwrap().hausdorff(&want) <= 1e-4);
        let est = limit_estimate(
            &e.function,
            t,
            want,
            LimitVariant::R1,
            &cfg.schedule,
            cfg.atol,
        );
        assert!(!est.verdict.converges());
    }
}

#[test]
fn single_mixed_pair_allows_a_wide_derivative() {
    let r = classify_point(&entry("linear_cone").function, 0.0, &DiffConfig::default()).unwrap();
    assert_eq!(r.classification, Classification::Mixed);
    assert!(r.holds(Combo::D4) && !r.holds(Combo::D3));
    assert!(r.singleton_conflict);
    assert!(r.derivative.unwrap().hausdorff(&iv(0.0, 1.0)) <= 1e-6);
}

#[test]
fn calculus_rules_hold() {
    let cfg = DiffConfig::default();
    let sq = entry("sym_square").function;
    let ex = entry("exp_pair").function;
    let r = calculus_check(&sq, &sq, 1.0, &[-2.0, 0.5, 3.0], &cfg).unwrap();
    for c in &r.checks {
        let res = c.residual.unwrap();
        let tol = if c.case == "a" { 1e-6 } else { 1e-4 };
        assert!(res <= tol, "{c:?}");
    }
    let r = calculus_check(&sq, &ex, 1.0, &[], &cfg).unwrap();
    assert_eq!(
        (r.f_class, r.g_class),
        (Classification::H1, Classification::H2)
    );
    assert_eq!(r.checks.len(), 2);
    for c in &r.checks {
        assert!(c.residual.unwrap() <= 1e-4, "{c:?}");
    }
}

#[test]
fn symmetric_limits_follow_the_holding_pair() {
    let cfg = DiffConfig::default();
    let sq = entry("sym_square").function;
    let ex = entry("exp_pair").function;
    let s = symmetric_residuals(&sq, 1.0, iv(-2.0, 2.0), &cfg).unwrap();
    assert!(s.s1.verdict.converges() && s.s1.floor <= 1e-4);
    let d = iv(-2.0 * (-0.5f64).exp(), -(-0.5f64).exp());
    let s = symmetric_residuals(&ex, 0.5, d, &cfg).unwrap();
    assert!(s.s2.verdict.converges() && s.s2.floor <= 1e-4);
    let s = symmetric_residuals(&sq, 0.0, Interval::ZERO, &cfg).unwrap();
    assert!(s.s3.verdict.converges() && s.s3.floor <= 1e-4);
}

fn corpus_point() -> impl Strategy<Value = (String, f64)> {
    let names: Vec<String> = corpus::names().map(String::from).collect();
    (proptest::sample::select(names), 0.0f64..1.0).prop_map(|(name, u)| {
        let (a, b) = entry(&name).sample_range;
        (name, a + u * (b - a))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_pairs_force_a_singleton((name, t) in corpus_point()) {
        let r = classify_point(&entry(&name).function, t, &DiffConfig::default()).unwrap();
        if r.combo_count() >= 2 {
            prop_assert!(r.derivative.unwrap().width() <= 1e-6);
        }
    }

    #[test]
    fn derivative_agrees_with_gh_routes((name, t) in corpus_point()) {
        let e = entry(&name);
        let cfg = DiffConfig::default();
        let r = classify_point(&e.function, t, &cfg).unwrap();
        let g = gh_derivative(&e.function, t, &cfg).unwrap();
        if let (Some(f), Some(q)) = (g.formula.value, g.quotient.value) {
            prop_assert!(f.hausdorff(&q) <= 1e-6, "{} vs {}", f, q);
        }
        if let (Some(d), Some(f)) = (r.derivative, g.formula.value) {
            prop_assert!(d.hausdorff(&f) <= 1e-4);
        }
    }

    #[test]
    fn differentiable_points_are_continuous((name, t) in corpus_point()) {
        let e = entry(&name);
        let cfg = DiffConfig::default();
        let r = classify_point(&e.function, t, &cfg).unwrap();
        if r.derivative.is_some() {
            let c = e.function.continuity_probe(t, &cfg.schedule, cfg.atol).unwrap();
            prop_assert!(c.verdict.converges());
        }
    }
}
