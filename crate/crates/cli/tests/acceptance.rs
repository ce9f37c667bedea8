//! Acceptance suite. Each test prints `criterion N: PASS|FAIL` followed by
//! the measured quantities, then asserts. Expected values are computed here
//! from closed forms, never read back from the library.

use std::process::Command;
use std::time::{Duration, Instant};

use ivcalc::corpus::{self, CorpusEntry, Params};
use ivcalc::derivative::{
    calculus_check, classify_point, limit_estimate, symmetric_residuals, Classification,
    DiffConfig, LimitVariant,
};
use ivcalc::integral::{integrate, primitive, reconstruct_h1, reconstruct_h2, QuadConfig};
use ivcalc::verify::{self, Suite};
use ivcalc::{Interval, IntervalFn, Side};

fn entry(name: &str) -> CorpusEntry {
    corpus::lookup(name, &Params::new()).unwrap()
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

/// Prints the verdict line and the collected details, then asserts.
fn conclude(n: u32, failures: &[String], details: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status}");
    for d in details {
        println!("  {d}");
    }
    for f in failures {
        println!("  failed: {f}");
    }
    assert!(failures.is_empty(), "criterion {n}: {failures:?}");
}

fn within_time(
    n: u32,
    elapsed: Duration,
    limit: Duration,
    failures: &mut Vec<String>,
    details: &mut Vec<String>,
) {
    details.push(format!("runtime {elapsed:?} (limit {limit:?})"));
    if elapsed >= limit {
        failures.push(format!("criterion {n} took {elapsed:?}"));
    }
}

#[test]
fn criterion_01_cusp_one_sided_derivatives() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let start = Instant::now();
    let r = classify_point(&entry("abs_width").function, 0.0, &DiffConfig::default()).unwrap();
    let elapsed = start.elapsed();

    let left = r.left.map(|l| l.hausdorff(&iv(-1.0, 0.0)));
    let right = r.right.map(|x| x.hausdorff(&iv(0.0, 1.0)));
    info.push(format!(
        "left error {left:?}, right error {right:?}, class {}",
        r.classification.as_str()
    ));
    if !left.is_some_and(|e| e <= 1e-6) {
        fail.push("left derivative".into());
    }
    if !right.is_some_and(|e| e <= 1e-6) {
        fail.push("right derivative".into());
    }
    for v in [LimitVariant::L2, LimitVariant::R1] {
        if !r.verdict(v).is_some_and(|v| v.converges()) {
            fail.push(format!("{} does not converge", v.as_str()));
        }
    }
    if r.classification != Classification::None {
        fail.push("classification is not none".into());
    }
    within_time(1, elapsed, Duration::from_secs(1), &mut fail, &mut info);
    conclude(1, &fail, &info);
}

#[test]
fn criterion_02_symmetric_square_on_a_grid() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let f = entry("sym_square").function;
    let cfg = DiffConfig::default();
    let start = Instant::now();
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0f64] {
        let r = classify_point(&f, t, &cfg).unwrap();
        let want = iv(-2.0 * t.abs(), 2.0 * t.abs());
        let err = r.derivative.map(|d| d.hausdorff(&want));
        info.push(format!(
            "t={t}: class {}, error {err:?}, combos {}",
            r.classification.as_str(),
            r.combo_count()
        ));
        if !err.is_some_and(|e| e <= 1e-4) {
            fail.push(format!("derivative at {t}"));
        }
        if t == 0.0 {
            if r.combo_count() < 2 {
                fail.push("fewer than two pairs hold at 0".into());
            }
            if !r.derivative.is_some_and(|d| d.width() <= 1e-6) {
                fail.push("derivative at 0 is not a singleton".into());
            }
        }
    }
    within_time(
        2,
        start.elapsed(),
        Duration::from_secs(1),
        &mut fail,
        &mut info,
    );
    conclude(2, &fail, &info);
}

#[test]
fn criterion_03_shrinking_exponential() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let f = entry("exp_pair").function;
    let cfg = DiffConfig::default();
    for t in [0.0, 0.5, 1.0f64] {
        let r = classify_point(&f, t, &cfg).unwrap();
        let want = iv(-2.0 * (-t).exp(), -(-t).exp());
        let err = r.derivative.map(|d| d.hausdorff(&want));
        let alone = limit_estimate(&f, t, want, LimitVariant::R1, &cfg.schedule, cfg.atol);
        info.push(format!(
            "t={t}: class {}, error {err:?}, R1 alone {}",
            r.classification.as_str(),
            alone.verdict.as_str()
        ));
        if r.classification != Classification::H2 {
            fail.push(format!("class at {t}"));
        }
        if !err.is_some_and(|e| e <= 1e-4) {
            fail.push(format!("derivative at {t}"));
        }
        if alone.verdict.converges() {
            fail.push(format!("R1 converges at {t}"));
        }
    }
    conclude(3, &fail, &info);
}

#[test]
fn criterion_04_oscillating_amplitude() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let f = entry("sin_amplitude").function;
    let cfg = DiffConfig::default();
    for t in [0.5, 1.0, 2.0, 4.0f64] {
        let r = classify_point(&f, t, &cfg).unwrap();
        let c = t.cos().abs();
        let err = r.derivative.map(|d| d.hausdorff(&iv(-c, c)));
        let combos: Vec<String> = r.combos.iter().map(|(k, v)| format!("{k:?}={v}")).collect();
        info.push(format!(
            "t={t}: class {}, error {err:?}, consistency {:?}, combos [{}]",
            r.classification.as_str(),
            r.consistency,
            combos.join(" ")
        ));
        if !err.is_some_and(|e| e <= 1e-4) {
            fail.push(format!("derivative at {t}"));
        }
        if r.consistency.is_none() || r.combos.len() != 4 {
            fail.push(format!("audit fields missing at {t}"));
        }
        let json = serde_json::to_value(&r).unwrap();
        if json.get("consistency").is_none() || json.get("combos").is_none() {
            fail.push(format!("audit fields not serialized at {t}"));
        }
    }
    conclude(4, &fail, &info);
}

#[test]
fn criterion_05_algebraic_laws() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let start = Instant::now();
    let report = verify::run(Suite::Laws, 10_000, 7).unwrap();
    let elapsed = start.elapsed();
    info.push(format!("{} checks", report.checks.len()));
    if report.checks.len() < 22 {
        fail.push("missing law checks".into());
    }
    for c in &report.checks {
        if c.failed > 0 || c.passed != 10_000 {
            fail.push(format!(
                "{}: {} passed, {} failed, {:?}",
                c.name, c.passed, c.failed, c.counterexample
            ));
        }
    }
    within_time(5, elapsed, Duration::from_secs(10), &mut fail, &mut info);
    conclude(5, &fail, &info);
}

#[test]
fn criterion_06_metric_and_gh_derivatives_agree() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let cfg = DiffConfig::default();
    for name in corpus::names() {
        let e = entry(name);
        if !e.function.has_analytic_derivatives() {
            continue;
        }
        // Same endpoints without analytic derivatives, so the metric
        // derivative has to come from difference quotients.
        let (lo, hi) = (e.function.lo_fn(), e.function.hi_fn());
        let numeric = IntervalFn::new(name, e.function.domain(), move |t| lo(t), move |t| hi(t));
        let mut worst = 0.0f64;
        for t in e.sample_points(20) {
            let (a, b) = e.function.analytic_derivative(t, Side::Right).unwrap();
            let gh = iv(a.min(b), a.max(b));
            for f in [&e.function, &numeric] {
                let r = classify_point(f, t, &cfg).unwrap();
                match r.derivative {
                    Some(d) => worst = worst.max(d.hausdorff(&gh)),
                    None => fail.push(format!("{name} at {t}: no metric derivative")),
                }
            }
        }
        info.push(format!("{name}: worst {worst:e}"));
        if worst > 1e-4 {
            fail.push(format!("{name}: {worst}"));
        }
    }
    conclude(6, &fail, &info);
}

#[test]
fn criterion_07_calculus_rules() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let cfg = DiffConfig::default();
    let sq = entry("sym_square").function;
    let ex = entry("exp_pair").function;
    let same = calculus_check(&sq, &sq, 1.0, &[-2.0, 0.5, 3.0], &cfg).unwrap();
    let mixed = calculus_check(&sq, &ex, 1.0, &[], &cfg).unwrap();
    for (report, case) in [(&same, "b"), (&mixed, "c")] {
        if !report.checks.iter().any(|c| c.case == case) {
            fail.push(format!("no case-{case} checks"));
        }
        for c in &report.checks {
            let tol = if c.case == "a" { 1e-6 } else { 1e-4 };
            info.push(format!("{} (case {}): {:?}", c.rule, c.case, c.residual));
            if !c.residual.is_some_and(|r| r <= tol) {
                fail.push(format!("{}: {:?} {:?}", c.rule, c.residual, c.skipped));
            }
        }
    }
    if same.checks.iter().filter(|c| c.case == "a").count() != 3 {
        fail.push("scalar rule not checked for every lambda".into());
    }
    conclude(7, &fail, &info);
}

#[test]
fn criterion_08_symmetric_limits() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let cfg = DiffConfig::default();
    let sq = entry("sym_square").function;
    let ex = entry("exp_pair").function;

    let h1 = classify_point(&sq, 1.0, &cfg).unwrap();
    let h2 = classify_point(&ex, 0.5, &cfg).unwrap();
    let zero = classify_point(&sq, 0.0, &cfg).unwrap();
    if h1.classification != Classification::H1 || h2.classification != Classification::H2 {
        fail.push("reference points are not H1/H2".into());
    }
    if zero.combo_count() < 2 {
        fail.push("reference singleton point has fewer than two pairs".into());
    }

    let s1 = symmetric_residuals(&sq, 1.0, iv(-2.0, 2.0), &cfg)
        .unwrap()
        .s1;
    let d = iv(-2.0 * (-0.5f64).exp(), -(-0.5f64).exp());
    let s2 = symmetric_residuals(&ex, 0.5, d, &cfg).unwrap().s2;
    let s3 = symmetric_residuals(&sq, 0.0, Interval::ZERO, &cfg)
        .unwrap()
        .s3;
    for (label, est) in [("s1", &s1), ("s2", &s2), ("s3", &s3)] {
        info.push(format!(
            "{label}: {} floor {:e}",
            est.verdict.as_str(),
            est.floor
        ));
        if !est.verdict.converges() || est.floor > 1e-4 {
            fail.push(label.into());
        }
    }
    conclude(8, &fail, &info);
}

#[test]
fn criterion_09_integral_properties() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let q = QuadConfig::default();
    let start = Instant::now();

    let ramp = corpus::lookup(
        "linear_cone",
        &Params::from([("lo".into(), 0.0), ("hi".into(), 1.0)]),
    )
    .unwrap();
    let r = integrate(&ramp.function, 0.0, 1.0, &q).unwrap().value;
    let e1 = r.hausdorff(&iv(0.0, 0.5));
    let c = 1.0 - (-1f64).exp();
    let x = integrate(&entry("exp_pair").function, 0.0, 1.0, &q)
        .unwrap()
        .value;
    let e2 = x.hausdorff(&iv(c, 2.0 * c));
    info.push(format!("ramp error {e1:e}, exponential error {e2:e}"));
    if e1 > 1e-7 || e2 > 1e-7 {
        fail.push("worked integrals".into());
    }

    let report = verify::run(Suite::Integral, 100, 9).unwrap();
    for name in [
        "linearity",
        "additive_over_ranges",
        "distance_bound",
        "mean_in_hull",
    ] {
        match report.check(name) {
            Some(c) => {
                info.push(format!("{name}: {} passed, {} failed", c.passed, c.failed));
                if c.failed > 0 || c.passed != 100 {
                    fail.push(format!("{name}: {:?}", c.counterexample));
                }
            }
            None => fail.push(format!("{name} missing")),
        }
    }
    within_time(
        9,
        start.elapsed(),
        Duration::from_secs(10),
        &mut fail,
        &mut info,
    );
    conclude(9, &fail, &info);
}

#[test]
fn criterion_10_fundamental_theorem() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let (q, d) = (QuadConfig::default(), DiffConfig::default());
    let sq = entry("sym_square").function;

    let g = primitive(&sq, 0.0, &q).unwrap();
    let mut worst = 0.0f64;
    for k in 0..20 {
        let t = (k as f64 + 0.5) / 10.0;
        let r = classify_point(&g, t, &d).unwrap();
        if r.classification != Classification::H1 {
            fail.push(format!("primitive at {t} is {}", r.classification.as_str()));
        }
        match r.derivative {
            Some(dg) => worst = worst.max(dg.hausdorff(&iv(-t * t, t * t))),
            None => fail.push(format!("primitive at {t} has no derivative")),
        }
    }
    info.push(format!("primitive derivative worst error {worst:e}"));
    if worst > 1e-3 {
        fail.push("primitive derivative".into());
    }

    let ex = entry("exp_pair").function;
    for t in [0.25, 0.5, 0.75, 1.0f64] {
        let r1 = reconstruct_h1(&sq, 0.0, t, &d, &q).unwrap().value;
        let r2 = reconstruct_h2(&ex, 0.0, t, &d, &q).unwrap().value;
        let e1 = r1.hausdorff(&iv(-t * t, t * t));
        let e2 = r2.hausdorff(&iv((-t).exp(), 2.0 * (-t).exp()));
        info.push(format!("t={t}: h1 error {e1:e}, h2 error {e2:e}"));
        if e1 > 1e-5 || e2 > 1e-5 {
            fail.push(format!("reconstruction at {t}"));
        }
    }
    conclude(10, &fail, &info);
}

#[test]
fn criterion_11_law_reports_are_reproducible() {
    let (mut fail, mut info) = (Vec::new(), Vec::new());
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ivcalc"))
            .args([
                "verify", "--suite", "laws", "--cases", "10000", "--seed", "7",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    info.push(format!(
        "report sizes {} and {} bytes",
        a.stdout.len(),
        b.stdout.len()
    ));
    if a.status.code() != Some(0) || b.status.code() != Some(0) {
        fail.push(format!(
            "exit codes {:?} {:?}",
            a.status.code(),
            b.status.code()
        ));
    }
    if a.stdout.is_empty() || a.stdout != b.stdout {
        fail.push("reports differ".into());
    }
    conclude(11, &fail, &info);
}
