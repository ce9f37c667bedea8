//! `ivcalc`: classify, integrate and reconstruct corpus functions, run the
//! randomized check suites, and list the corpus.
//!
//! Reports go to stdout as JSON (default) or CSV. Plots go to `--out`.
//! Exit codes: 0 on a delivered result, 1 on usage or precondition errors,
//! 2 when a verify suite has failing cases.

mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ivcalc::corpus::{self, CorpusEntry, Params};
use ivcalc::derivative::{classify_point, DiffConfig};
use ivcalc::integral::{integrate, reconstruct_h1, reconstruct_h2, Partition, QuadConfig, TagRule};
use ivcalc::verify::{self, Suite};
use ivcalc::{HSchedule, IntervalFn};
use serde::Serialize;
use serde_json::{json, Map, Value};

use svg::{Scale, Series};

const SCHEMA: &str = "ivcalc/1";
const TOL_ENV: &str = "IVCALC_DEFAULT_TOL";

#[derive(Parser)]
#[command(
    name = "ivcalc",
    version,
    about = "Metric calculus for interval-valued functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify differentiability of a corpus function at a point.
    Classify {
        #[command(flatten)]
        function: FnArgs,
        /// Point of evaluation.
        #[arg(long = "t", allow_hyphen_values = true)]
        t: f64,
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate a corpus function over [a, b].
    Integrate {
        #[command(flatten)]
        function: FnArgs,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rebuild F(t) from F(a) and the integral of its derivative.
    Reconstruct {
        #[command(flatten)]
        function: FnArgs,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long = "t", allow_hyphen_values = true)]
        t: f64,
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a seeded randomized check suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1000)]
        cases: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Print the corpus registry.
    List {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct FnArgs {
    /// Corpus entry name (see `list`).
    #[arg(long = "fn", value_name = "NAME")]
    name: String,
    /// Entry parameter, e.g. `--param lo=-1`. Repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Largest step of the h-schedule.
    #[arg(long)]
    h0: Option<f64>,
    /// Geometric ratio between steps, in (0, 1).
    #[arg(long)]
    ratio: Option<f64>,
    /// Number of steps.
    #[arg(long)]
    count: Option<usize>,
    /// Convergence tolerance; falls back to IVCALC_DEFAULT_TOL.
    #[arg(long)]
    atol: Option<f64>,
}

#[derive(Args)]
struct QuadArgs {
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    max_doublings: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    tag: Option<Tag>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write SVG plots to the output directory.
    #[arg(long)]
    plot: bool,
    /// Directory for file artifacts.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    H1,
    H2,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Laws,
    Derivative,
    Integral,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Laws => Suite::Laws,
            SuiteArg::Derivative => Suite::Derivative,
            SuiteArg::Integral => Suite::Integral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Tag {
    Left,
    Right,
    Midpoint,
}

impl From<Tag> for TagRule {
    fn from(t: Tag) -> TagRule {
        match t {
            Tag::Left => TagRule::Left,
            Tag::Right => TagRule::Right,
            Tag::Midpoint => TagRule::Midpoint,
        }
    }
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

enum Failure {
    Precondition(String),
    SuiteFailed,
}

impl From<ivcalc::Error> for Failure {
    fn from(e: ivcalc::Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = run(cli.command);
    if let Err(Failure::Precondition(msg)) = &outcome {
        eprintln!("error: {msg}");
    }
    ExitCode::from(exit_status(&outcome))
}

fn exit_status(outcome: &Outcome) -> u8 {
    match outcome {
        Ok(()) => 0,
        Err(Failure::Precondition(_)) => 1,
        Err(Failure::SuiteFailed) => 2,
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Classify {
            function,
            t,
            schedule,
            output,
        } => classify(&function, t, &schedule, &output),
        Command::Integrate {
            function,
            a,
            b,
            quad,
            output,
        } => integral(&function, a, b, &quad, &output),
        Command::Reconstruct {
            function,
            mode,
            a,
            t,
            schedule,
            quad,
            output,
        } => reconstruct(&function, mode, a, t, &schedule, &quad, &output),
        Command::Verify {
            suite,
            cases,
            seed,
            format,
        } => run_suite(suite.into(), cases, seed, format),
        Command::List { format } => list(format),
    }
}

fn load(args: &FnArgs) -> Result<(CorpusEntry, Params), Failure> {
    let params: Params = args.params.iter().cloned().collect();
    let entry = corpus::lookup(&args.name, &params)?;
    Ok((entry, params))
}

fn default_atol() -> Result<f64, Failure> {
    match std::env::var(TOL_ENV) {
        Ok(raw) => match raw.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(Failure::Precondition(format!(
                "{TOL_ENV} must be a positive number, got `{raw}`"
            ))),
        },
        Err(_) => Ok(DiffConfig::default().atol),
    }
}

fn diff_config(args: &ScheduleArgs) -> Result<DiffConfig, Failure> {
    let mut cfg = DiffConfig::default();
    let base = cfg.schedule;
    cfg.schedule = HSchedule::new(
        args.h0.unwrap_or(base.h0()),
        args.ratio.unwrap_or(base.ratio()),
        args.count.unwrap_or(base.count()),
    )?;
    cfg.atol = match args.atol {
        Some(v) if v.is_finite() && v > 0.0 => v,
        Some(v) => {
            return Err(Failure::Precondition(format!(
                "--atol must be positive, got {v}"
            )))
        }
        None => default_atol()?,
    };
    Ok(cfg)
}

fn quad_config(args: &QuadArgs) -> Result<QuadConfig, Failure> {
    let base = QuadConfig::default();
    Ok(QuadConfig::new(
        args.cells.unwrap_or(base.initial_cells),
        args.max_doublings.unwrap_or(base.max_doublings),
        args.tol.unwrap_or(base.tol),
        args.tag.map_or(base.tag_rule, TagRule::from),
    )?)
}

/// Top-level report object: schema and command first, then `body`'s fields.
fn envelope(command: &str, body: impl Serialize) -> Result<Map<String, Value>, Failure> {
    let mut map = Map::new();
    map.insert("schema".into(), SCHEMA.into());
    map.insert("command".into(), command.into());
    match serde_json::to_value(body).map_err(|e| Failure::Precondition(e.to_string()))? {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Ok(map)
}

fn print_json(map: Map<String, Value>) {
    let text = serde_json::to_string_pretty(&Value::Object(map)).expect("JSON values serialize");
    println!("{text}");
}

fn write_plot(out: &Path, file: &str, svg: String) {
    let path = out.join(file);
    let written = std::fs::create_dir_all(out).and_then(|()| std::fs::write(&path, svg));
    if let Err(e) = written {
        eprintln!("warning: could not write {}: {e}", path.display());
    }
}

/// Lower and upper endpoint curves sampled on `[a, b]` inside the domain.
fn endpoint_series(f: &IntervalFn, a: f64, b: f64) -> Vec<Series> {
    const SAMPLES: usize = 201;
    let domain = f.domain();
    let ts = (0..SAMPLES)
        .map(|i| a + (b - a) * i as f64 / (SAMPLES - 1) as f64)
        .filter(|&t| domain.contains(t));
    let (lo, hi): (Vec<_>, Vec<_>) = ts
        .map(|t| {
            let (l, h) = f.endpoints(t);
            ((t, l), (t, h))
        })
        .unzip();
    vec![
        Series {
            label: "lower".into(),
            points: lo,
        },
        Series {
            label: "upper".into(),
            points: hi,
        },
    ]
}

fn classify(args: &FnArgs, t: f64, sched: &ScheduleArgs, output: &OutputArgs) -> Outcome {
    let (entry, params) = load(args)?;
    let cfg = diff_config(sched)?;
    let report = classify_point(&entry.function, t, &cfg)?;

    if output.plot {
        let series: Vec<Series> = report
            .traces
            .iter()
            .map(|(v, est)| Series {
                label: v.as_str().into(),
                points: est.residuals.clone(),
            })
            .collect();
        let title = format!("{} residuals at t = {t}", entry.name);
        write_plot(
            &output.out,
            &format!("{}_residuals.svg", entry.name),
            svg::chart(&title, "h", "residual", Scale::LogLog, &series),
        );
        let title = format!("{} endpoints", entry.name);
        write_plot(
            &output.out,
            &format!("{}_endpoints.svg", entry.name),
            svg::chart(
                &title,
                "t",
                "F(t)",
                Scale::Linear,
                &endpoint_series(&entry.function, t - 1.0, t + 1.0),
            ),
        );
    }

    match output.format {
        Format::Csv => {
            let mut csv = String::from("h,residual,variant\n");
            for (variant, est) in &report.traces {
                for (h, r) in &est.residuals {
                    let _ = writeln!(csv, "{h},{r},{}", variant.as_str());
                }
            }
            print!("{csv}");
        }
        Format::Json => {
            let expected = entry.expected.iter().find(|p| p.t == t);
            let mut map = envelope("classify", &report)?;
            map.insert("function".into(), entry.name.into());
            map.insert("params".into(), json!(params));
            map.insert("config".into(), json!(cfg));
            map.insert("expected".into(), json!(expected));
            print_json(map);
        }
    }
    Ok(())
}

fn integral(args: &FnArgs, a: f64, b: f64, quad: &QuadArgs, output: &OutputArgs) -> Outcome {
    let (entry, params) = load(args)?;
    let cfg = quad_config(quad)?;
    let result = integrate(&entry.function, a, b, &cfg)?;

    if output.plot {
        let title = format!("{} on [{a}, {b}]", entry.name);
        write_plot(
            &output.out,
            &format!("{}_integrand.svg", entry.name),
            svg::chart(
                &title,
                "t",
                "F(t)",
                Scale::Linear,
                &endpoint_series(&entry.function, a, b),
            ),
        );
    }

    match output.format {
        Format::Csv => {
            if result.cells == 0 {
                println!("node,tag\n{a},");
            } else {
                print!(
                    "{}",
                    Partition::uniform(a, b, result.cells, cfg.tag_rule)?.to_csv()
                );
            }
        }
        Format::Json => {
            let mut map = envelope("integrate", result)?;
            map.insert("function".into(), entry.name.into());
            map.insert("params".into(), json!(params));
            map.insert("a".into(), json!(a));
            map.insert("b".into(), json!(b));
            map.insert("config".into(), json!(cfg));
            print_json(map);
        }
    }
    Ok(())
}

fn reconstruct(
    args: &FnArgs,
    mode: Mode,
    a: f64,
    t: f64,
    sched: &ScheduleArgs,
    quad: &QuadArgs,
    output: &OutputArgs,
) -> Outcome {
    let (entry, params) = load(args)?;
    let diff = diff_config(sched)?;
    let cfg = quad_config(quad)?;
    let (rec, mode_name) = match mode {
        Mode::H1 => (reconstruct_h1(&entry.function, a, t, &diff, &cfg)?, "h1"),
        Mode::H2 => (reconstruct_h2(&entry.function, a, t, &diff, &cfg)?, "h2"),
    };

    if output.plot {
        let title = format!("{} on [{a}, {t}]", entry.name);
        write_plot(
            &output.out,
            &format!("{}_reconstruct.svg", entry.name),
            svg::chart(
                &title,
                "t",
                "F(t)",
                Scale::Linear,
                &endpoint_series(&entry.function, a, t),
            ),
        );
    }

    match output.format {
        Format::Csv => {
            println!("t,lo,hi,target_lo,target_hi,residual");
            println!(
                "{t},{},{},{},{},{}",
                rec.value.lo(),
                rec.value.hi(),
                rec.target.lo(),
                rec.target.hi(),
                rec.residual
            );
        }
        Format::Json => {
            let mut map = envelope("reconstruct", rec)?;
            map.insert("function".into(), entry.name.into());
            map.insert("params".into(), json!(params));
            map.insert("mode".into(), mode_name.into());
            map.insert("a".into(), json!(a));
            map.insert("t".into(), json!(t));
            print_json(map);
        }
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run_suite(suite: Suite, cases: u64, seed: u64, format: Format) -> Outcome {
    let report = verify::run(suite, cases, seed)?;
    match format {
        Format::Csv => {
            let mut csv = String::from("check,passed,failed,skipped,counterexample\n");
            for c in &report.checks {
                let cx = c
                    .counterexample
                    .as_deref()
                    .map(csv_field)
                    .unwrap_or_default();
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{cx}",
                    c.name, c.passed, c.failed, c.skipped
                );
            }
            print!("{csv}");
        }
        Format::Json => print_json(envelope("verify", &report)?),
    }
    if !report.all_passed() {
        if let Some(c) = report.checks.iter().find(|c| c.failed > 0) {
            let cx = c.counterexample.as_deref().unwrap_or("");
            eprintln!("{}: {} failing case(s); first: {cx}", c.name, c.failed);
        }
        return Err(Failure::SuiteFailed);
    }
    Ok(())
}

fn list(format: Format) -> Outcome {
    let items = corpus::list();
    match format {
        Format::Csv => {
            println!("name,formula,domain");
            for it in &items {
                println!(
                    "{},{},{}",
                    it.name,
                    csv_field(it.formula),
                    csv_field(&it.domain)
                );
            }
        }
        Format::Json => {
            let mut map = envelope("list", ())?;
            map.remove("result");
            map.insert("entries".into(), json!(items));
            print_json(map);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_statuses() {
        assert_eq!(exit_status(&Ok(())), 0);
        assert_eq!(exit_status(&Err(Failure::Precondition("x".into()))), 1);
        assert_eq!(exit_status(&Err(Failure::SuiteFailed)), 2);
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("lo=-0.5"), Ok(("lo".into(), -0.5)));
        assert!(parse_param("lo").is_err());
        assert!(parse_param("lo=x").is_err());
    }

    #[test]
    fn csv_fields_are_quoted_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("[0, 1]"), "\"[0, 1]\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }
}
