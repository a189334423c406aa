mod args;
mod output;
mod source;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};

use puncture_metric::picard::RadiusEvaluator;
use puncture_metric::verify::{check_covering, run_builtin, Report};
use puncture_metric::{ComplexPoint, CoveringData, EvalFloat, Extended, MetricEvaluator};

use args::{Cli, Command, Format, MetricArgs, PointArgs, Precision, RadiusArgs};
use output::{emit, print, print_json, Table};
use source::{built_in, rational};

const GRID_SIDE: usize = 16;
const GRID_MIN_EXP: f64 = -4.0;
const GRID_MAX_EXP: f64 = -2.0;
const DEFAULT_METRIC_ORDER: usize = 6;
const DEFAULT_RADIUS_ORDER: usize = 3;

#[derive(Debug)]
pub enum CliError {
    Lib(puncture_metric::Error),
    Usage(String),
    Io(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<puncture_metric::Error> for CliError {
    fn from(e: puncture_metric::Error) -> Self {
        CliError::Lib(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.render().to_string().trim().to_string())),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    let obj = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
    eprintln!("{obj}");
    ExitCode::from(2)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let precision = cli.precision;
    let format = cli.format;
    match cli.command {
        Command::Coeffs(a) => {
            if !a.source.is_given() {
                return Err(CliError::Usage(
                    "coeffs needs --N with --c1 and --c2, --c, --example or --coeffs-file".into(),
                ));
            }
            print_covering(&a.source.load()?, format.unwrap_or(Format::Json));
        }
        Command::Example(a) => match a.name {
            Some(which) => {
                print_covering(&built_in(which, a.order)?, format.unwrap_or(Format::Json))
            }
            None => list_examples(format.unwrap_or(Format::Json)),
        },
        Command::Metric(a) => {
            let data = a.source.load()?;
            let fmt = format.unwrap_or(Format::Json);
            match precision {
                Precision::Double => metric::<f64>(&a, &data, fmt)?,
                Precision::Extended => metric::<Extended>(&a, &data, fmt)?,
            }
        }
        Command::Radius(a) => {
            let data = a.source.load()?;
            let fmt = format.unwrap_or(Format::Json);
            match precision {
                Precision::Double => radius::<f64>(&a, &data, fmt)?,
                Precision::Extended => radius::<Extended>(&a, &data, fmt)?,
            }
        }
        Command::Verify(a) => {
            let report = if a.source.is_given() {
                check_covering(&a.source.load_unchecked()?)
            } else {
                run_builtin(a.source.order)
            };
            return Ok(print_report(&report, format.unwrap_or(Format::Human)));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_covering(data: &CoveringData, format: Format) {
    match format {
        Format::Json => print(data.to_json()),
        Format::Csv | Format::Human => {
            let show = |v: &[puncture_metric::Rational], i: usize| {
                v.get(i)
                    .map(puncture_metric::rational::format_rational)
                    .unwrap_or_default()
            };
            let mut t = Table::new(["m", "c", "b", "l"]);
            for i in 0..data.order() {
                t.row([
                    (i + 1).to_string(),
                    show(data.c(), i),
                    show(data.b(), i),
                    show(data.l(), i),
                ]);
            }
            emit(&t, format);
        }
    }
}

fn list_examples(format: Format) {
    let rows = [
        (
            "lambda",
            2,
            "16",
            "-128",
            "modular lambda function, CP1 minus {0, 1, inf}",
        ),
        (
            "gamma3",
            3,
            "1",
            "3",
            "Gamma(3) hauptmodul (eta(3 tau)/eta(tau/3))^3",
        ),
    ];
    match format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(name, n, c1, c2, about)| {
                    json!({ "name": name, "level_N": n, "c1": c1, "c2": c2, "description": about })
                })
                .collect();
            print_json(&Value::from(list));
        }
        _ => {
            let mut t = Table::new(["name", "N", "c1", "c2", "description"]);
            for (name, n, c1, c2, about) in rows {
                t.row([
                    name.to_string(),
                    n.to_string(),
                    c1.into(),
                    c2.into(),
                    about.into(),
                ]);
            }
            emit(&t, format);
        }
    }
}

fn number<F: EvalFloat>(x: F) -> Value {
    json!(x.to_f64())
}

fn point<F: EvalFloat>(p: &PointArgs) -> Result<ComplexPoint<F>, CliError> {
    let re =
        p.re.as_deref()
            .ok_or_else(|| CliError::Usage("--re is required (or use --grid)".into()))?;
    let re = F::from_rational(&rational("re", re)?);
    let im = F::from_rational(&rational("im", &p.im)?);
    Ok(ComplexPoint::new(re, im)?)
}

fn truncation(p: &PointArgs, data: &CoveringData, default: usize) -> usize {
    p.m.unwrap_or_else(|| default.min(data.order() - 1))
}

fn relative_gap<F: EvalFloat>(a: F, b: F) -> F {
    ((a - b) / b).abs()
}

/// Polar grid on the annulus, radius-major, log-spaced radii.
fn grid_points() -> Vec<(f64, f64)> {
    let step = (GRID_MAX_EXP - GRID_MIN_EXP) / (GRID_SIDE - 1) as f64;
    (0..GRID_SIDE)
        .flat_map(|i| {
            let r = 10f64.powf(GRID_MIN_EXP + step * i as f64);
            (0..GRID_SIDE).map(move |j| (r, std::f64::consts::TAU * j as f64 / GRID_SIDE as f64))
        })
        .collect()
}

fn metric<F: EvalFloat>(
    a: &MetricArgs,
    data: &CoveringData,
    format: Format,
) -> Result<(), CliError> {
    let v = rational("v-norm", &a.v_norm)?;
    if v < puncture_metric::rational::int(0) {
        return Err(CliError::Usage("--v-norm must be nonnegative".into()));
    }
    let v = F::from_rational(&v);
    let m = truncation(&a.point, data, DEFAULT_METRIC_ORDER);
    let eval = MetricEvaluator::<F>::new(data);

    if a.grid {
        let rows = grid_points()
            .par_iter()
            .map(|&(r, theta)| {
                let p = ComplexPoint::from_polar(F::from_f64(r), theta)?;
                Ok((p, eval.expansion(p, v, m)?.value))
            })
            .collect::<Result<Vec<_>, puncture_metric::Error>>()?;
        match format {
            Format::Json => {
                let points: Vec<Value> = rows
                    .iter()
                    .map(|(p, chi)| json!({ "re": number(p.re), "im": number(p.im), "chi": number(*chi) }))
                    .collect();
                let out =
                    json!({ "precision": F::NAME, "M": m, "v_norm": number(v), "points": points });
                print_json(&out);
            }
            _ => {
                let mut t = Table::new(["re", "im", "chi", "order"]);
                for (p, chi) in &rows {
                    t.row([
                        p.re.to_scientific(),
                        p.im.to_scientific(),
                        chi.to_scientific(),
                        m.to_string(),
                    ]);
                }
                emit(&t, format);
            }
        }
        return Ok(());
    }

    let p = point::<F>(&a.point)?;
    let expansion = eval.expansion(p, v, m)?;
    let direct = eval.direct(p, v)?;
    let gap = if direct.value.is_zero() {
        F::zero()
    } else {
        relative_gap(expansion.value, direct.value)
    };
    match format {
        Format::Json => {
            let terms: Vec<Value> = expansion
                .term_breakdown
                .iter()
                .enumerate()
                .map(|(i, t)| json!({ "m": i + 1, "re": number(t.re), "im": number(t.im) }))
                .collect();
            let out = json!({
                "precision": F::NAME,
                "p": { "re": number(p.re), "im": number(p.im) },
                "v_norm": number(v),
                "M": m,
                "chi": number(expansion.value),
                "chi_text": expansion.value.to_scientific(),
                "direct": number(direct.value),
                "direct_text": direct.value.to_scientific(),
                "relative_gap": number(gap),
                "terms": terms,
            });
            print_json(&out);
        }
        _ => {
            let mut t = Table::new(["re", "im", "chi", "order"]);
            t.row([
                p.re.to_scientific(),
                p.im.to_scientific(),
                expansion.value.to_scientific(),
                m.to_string(),
            ]);
            if format == Format::Human {
                t.footer(format!(
                    "direct {}  relative gap {:.3e}",
                    direct.value.to_scientific(),
                    gap.to_f64()
                ));
            }
            emit(&t, format);
        }
    }
    Ok(())
}

fn radius<F: EvalFloat>(
    a: &RadiusArgs,
    data: &CoveringData,
    format: Format,
) -> Result<(), CliError> {
    let m = truncation(&a.point, data, DEFAULT_RADIUS_ORDER);
    let p = point::<F>(&a.point)?;
    let eval = RadiusEvaluator::<F>::new(data)?;
    let bound = eval.bound(p, m)?;
    let direct = eval.direct_reciprocal(p)?;
    let gap = relative_gap(bound.bound, direct);
    match format {
        Format::Json => {
            let out = json!({
                "precision": F::NAME,
                "p": { "re": number(p.re), "im": number(p.im) },
                "M": m,
                "bound": number(bound.bound),
                "bound_text": bound.bound.to_scientific(),
                "leading_term": number(bound.leading_term),
                "direct_reciprocal": number(direct),
                "relative_gap": number(gap),
            });
            print_json(&out);
        }
        _ => {
            let mut t = Table::new(["re", "im", "bound", "direct_reciprocal", "order"]);
            t.row([
                p.re.to_scientific(),
                p.im.to_scientific(),
                bound.bound.to_scientific(),
                direct.to_scientific(),
                m.to_string(),
            ]);
            emit(&t, format);
        }
    }
    Ok(())
}

fn print_report(report: &Report, format: Format) -> ExitCode {
    match format {
        Format::Human => print(report),
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
            let out = json!({ "passed": report.passed(), "checks": checks, "failed": failed });
            print_json(&out);
        }
        Format::Csv => {
            let mut t = Table::new(["check", "status", "detail"]);
            for c in &report.checks {
                t.row([
                    c.name.clone(),
                    if c.passed { "PASS" } else { "FAIL" }.into(),
                    c.detail.clone(),
                ]);
            }
            emit(&t, Format::Csv);
        }
    }
    if report.passed() {
        return ExitCode::SUCCESS;
    }
    let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    eprintln!("verify failed: {}", names.join("; "));
    ExitCode::from(1)
}
