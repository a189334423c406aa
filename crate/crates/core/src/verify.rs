//! Self-verification: every exact identity and numerical cross-check the
//! library relies on, run against built-in or user-supplied covering data.

use std::fmt;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::covering::{
    eisenstein_residual, eta_quotient_expansion, log_series_coefficients,
    log_series_coefficients_via_series, EtaQuotientSpec, Level,
};
use crate::error::Result;
use crate::metric::{ComplexPoint, MetricEvaluator};
use crate::picard::RadiusEvaluator;
use crate::rational::{int, ratio};
use crate::{gamma3_covering, invert_covering_series, lambda_covering};
use crate::{CoveringData, Extended, Rational, TruncatedSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn push_result(&mut self, name: impl Into<String>, outcome: Result<(bool, String)>) {
        match outcome {
            Ok((passed, detail)) => self.push(name, passed, detail),
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }

    fn extend(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.push(format!("{prefix}: {}", c.name), c.passed, c.detail);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag}  {:<52} {}", c.name, c.detail)?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// Number of nonzero entries and the first offending index.
fn nonzero_summary(values: &[Rational]) -> (bool, String) {
    let bad: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, _)| i)
        .collect();
    match bad.first() {
        None => (
            true,
            format!("{} coefficients, all residuals 0", values.len()),
        ),
        Some(i) => (
            false,
            format!("{} nonzero residuals, first at index {i}", bad.len()),
        ),
    }
}

fn diff(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned();
            let y = b.get(i).cloned();
            match (x, y) {
                (Some(x), Some(y)) => x - y,
                // length mismatch counts as a residual
                _ => int(1),
            }
        })
        .collect()
}

/// Checks the algebraic invariants of a single covering dataset.
pub fn check_covering(data: &CoveringData) -> Report {
    let mut r = Report::default();
    let b1_ok = data.b()[0].clone() * data.c()[0].clone() == int(1);
    r.push(
        "b1 = 1/c1",
        b1_ok,
        if b1_ok { "exact" } else { "b1 * c1 != 1" },
    );

    r.push_result(
        "composition c(b(x)) = x",
        data.composition_residual()
            .map(|res| nonzero_summary(&res.dense())),
    );

    r.push_result(
        "Newton reversion reproduces b",
        TruncatedSeries::new(1, data.c().to_vec())
            .invert_newton()
            .map(|newton| nonzero_summary(&diff(&newton.dense()[1..], data.b()))),
    );

    r.push_result(
        "Bell reversion reproduces b",
        invert_covering_series(data.c(), data.order())
            .map(|bell| nonzero_summary(&diff(&bell, data.b()))),
    );

    let m = data.order() - 1;
    r.push_result(
        "Bell l_m reproduces l",
        log_series_coefficients(data.b(), m).map(|l| nonzero_summary(&diff(&l, data.l()))),
    );
    r.push_result(
        "series-log l_m reproduces l",
        log_series_coefficients_via_series(data.b(), m)
            .map(|l| nonzero_summary(&diff(&l, data.l()))),
    );

    if let Level::Modular(_) = data.level() {
        if data.order() >= 3 {
            r.push_result(
                "Eisenstein relation 1 - q^2{f,q} = E4",
                eisenstein_residual(data).map(|res| nonzero_summary(&res.dense())),
            );
        }
    }
    r
}

/// Random rational series with nonzero linear term, as dense coefficients c_1..c_order.
pub fn random_rational_coefficients(rng: &mut impl Rng, order: usize) -> Vec<Rational> {
    (0..order)
        .map(|i| loop {
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=5);
            if i > 0 || num != 0 {
                break ratio(num, den);
            }
        })
        .collect()
}

fn eta_oracle_check(data: &CoveringData, spec: &EtaQuotientSpec) -> Result<(bool, String)> {
    let eta = eta_quotient_expansion(spec, data.order() + 1)?;
    Ok(nonzero_summary(&diff(&eta.dense()[1..], data.c())))
}

fn relative_gap(a: Extended, b: Extended) -> f64 {
    let gap = ((a - b) / b).abs().to_f64();
    if gap.is_nan() {
        f64::INFINITY
    } else {
        gap
    }
}

/// Expansion (M = 6) against the direct route on three radii; returns the gaps.
pub fn expansion_gaps(data: &CoveringData, theta: f64) -> Result<Vec<f64>> {
    let eval = MetricEvaluator::<Extended>::new(data);
    let one = Extended::from(1.0);
    [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&r| {
            let p = ComplexPoint::from_polar(Extended::from(r), theta)?;
            let e = eval.expansion(p, one, 6)?;
            let d = eval.direct(p, one)?;
            Ok(relative_gap(e.value, d.value))
        })
        .collect()
}

fn gap_check(data: &CoveringData) -> Result<(bool, String)> {
    let mut ok = true;
    let mut worst = Vec::new();
    for theta in [0.0, std::f64::consts::FRAC_PI_3, std::f64::consts::PI] {
        let g = expansion_gaps(data, theta)?;
        ok &= g[0] <= 1e-3 && g[1] * 10.0 <= g[0] && g[2] * 10.0 <= g[1];
        worst.push(format!("{:.1e}/{:.1e}/{:.1e}", g[0], g[1], g[2]));
    }
    Ok((
        ok,
        format!("gaps at r=1e-2/1e-3/1e-4: {}", worst.join(", ")),
    ))
}

fn picard_check(data: &CoveringData) -> Result<(bool, String)> {
    let eval = RadiusEvaluator::<Extended>::new(data)?;
    let p = ComplexPoint::real(Extended::from(1e-3))?;
    let bound = eval.bound(p, 4.min(data.l().len()))?.bound;
    let direct = eval.direct_reciprocal(p)?;
    let gap = relative_gap(bound, direct);
    Ok((gap <= 1e-6, format!("p=1e-3, M=4: relative gap {gap:.2e}")))
}

/// Full suite on the built-in datasets at the given order (at least 8).
pub fn run_builtin(order: usize) -> Report {
    let order = order.max(8);
    let mut report = Report::default();

    for (name, data, spec) in [
        (
            "lambda",
            lambda_covering(order),
            EtaQuotientSpec::modular_lambda(),
        ),
        ("gamma3", gamma3_covering(order), EtaQuotientSpec::gamma3()),
    ] {
        let data = match data {
            Ok(d) => d,
            Err(e) => {
                report.push(format!("{name}: solve"), false, format!("error: {e}"));
                continue;
            }
        };
        report.extend(name, check_covering(&data));
        report.push_result(
            format!("{name}: eta-quotient oracle"),
            eta_oracle_check(&data, &spec),
        );
        report.push_result(
            format!("{name}: expansion vs direct metric"),
            gap_check(&data),
        );
        report.push_result(
            format!("{name}: Picard bound vs 1/chi"),
            picard_check(&data),
        );
    }

    report.push_result("gamma3: printed example values", gamma3_example());

    let mut rng = StdRng::seed_from_u64(0x5eed);
    let trials = 20;
    let mut failures = 0;
    for t in 0..trials {
        let m = 2 + (t % 14).min(order - 2);
        let c = random_rational_coefficients(&mut rng, m);
        match CoveringData::from_coefficients(Level::UserSupplied, int(1), c) {
            Ok(d) => failures += usize::from(!check_covering(&d).passed()),
            Err(_) => failures += 1,
        }
    }
    report.push(
        "random series: reversion and log identities",
        failures == 0,
        format!("{trials} trials, {failures} failed"),
    );
    report
}

fn gamma3_example() -> Result<(bool, String)> {
    let d = gamma3_covering(3)?;
    let ok = d.c()[2] == int(9) && d.b() == [int(1), int(-3), int(9)];
    Ok((ok, "c3 = 9, b = (1, -3, 9)".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_suite_passes() {
        let report = run_builtin(10);
        println!("{report}");
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn corruption_is_named() {
        let d = lambda_covering(6).unwrap();
        let mut b = d.b().to_vec();
        b[3] += ratio(1, 7);
        let bad = CoveringData::from_parts(
            d.level(),
            d.scale_k().clone(),
            d.c().to_vec(),
            b,
            d.l().to_vec(),
        )
        .unwrap();
        let report = check_covering(&bad);
        assert!(!report.passed());
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"composition c(b(x)) = x"), "{names:?}");
    }
}
