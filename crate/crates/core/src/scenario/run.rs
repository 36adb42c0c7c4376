use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{Mode, Scenario};
use crate::distributions::{
    moment_sequence_with, Density, DistributionInput, GrowthClass, MomentSequence,
};
use crate::error::{Error, Result};
use crate::expansion::{
    compare_printed_small_a_coefficients, expansion_large_a, expansion_small_a,
    mexican_hat_small_a_printed_coeffs, next_surviving_order, small_a_reference, ExpansionResult,
};
use crate::transform::{self, FOURIER_CONVENTION};
use crate::verify::{self, OrderFitReport, DEFAULT_FLOOR};

/// One pass/fail line of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub scenario: String,
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {}", self.scenario);
        for note in &self.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {} {:<40} {:<24} limit {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                format!("{:e}", c.value),
                c.limit
            );
        }
        for f in &self.files {
            let _ = writeln!(out, "  wrote {}", f.display());
        }
        out
    }

    /// Only the failing checks, as a table.
    pub fn failure_table(&self) -> String {
        let mut out = format!("{:<40} {:<24} {}\n", "check", "value", "limit");
        for c in self.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(
                out,
                "{:<40} {:<24} {}",
                c.name,
                format!("{:e}", c.value),
                c.limit
            );
        }
        out
    }

    fn check(
        &mut self,
        name: impl Into<String>,
        value: f64,
        limit: impl Into<String>,
        passed: bool,
    ) {
        self.checks.push(Check {
            name: name.into(),
            value,
            limit: limit.into(),
            passed,
        });
    }
}

/// Shortest decimal that parses back to the same `f64`.
fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Writes a CSV file with a header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let io = |source: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
    w.write_record(header).map_err(|e| io(e.into()))?;
    for row in rows {
        w.write_record(row).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

struct Writer<'a> {
    dir: &'a Path,
    name: &'a str,
    report: &'a mut RunReport,
}

impl Writer<'_> {
    fn csv(&mut self, suffix: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.dir.join(format!("{}_{suffix}.csv", self.name));
        write_csv(&path, header, rows)?;
        self.report.files.push(path);
        Ok(())
    }
}

/// Runs a scenario, writing its CSV files into `out_dir`.
pub fn run_scenario(s: &Scenario, out_dir: &Path) -> Result<RunReport> {
    fs::create_dir_all(out_dir).map_err(|source| Error::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut report = RunReport {
        scenario: s.name.clone(),
        ..Default::default()
    };
    match s.mode {
        Mode::LargeA => run_large_a(s, out_dir, &mut report)?,
        Mode::SmallA => run_small_a(s, out_dir, &mut report)?,
        Mode::FourierCheck => run_fourier(s, out_dir, &mut report)?,
        Mode::Seminorm => run_seminorm(s, out_dir, &mut report)?,
        Mode::Moments => run_moments(s, out_dir, &mut report)?,
    }
    Ok(report)
}

fn input(s: &Scenario) -> Result<&DistributionInput> {
    s.input
        .as_ref()
        .ok_or_else(|| Error::Config(format!("mode {} needs an input", s.mode)))
}

fn grid(s: &Scenario) -> Result<Vec<f64>> {
    s.grid
        .map(|g| g.values())
        .ok_or_else(|| Error::Config(format!("mode {} needs a grid", s.mode)))
}

fn series_rows(expansions: &[ExpansionResult]) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let mut terms = Vec::new();
    let mut remainders = Vec::new();
    for e in expansions {
        let reference = e.reference().unwrap_or(f64::NAN);
        for (n, (t, p)) in e.terms().iter().zip(e.partial_sums()).enumerate() {
            terms.push(vec![num(e.a()), n.to_string(), num(*t), num(*p)]);
            remainders.push(vec![
                num(e.a()),
                n.to_string(),
                num(reference),
                num(*p),
                num(reference - p),
            ]);
        }
    }
    (terms, remainders)
}

/// Fits remainders of every truncation order; `None` where too few points clear the floor.
fn fits_per_order(
    a_grid: &[f64],
    expansions: &[ExpansionResult],
) -> Result<Vec<Option<OrderFitReport>>> {
    let orders = expansions[0].terms().len();
    (0..orders)
        .map(|n| {
            let rem: Vec<f64> = expansions
                .iter()
                .map(|e| e.reference().unwrap_or(f64::NAN) - e.partial_sums()[n])
                .collect();
            match verify::remainder_order_fit(a_grid, &rem, DEFAULT_FLOOR) {
                Ok(fit) => Ok(Some(fit)),
                Err(Error::InsufficientData { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect()
}

fn fit_rows(fits: &[Option<OrderFitReport>]) -> Vec<Vec<String>> {
    fits.iter()
        .enumerate()
        .map(|(n, fit)| match fit {
            Some(f) => vec![
                n.to_string(),
                num(f.slope),
                num(f.intercept),
                num(f.r_squared),
                f.points_used().to_string(),
            ],
            None => vec![
                n.to_string(),
                num(f64::NAN),
                num(f64::NAN),
                num(f64::NAN),
                // every remainder fell below the floor
                "0".to_string(),
            ],
        })
        .collect()
}

const FIT_HEADER: [&str; 5] = ["N", "slope", "intercept", "r_squared", "points_used"];

fn slope_bounds(report: &mut RunReport, s: &Scenario, fit: Option<&OrderFitReport>) {
    let slope = fit.map(|f| f.slope).unwrap_or(f64::NAN);
    if let Some(max) = s.assertions.max_slope {
        report.check(
            format!("slope N={}", s.n),
            slope,
            format!("<= {max}"),
            slope <= max,
        );
    }
    if let Some(min) = s.assertions.min_slope {
        report.check(
            format!("slope N={}", s.n),
            slope,
            format!(">= {min}"),
            slope >= min,
        );
    }
}

fn run_large_a(s: &Scenario, dir: &Path, report: &mut RunReport) -> Result<()> {
    let f = input(s)?;
    let a_grid = grid(s)?;
    let moments = moment_sequence_with(f, s.n, &s.tolerances);
    let references: Vec<f64> = a_grid
        .par_iter()
        .map(|&a| transform::cwt_direct(f, &s.wavelet, a, s.b, &s.tolerances).map(|p| p.value))
        .collect::<Result<_>>()?;
    let expansions: Vec<ExpansionResult> = a_grid
        .iter()
        .zip(&references)
        .map(|(&a, &r)| {
            expansion_large_a(&moments, &s.wavelet, a, s.b, s.n).map(|e| e.with_reference(r))
        })
        .collect::<Result<_>>()?;
    let fits = fits_per_order(&a_grid, &expansions)?;

    let (terms, remainders) = series_rows(&expansions);
    let mut w = Writer {
        dir,
        name: &s.name,
        report,
    };
    w.csv("terms", &["a", "alpha", "term", "partial_sum"], &terms)?;
    w.csv(
        "remainders",
        &["a", "N", "reference", "partial_sum", "remainder"],
        &remainders,
    )?;
    w.csv("fit", &FIT_HEADER, &fit_rows(&fits))?;

    if let Some(limit) = s.assertions.max_abs_remainder {
        let worst = expansions
            .iter()
            .map(|e| (e.reference().unwrap_or(f64::NAN) - e.value()).abs())
            .fold(0.0, f64::max);
        report.check(
            format!("max |remainder| N={}", s.n),
            worst,
            format!("<= {limit:e}"),
            worst <= limit,
        );
    }
    if let Some(margin) = s.assertions.slope_margin {
        for (n, fit) in fits.iter().enumerate() {
            let bound = -(n as f64 + 0.5) + margin;
            match fit {
                Some(fit) => report.check(
                    format!("slope N={n}"),
                    fit.slope,
                    format!("<= {bound}"),
                    fit.slope <= bound,
                ),
                None => report.notes.push(format!(
                    "N={n}: every remainder below {DEFAULT_FLOOR:e}, series exact on this grid"
                )),
            }
        }
    }
    slope_bounds(report, s, fits.last().and_then(Option::as_ref));
    Ok(())
}

fn run_small_a(s: &Scenario, dir: &Path, report: &mut RunReport) -> Result<()> {
    let f = match input(s)?.as_density() {
        Some(d) => d.clone(),
        None => {
            return Err(Error::Unsupported(
                "small_a needs a smooth density as input".into(),
            ))
        }
    };
    let a_grid = grid(s)?;
    let psi = DistributionInput::density(
        Density::Wavelet(s.wavelet.clone()),
        GrowthClass::SubExponential,
    )?;
    // a few orders past N locate the next surviving term
    let moments = moment_sequence_with(&psi, s.n + 8, &s.tolerances);
    let expansions: Vec<ExpansionResult> = a_grid
        .par_iter()
        .map(|&a| {
            let r = small_a_reference(&psi, &f, a, s.b, &s.tolerances)?;
            Ok(expansion_small_a(&moments, &f, a, s.b, s.n)?.with_reference(r))
        })
        .collect::<Result<_>>()?;
    let fits = fits_per_order(&a_grid, &expansions)?;

    let (terms, remainders) = series_rows(&expansions);
    let mut w = Writer {
        dir,
        name: &s.name,
        report,
    };
    w.csv("terms", &["a", "alpha", "term", "partial_sum"], &terms)?;
    w.csv(
        "remainders",
        &["a", "N", "reference", "partial_sum", "remainder"],
        &remainders,
    )?;
    w.csv("fit", &FIT_HEADER, &fit_rows(&fits))?;

    if s.wavelet.is_mexican_hat() {
        let rows = compare_printed_small_a_coefficients(&moments, s.n)?;
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.order.to_string(),
                    num(r.printed),
                    num(r.moment),
                    r.mismatch.to_string(),
                ]
            })
            .collect();
        w.csv(
            "printed_coefficients",
            &["order", "printed", "moment", "mismatch"],
            &table,
        )?;
        let printed: Vec<Vec<String>> = expansions
            .iter()
            .map(|e| {
                let p = mexican_hat_small_a_printed_coeffs(&f, e.a(), s.b, s.n)?;
                let r = e.reference().unwrap_or(f64::NAN);
                Ok(vec![num(e.a()), num(p.value()), num(e.value()), num(r)])
            })
            .collect::<Result<_>>()?;
        w.csv(
            "printed_series",
            &[
                "a",
                "printed_partial_sum",
                "moment_partial_sum",
                "reference",
            ],
            &printed,
        )?;
        for r in rows.iter().filter(|r| r.mismatch) {
            report.notes.push(format!(
                "printed Gamma coefficient at order {} is {:e}, computed moment is {:e}",
                r.order, r.printed, r.moment
            ));
        }
    }

    let scale = moments.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(margin) = s.assertions.slope_margin {
        for (n, fit) in fits.iter().enumerate() {
            let Some(next) = next_surviving_order(moments.values(), n, 1e-9 * scale) else {
                report.notes.push(format!(
                    "N={n}: no surviving moment within the computed orders"
                ));
                continue;
            };
            let bound = next as f64 + 0.5 - margin;
            let slope = fit.as_ref().map(|f| f.slope).unwrap_or(f64::NAN);
            report.check(
                format!("slope N={n} (next order {next})"),
                slope,
                format!(">= {bound}"),
                slope >= bound,
            );
        }
    }
    if let Some(limit) = s.assertions.max_abs_remainder {
        let worst = expansions
            .iter()
            .map(|e| (e.reference().unwrap_or(f64::NAN) - e.value()).abs())
            .fold(0.0, f64::max);
        report.check(
            format!("max |remainder| N={}", s.n),
            worst,
            format!("<= {limit:e}"),
            worst <= limit,
        );
    }
    slope_bounds(report, s, fits.last().and_then(Option::as_ref));
    Ok(())
}

fn run_fourier(s: &Scenario, dir: &Path, report: &mut RunReport) -> Result<()> {
    let f = input(s)?;
    let a_grid = grid(s)?;
    let points: Vec<(f64, f64)> = a_grid
        .iter()
        .flat_map(|&a| s.b_values.iter().map(move |&b| (a, b)))
        .collect();
    let pairs: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&(a, b)| {
            let d = transform::cwt_direct(f, &s.wavelet, a, b, &s.tolerances)?.value;
            let q = transform::cwt_fourier(f, &s.wavelet, a, b, &s.tolerances)?.value;
            Ok((d, q))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<String>> = points
        .iter()
        .zip(&pairs)
        .map(|(&(a, b), &(d, q))| vec![num(a), num(b), num(d), num(q), num((d - q).abs())])
        .collect();

    let checks: Vec<transform::MomentDualityCheck> = (0..=s.n)
        .map(|alpha| transform::fourier_moment_check(f, alpha, s.h))
        .collect::<Result<_>>()?;
    let duality: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            let p = c.pinned_rhs();
            vec![
                c.alpha.to_string(),
                num(c.lhs.re),
                num(c.lhs.im),
                num(c.rhs.re),
                num(c.rhs.im),
                num(p.re),
                num(p.im),
                num(c.residual()),
            ]
        })
        .collect();

    let mut w = Writer {
        dir,
        name: &s.name,
        report,
    };
    w.csv(
        "fourier",
        &["a", "b", "direct", "fourier", "abs_diff"],
        &rows,
    )?;
    w.csv(
        "duality",
        &[
            "alpha",
            "lhs_re",
            "lhs_im",
            "i_pow_mu_re",
            "i_pow_mu_im",
            "pinned_re",
            "pinned_im",
            "residual",
        ],
        &duality,
    )?;
    report.notes.push(format!(
        "normalization {:?} (1/(2 pi) = {:?}); convention: {FOURIER_CONVENTION}",
        transform::fourier_normalization(),
        1.0 / (2.0 * std::f64::consts::PI)
    ));

    if let Some(rel) = s.assertions.max_rel_diff {
        let worst = pairs
            .iter()
            .map(|(d, q)| (d - q).abs() / (d.abs() + 1e-13 / rel))
            .fold(0.0, f64::max);
        report.check(
            "max relative |direct - fourier|",
            worst,
            format!("<= {rel:e}"),
            worst <= rel,
        );
    }
    if let Some(tol) = s.assertions.max_duality_residual {
        for c in &checks {
            let scaled = c.residual() / (1.0 + c.rhs.norm());
            report.check(
                format!("duality alpha={}", c.alpha),
                scaled,
                format!("<= {tol:e}"),
                scaled <= tol,
            );
        }
    }
    Ok(())
}

fn run_seminorm(s: &Scenario, dir: &Path, report: &mut RunReport) -> Result<()> {
    let a_grid = grid(s)?;
    let fit = verify::seminorm_decay_check(&s.wavelet, s.q, s.b, s.m, s.alpha, &a_grid)?;
    let rows: Vec<Vec<String>> = fit
        .a_grid
        .iter()
        .zip(&fit.abs_remainders)
        .map(|(a, v)| vec![num(*a), num(*v)])
        .collect();
    let mut w = Writer {
        dir,
        name: &s.name,
        report,
    };
    w.csv("seminorm", &["a", "seminorm"], &rows)?;
    w.csv(
        "fit",
        &[
            "q",
            "alpha",
            "slope",
            "intercept",
            "r_squared",
            "points_used",
        ],
        &[vec![
            s.q.to_string(),
            s.alpha.to_string(),
            num(fit.slope),
            num(fit.intercept),
            num(fit.r_squared),
            fit.points_used().to_string(),
        ]],
    )?;
    if let Some(margin) = s.assertions.slope_margin {
        let bound = -(s.q as f64) + margin;
        report.check(
            format!("seminorm slope q={} alpha={}", s.q, s.alpha),
            fit.slope,
            format!("<= {bound}"),
            fit.slope <= bound,
        );
    }
    if let Some(max) = s.assertions.max_slope {
        report.check(
            "seminorm slope",
            fit.slope,
            format!("<= {max}"),
            fit.slope <= max,
        );
    }
    if let Some(min) = s.assertions.min_slope {
        report.check(
            "seminorm slope",
            fit.slope,
            format!(">= {min}"),
            fit.slope >= min,
        );
    }
    Ok(())
}

/// Moment table rows: order, value, provenance.
pub fn moment_rows(m: &MomentSequence) -> Vec<Vec<String>> {
    m.values()
        .iter()
        .enumerate()
        .map(|(alpha, v)| {
            let p = m
                .provenance(alpha)
                .map(|p| p.to_string())
                .unwrap_or_default();
            vec![alpha.to_string(), num(*v), p]
        })
        .collect()
}

fn run_moments(s: &Scenario, dir: &Path, report: &mut RunReport) -> Result<()> {
    let f = input(s)?;
    let m = moment_sequence_with(f, s.n, &s.tolerances);
    if let Some(reason) = m.missing_reason() {
        report.notes.push(reason.to_string());
    }
    let mut w = Writer {
        dir,
        name: &s.name,
        report,
    };
    w.csv(
        "moments",
        &["alpha", "moment", "provenance"],
        &moment_rows(&m),
    )?;
    Ok(())
}
