//! Scenario files: a declarative description of one verification run.
//!
//! ```text
//! # comments start with '#'
//! [scenario]
//! name = bump-large-a
//! mode = large_a          # large_a | small_a | fourier_check | seminorm | moments
//! wavelet = mexican-hat
//! b = 1.0
//! N = 3
//!
//! [input]
//! kind = bump
//! center = 0.3
//!
//! [grid]                  # a = start * ratio^k, k = 0..count
//! start = 16
//! ratio = 2
//! count = 7
//!
//! [tolerances]            # quadrature overrides
//! abs_tol = 1e-18
//!
//! [assert]
//! slope_margin = 0.3
//! ```
//!
//! Errors carry the file and line they refer to.

mod input;
mod run;

use std::fmt;
use std::path::{Path, PathBuf};

use crate::distributions::DistributionInput;
use crate::error::{Error, Result};
use crate::expansion::check_truncation;
use crate::quadrature::QuadratureSpec;
use crate::wavelets::Wavelet;

pub use input::{build_input, parse_input_descriptor, Params, INPUT_KINDS};
pub use run::{moment_rows, run_scenario, write_csv, Check, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    LargeA,
    SmallA,
    FourierCheck,
    Seminorm,
    Moments,
}

impl Mode {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "large_a" => Mode::LargeA,
            "small_a" => Mode::SmallA,
            "fourier_check" => Mode::FourierCheck,
            "seminorm" => Mode::Seminorm,
            "moments" => Mode::Moments,
            _ => return None,
        })
    }

    fn needs_fit(self) -> bool {
        matches!(self, Mode::LargeA | Mode::SmallA | Mode::Seminorm)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::LargeA => "large_a",
            Mode::SmallA => "small_a",
            Mode::FourierCheck => "fourier_check",
            Mode::Seminorm => "seminorm",
            Mode::Moments => "moments",
        })
    }
}

/// `start * ratio^k` for `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricGrid {
    pub start: f64,
    pub ratio: f64,
    pub count: usize,
}

impl GeometricGrid {
    pub fn values(&self) -> Vec<f64> {
        (0..self.count)
            .map(|k| self.start * self.ratio.powi(k as i32))
            .collect()
    }
}

/// Optional pass/fail limits. Unset limits are not checked.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Assertions {
    /// Fitted slope must stay within this margin of the expected exponent.
    pub slope_margin: Option<f64>,
    pub max_slope: Option<f64>,
    pub min_slope: Option<f64>,
    pub max_abs_remainder: Option<f64>,
    /// `|direct - fourier| <= max_rel_diff * |direct| + 1e-13`.
    pub max_rel_diff: Option<f64>,
    /// `|D^alpha f_hat(0) - (-i)^alpha mu_alpha| <= max_duality_residual * (1 + |mu_alpha|)`.
    pub max_duality_residual: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub mode: Mode,
    pub wavelet: Wavelet,
    /// `None` only in seminorm mode.
    pub input: Option<DistributionInput>,
    pub input_label: String,
    pub grid: Option<GeometricGrid>,
    pub b: f64,
    /// Highest expansion order, or highest moment order in moments mode.
    pub n: usize,
    /// Translations for `fourier_check`.
    pub b_values: Vec<f64>,
    /// Difference step for the moment duality check.
    pub h: f64,
    pub q: usize,
    pub alpha: usize,
    pub m: f64,
    pub tolerances: QuadratureSpec,
    pub assertions: Assertions,
}

/// Built-in scenarios: name, one-line description, text.
pub const BUILTIN_SCENARIOS: &[(&str, &str, &str)] = &[
    (
        "delta",
        "delta at the origin, large a, N = 3: remainders vanish",
        include_str!("../../scenarios/delta.scn"),
    ),
    (
        "delta-derivative",
        "delta' at the origin, large a, N = 2: remainders vanish",
        include_str!("../../scenarios/delta-derivative.scn"),
    ),
    (
        "mexican-hat-large-a",
        "worked example: Mexican hat on a compact bump, N = 2, a = 16..1024",
        include_str!("../../scenarios/mexican-hat-large-a.scn"),
    ),
    (
        "mexican-hat-small-a",
        "worked example: Mexican hat moments against a Gaussian, N = 4, a -> 0",
        include_str!("../../scenarios/mexican-hat-small-a.scn"),
    ),
    (
        "fourier-pairing",
        "worked example: direct versus Fourier-side transform and moment duality",
        include_str!("../../scenarios/fourier-pairing.scn"),
    ),
    (
        "power-tail-large-a",
        "power growth gamma = 3.5, N = [[gamma]] - 1 = 2",
        include_str!("../../scenarios/power-tail-large-a.scn"),
    ),
    (
        "seminorm-decay",
        "windowed seminorm of psi minus its quadratic Taylor part, q = 3",
        include_str!("../../scenarios/seminorm-decay.scn"),
    ),
    (
        "mexican-hat-moments",
        "moments 0..8 of the Mexican hat",
        include_str!("../../scenarios/mexican-hat-moments.scn"),
    ),
];

/// Text listing of built-in wavelets, input kinds and scenarios.
pub fn list_builtins() -> String {
    let mut out = String::from("wavelets:\n");
    out.push_str("  mexican-hat              (1 - x^2) exp(-x^2/2)\n");
    out.push_str("  gaussian-derivative-<m>  -He_m(x) exp(-x^2/2), m >= 1\n");
    out.push_str("\ninput kinds:\n");
    for (kind, params) in INPUT_KINDS {
        out.push_str(&format!("  {kind:<18} {params}\n"));
    }
    out.push_str("\nscenarios:\n");
    for (name, description, _) in BUILTIN_SCENARIOS {
        out.push_str(&format!("  {name:<22} {description}\n"));
    }
    out
}

/// The text of a built-in scenario.
pub fn builtin_scenario(name: &str) -> Option<&'static str> {
    BUILTIN_SCENARIOS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, text)| *text)
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

#[derive(Default)]
struct Sections {
    scenario: Option<Params>,
    input: Option<Params>,
    grid: Option<Params>,
    tolerances: Option<Params>,
    assert: Option<Params>,
}

fn split_sections(text: &str, origin: &str) -> Result<Sections> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.into(),
        line,
        message,
    };
    let mut sections = Sections::default();
    let mut current: Option<&mut Params> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let name = header
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, format!("malformed section header '{line}'")))?
                .trim();
            let slot = match name {
                "scenario" => &mut sections.scenario,
                "input" => &mut sections.input,
                "grid" => &mut sections.grid,
                "tolerances" => &mut sections.tolerances,
                "assert" => &mut sections.assert,
                other => return Err(err(line_no, format!("unknown section [{other}]"))),
            };
            if slot.is_some() {
                return Err(err(line_no, format!("section [{name}] appears twice")));
            }
            current = Some(slot.insert(Params::new(origin, line_no)));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected 'key = value', got '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err(line_no, "empty key".into()));
        }
        match current.as_deref_mut() {
            Some(params) => params.insert(key, value, line_no)?,
            None => {
                return Err(err(
                    line_no,
                    format!("key '{key}' appears before any [section]"),
                ))
            }
        }
    }
    Ok(sections)
}

/// Parses and validates scenario text; `path` is used for diagnostics and relative file lookups.
pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario> {
    let origin = path.display().to_string();
    let mut sections = split_sections(text, &origin)?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: PathBuf::from(&origin),
        line,
        message,
    };

    let mut head = sections
        .scenario
        .take()
        .ok_or_else(|| parse_err(1, "missing [scenario] section".into()))?;
    let (name, name_line) = head.require_str("name")?;
    if name.is_empty()
        || !name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
    {
        return Err(parse_err(
            name_line,
            format!("scenario name '{name}' must be [A-Za-z0-9_-]+"),
        ));
    }
    let (mode_text, mode_line) = head.require_str("mode")?;
    let mode = Mode::parse(&mode_text).ok_or_else(|| {
        parse_err(
            mode_line,
            format!(
                "unknown mode '{mode_text}' (large_a, small_a, fourier_check, seminorm, moments)"
            ),
        )
    })?;
    let wavelet = match head.take_str("wavelet") {
        None => Wavelet::mexican_hat(),
        Some((w, line)) => Wavelet::from_name(&w).map_err(|e| parse_err(line, e.to_string()))?,
    };
    let b = head.f64_or("b", 0.0)?;
    let (n, n_line) = match head.take_str("N") {
        Some((v, line)) => (
            v.parse::<usize>().map_err(|_| {
                parse_err(
                    line,
                    format!("N: expected a non-negative integer, got '{v}'"),
                )
            })?,
            line,
        ),
        None if matches!(mode, Mode::LargeA | Mode::SmallA | Mode::Moments) => {
            return Err(parse_err(head.anchor(), "missing required key 'N'".into()))
        }
        None => (0, head.anchor()),
    };
    let b_values = head.take_f64_list("b_values")?.unwrap_or_else(|| vec![b]);
    let h = head.f64_or("h", 0.05)?;
    if !(h > 0.0) {
        return Err(parse_err(head.anchor(), "h must be positive".into()));
    }
    let (q, alpha, m) = if mode == Mode::Seminorm {
        (
            head.require_usize("q")?,
            head.usize_or("alpha", 0)?,
            head.f64_or("M", 1.0)?,
        )
    } else {
        (0, 0, 1.0)
    };
    head.finish()?;

    let (input, input_label) = match sections.input.take() {
        Some(mut params) => {
            let (kind, kind_line) = params.require_str("kind")?;
            let base = path.parent();
            let input = build_input(&kind, &mut params, base).map_err(|e| match e {
                Error::Parse { .. } => e,
                other => parse_err(kind_line, other.to_string()),
            })?;
            params.finish()?;
            (Some(input), kind)
        }
        None if mode == Mode::Seminorm => (None, String::new()),
        None => {
            return Err(parse_err(
                1,
                format!("mode {mode} needs an [input] section"),
            ))
        }
    };

    let grid = match sections.grid.take() {
        Some(mut params) => {
            let anchor = params.anchor();
            let grid = GeometricGrid {
                start: params.require_f64("start")?,
                ratio: params.require_f64("ratio")?,
                count: params.require_usize("count")?,
            };
            params.finish()?;
            if !(grid.start > 0.0 && grid.ratio > 1.0) {
                return Err(parse_err(
                    anchor,
                    "grid needs start > 0 and ratio > 1".into(),
                ));
            }
            if mode.needs_fit() && grid.count < 4 {
                return Err(parse_err(
                    anchor,
                    format!(
                        "mode {mode} fits a decay order and needs count >= 4, got {}",
                        grid.count
                    ),
                ));
            }
            if mode.needs_fit() && grid.ratio < 2.0 {
                return Err(parse_err(
                    anchor,
                    format!("order fits need ratio >= 2, got {}", grid.ratio),
                ));
            }
            Some(grid)
        }
        None if mode == Mode::Moments => None,
        None => return Err(parse_err(1, format!("mode {mode} needs a [grid] section"))),
    };

    let mut tolerances = QuadratureSpec::default();
    if let Some(mut params) = sections.tolerances.take() {
        let anchor = params.anchor();
        tolerances.abs_tol = params.f64_or("abs_tol", tolerances.abs_tol)?;
        tolerances.rel_tol = params.f64_or("rel_tol", tolerances.rel_tol)?;
        tolerances.max_subdivisions =
            params.usize_or("max_subdivisions", tolerances.max_subdivisions)?;
        tolerances.truncation_t = params.f64_or("truncation_t", tolerances.truncation_t)?;
        params.finish()?;
        tolerances
            .validate()
            .map_err(|e| parse_err(anchor, e.to_string()))?;
    }

    let mut assertions = Assertions::default();
    if let Some(mut params) = sections.assert.take() {
        assertions.slope_margin = params.take_f64("slope_margin")?;
        assertions.max_slope = params.take_f64("max_slope")?;
        assertions.min_slope = params.take_f64("min_slope")?;
        assertions.max_abs_remainder = params.take_f64("max_abs_remainder")?;
        assertions.max_rel_diff = params.take_f64("max_rel_diff")?;
        assertions.max_duality_residual = params.take_f64("max_duality_residual")?;
        params.finish()?;
    }

    // power growth caps the usable order; reject before any computation
    if let Some(input) = &input {
        if matches!(mode, Mode::LargeA | Mode::Moments) {
            check_truncation(input.growth(), n).map_err(|e| parse_err(n_line, e.to_string()))?;
        }
    }

    Ok(Scenario {
        name,
        mode,
        wavelet,
        input,
        input_label,
        grid,
        b,
        n,
        b_values,
        h,
        q,
        alpha,
        m,
        tolerances,
        assertions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Scenario> {
        parse_scenario(text, Path::new("test.scn"))
    }

    #[test]
    fn builtins_parse() {
        for (name, _, text) in BUILTIN_SCENARIOS {
            let s = parse_scenario(text, Path::new(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(&s.name, name);
        }
    }

    #[test]
    fn listing() {
        let l = list_builtins();
        for word in [
            "mexican-hat",
            "delta",
            "delta-derivative",
            "mexican-hat-large-a",
            "mexican-hat-small-a",
            "fourier-pairing",
        ] {
            assert!(l.contains(word), "{word}");
        }
    }

    #[test]
    fn errors_point_at_lines() {
        let text = "[scenario]\nname = x\nmode = large_a\nN = 2\nb = oops\n[input]\nkind = delta\n[grid]\nstart=1\nratio=2\ncount=4\n";
        match parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
        let text = "[scenario]\nname = x\nmode = sideways\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 3, .. })));
        let text = "[scenario]\nname = x\nmode = large_a\nN = 2\nbogus = 1\n[input]\nkind = delta\n[grid]\nstart=1\nratio=2\ncount=4\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 5, .. })));
        let text = "name = x\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 1, .. })));
        let text = "[scenario]\nname = x\nmode = large_a\nN = 2\n[input]\nkind = delta\n[grid]\nstart=1\nratio=2\ncount=3\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 7, .. })));
    }

    #[test]
    fn truncation_rejected_at_load() {
        let text = "[scenario]\nname = x\nmode = large_a\nN = 2\n[input]\nkind = power-tail\ngamma = 0.5\n[grid]\nstart=16\nratio=2\ncount=4\n";
        let e = parse(text).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("[[gamma]] - 1"), "{msg}");
        assert!(matches!(e, Error::Parse { line: 4, .. }));
    }
}
