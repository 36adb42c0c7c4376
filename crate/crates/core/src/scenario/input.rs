//! Textual descriptions of inputs: `kind` plus `key = value` parameters.
//!
//! On the command line the same thing is written `kind:key=value,key=value`,
//! e.g. `bump:center=0.3,radius=1,power=4` or `delta-derivative:order=1,at=0`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::distributions::{Density, DistributionInput, GrowthClass, PointMass, Tabulated};
use crate::error::{Error, Result};
use crate::wavelets::Wavelet;

/// Input kinds understood by [`build_input`], with their parameters.
pub const INPUT_KINDS: &[(&str, &str)] = &[
    ("delta", "at (default 0), weight (default 1)"),
    (
        "delta-derivative",
        "order (default 1), at (default 0), weight (default 1)",
    ),
    ("point-masses", "masses = location:order:weight; ..."),
    ("gaussian", "mean (0), sigma (1), amplitude (1)"),
    (
        "bump",
        "center (0), radius (1), power (4): (1 - t^2)^power on |t| < 1",
    ),
    ("mexican-hat", "the Mexican hat itself as a density"),
    (
        "wavelet",
        "name = mexican-hat | gaussian-derivative-<m>, used as a density",
    ),
    (
        "power-tail",
        "gamma: (1 + x^2)^(-(gamma + 1)/2), power growth class",
    ),
    (
        "polynomial",
        "coefficients = c0; c1; ... (lowest degree first)",
    ),
    (
        "tabulated",
        "file = two-column x, f(x) table, natural cubic spline",
    ),
];

/// Parameters with the line each came from (0 when not from a file).
#[derive(Debug, Clone, Default)]
pub struct Params {
    origin: String,
    entries: BTreeMap<String, (String, usize)>,
    anchor: usize,
}

impl Params {
    pub fn new(origin: impl Into<String>, anchor: usize) -> Self {
        Self {
            origin: origin.into(),
            entries: BTreeMap::new(),
            anchor,
        }
    }

    pub fn insert(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        if let Some((_, first)) = self.entries.get(key) {
            return Err(self.error(
                line,
                format!("duplicate key '{key}' (first set on line {first})"),
            ));
        }
        self.entries
            .insert(key.to_string(), (value.to_string(), line));
        Ok(())
    }

    pub fn error(&self, line: usize, message: String) -> Error {
        Error::Parse {
            path: self.origin.clone().into(),
            line,
            message,
        }
    }

    pub fn anchor(&self) -> usize {
        self.anchor
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn take_str(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    pub fn require_str(&mut self, key: &str) -> Result<(String, usize)> {
        self.take_str(key)
            .ok_or_else(|| self.error(self.anchor, format!("missing required key '{key}'")))
    }

    pub fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take_str(key) {
            None => Ok(None),
            Some((v, line)) => parse_f64(&v)
                .map(Some)
                .map_err(|m| self.error(line, format!("{key}: {m}"))),
        }
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Result<f64> {
        Ok(self.take_f64(key)?.unwrap_or(default))
    }

    pub fn require_f64(&mut self, key: &str) -> Result<f64> {
        match self.take_f64(key)? {
            Some(v) => Ok(v),
            None => Err(self.error(self.anchor, format!("missing required key '{key}'"))),
        }
    }

    pub fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.take_str(key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<usize>().map(Some).map_err(|_| {
                self.error(
                    line,
                    format!("{key}: expected a non-negative integer, got '{v}'"),
                )
            }),
        }
    }

    pub fn usize_or(&mut self, key: &str, default: usize) -> Result<usize> {
        Ok(self.take_usize(key)?.unwrap_or(default))
    }

    pub fn require_usize(&mut self, key: &str) -> Result<usize> {
        match self.take_usize(key)? {
            Some(v) => Ok(v),
            None => Err(self.error(self.anchor, format!("missing required key '{key}'"))),
        }
    }

    /// A `;`- or `,`-separated list of numbers.
    pub fn take_f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take_str(key) {
            None => Ok(None),
            Some((v, line)) => v
                .split([';', ','])
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_f64(s).map_err(|m| self.error(line, format!("{key}: {m}"))))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    /// Fails on any key nobody consumed.
    pub fn finish(self) -> Result<()> {
        match self.entries.iter().next() {
            Some((key, (_, line))) => Err(self.error(*line, format!("unknown key '{key}'"))),
            None => Ok(()),
        }
    }
}

pub fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got '{}'", s.trim())),
    }
}

fn parse_masses(params: &Params, text: &str, line: usize) -> Result<Vec<PointMass>> {
    let mut masses = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let fields: Vec<&str> = item.split(':').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(params.error(
                line,
                format!("point mass '{item}' is not location:order:weight"),
            ));
        }
        let location = parse_f64(fields[0]).map_err(|m| params.error(line, m))?;
        let order = fields[1]
            .parse::<usize>()
            .map_err(|_| params.error(line, format!("bad derivative order '{}'", fields[1])))?;
        let weight = parse_f64(fields[2]).map_err(|m| params.error(line, m))?;
        masses.push(PointMass::new(location, order, weight));
    }
    if masses.is_empty() {
        return Err(params.error(line, "no point masses given".into()));
    }
    Ok(masses)
}

fn default_growth(kind: &str, density: Option<&Density>) -> GrowthClass {
    match (kind, density) {
        ("power-tail", Some(Density::PowerTail { gamma })) => GrowthClass::Power { gamma: *gamma },
        ("polynomial", _) => GrowthClass::TemperedFourier,
        (_, Some(Density::Gaussian { .. } | Density::Wavelet(_))) => GrowthClass::SubExponential,
        _ => GrowthClass::Compact,
    }
}

/// Builds an input of the given kind, consuming its parameters (and an optional `growth`).
/// `base` resolves relative `file =` paths.
pub fn build_input(
    kind: &str,
    params: &mut Params,
    base: Option<&Path>,
) -> Result<DistributionInput> {
    let anchor = params.anchor();
    let mut density = None;
    let mut masses = None;
    match kind {
        "delta" => {
            let at = params.f64_or("at", 0.0)?;
            let weight = params.f64_or("weight", 1.0)?;
            masses = Some(vec![PointMass::new(at, 0, weight)]);
        }
        "delta-derivative" => {
            let order = params.usize_or("order", 1)?;
            let at = params.f64_or("at", 0.0)?;
            let weight = params.f64_or("weight", 1.0)?;
            masses = Some(vec![PointMass::new(at, order, weight)]);
        }
        "point-masses" => {
            let (text, line) = params.require_str("masses")?;
            masses = Some(parse_masses(params, &text, line)?);
        }
        "gaussian" => {
            density = Some(Density::Gaussian {
                mean: params.f64_or("mean", 0.0)?,
                sigma: params.f64_or("sigma", 1.0)?,
                amplitude: params.f64_or("amplitude", 1.0)?,
            })
        }
        "bump" => {
            let center = params.f64_or("center", 0.0)?;
            let radius = params.f64_or("radius", 1.0)?;
            let power = params.usize_or("power", 4)?;
            density = Some(Density::bump(center, radius, power as u32));
        }
        "mexican-hat" => density = Some(Density::Wavelet(Wavelet::mexican_hat())),
        "wavelet" => {
            let (name, line) = params.require_str("name")?;
            let w = Wavelet::from_name(&name).map_err(|e| params.error(line, e.to_string()))?;
            density = Some(Density::Wavelet(w));
        }
        "power-tail" => {
            density = Some(Density::PowerTail {
                gamma: params.require_f64("gamma")?,
            })
        }
        "polynomial" => {
            let coefficients = match params.take_f64_list("coefficients")? {
                Some(c) if !c.is_empty() => c,
                _ => return Err(params.error(anchor, "polynomial needs coefficients".into())),
            };
            density = Some(Density::Polynomial { coefficients });
        }
        "tabulated" => {
            let (file, line) = params.require_str("file")?;
            let path = match base {
                Some(dir) if Path::new(&file).is_relative() => dir.join(&file),
                _ => file.into(),
            };
            let t = Tabulated::from_file(&path).map_err(|e| match e {
                Error::Io { .. } => params.error(line, e.to_string()),
                other => other,
            })?;
            density = Some(Density::Tabulated(t));
        }
        other => {
            let known: Vec<&str> = INPUT_KINDS.iter().map(|(k, _)| *k).collect();
            return Err(params.error(
                anchor,
                format!("unknown input kind '{other}' (known: {})", known.join(", ")),
            ));
        }
    }
    let growth = match params.take_str("growth") {
        Some((g, line)) => g
            .parse::<GrowthClass>()
            .map_err(|e| params.error(line, e.to_string()))?,
        None => default_growth(kind, density.as_ref()),
    };
    let built = match (masses, density) {
        (Some(m), _) => DistributionInput::point_masses(m, growth),
        (None, Some(d)) => DistributionInput::density(d, growth),
        (None, None) => unreachable!("every kind sets masses or a density"),
    };
    built.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => params.error(anchor, other.to_string()),
    })
}

/// Parses a command-line descriptor `kind[:key=value,...]`.
pub fn parse_input_descriptor(text: &str) -> Result<DistributionInput> {
    let (kind, rest) = match text.split_once(':') {
        Some((k, r)) => (k.trim(), r),
        None => (text.trim(), ""),
    };
    let mut params = Params::new("<input>", 1);
    // point masses use ';' inside their value, so split parameters on ',' only at key boundaries
    for item in split_params(rest) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| params.error(1, format!("expected key=value, got '{item}'")))?;
        params.insert(key.trim(), value.trim(), 1)?;
    }
    let input = build_input(kind, &mut params, None)?;
    params.finish()?;
    Ok(input)
}

fn split_params(rest: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for piece in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match out.last_mut() {
            Some(prev) if !piece.contains('=') => {
                prev.push(',');
                prev.push_str(piece);
            }
            _ => out.push(piece.to_string()),
        }
    }
    out
}
