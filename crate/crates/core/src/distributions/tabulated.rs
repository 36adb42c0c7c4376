//! Densities sampled on a grid, read from two-column text files.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Natural cubic spline through `(x_i, y_i)` with strictly increasing `x`.
/// Zero outside `[x_0, x_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots
    m: Vec<f64>,
    source: Option<PathBuf>,
}

impl Tabulated {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Domain(format!(
                "tabulated density has {} abscissae but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Domain(
                "tabulated density needs at least 2 points".into(),
            ));
        }
        if let Some(i) = xs.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(format!(
                "abscissae must be strictly increasing (x[{}] = {} then {})",
                i,
                xs[i],
                xs[i + 1]
            )));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::Domain(
                "tabulated density contains non-finite values".into(),
            ));
        }
        let m = natural_second_derivatives(&xs, &ys);
        Ok(Self {
            xs,
            ys,
            m,
            source: None,
        })
    }

    /// Reads whitespace- or comma-separated `x f(x)` rows; `#` starts a comment.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut t = Self::parse(&text, path)?;
        t.source = Some(path.to_path_buf());
        Ok(t)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        let mut last: Option<(usize, f64)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if fields.len() != 2 {
                return Err(parse_err(
                    lineno,
                    format!("expected two columns (x, f(x)), found {}", fields.len()),
                ));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(lineno, format!("'{s}' is not a finite number")))
            };
            let (x, y) = (num(fields[0])?, num(fields[1])?);
            if let Some((prev_line, prev)) = last {
                if x <= prev {
                    return Err(parse_err(
                        lineno,
                        format!("x = {x} is not greater than x = {prev} on line {prev_line}"),
                    ));
                }
            }
            last = Some((lineno, x));
            xs.push(x);
            ys.push(y);
        }
        if xs.len() < 2 {
            return Err(parse_err(
                text.lines().count().max(1),
                "need at least two data rows".into(),
            ));
        }
        Self::new(xs, ys)
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn segment(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return None;
        }
        let i = self.xs.partition_point(|&k| k <= x);
        Some(i.saturating_sub(1).min(self.xs.len() - 2))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(0, x).unwrap_or(0.0)
    }

    /// Spline derivative of order 0..=3; higher orders are rejected.
    pub fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        if order > 3 {
            return Err(Error::Unsupported(format!(
                "cubic-spline density has no derivative of order {order}"
            )));
        }
        let Some(i) = self.segment(x) else {
            return Ok(0.0);
        };
        let h = self.xs[i + 1] - self.xs[i];
        let (a, b) = ((self.xs[i + 1] - x) / h, (x - self.xs[i]) / h);
        let (y0, y1, m0, m1) = (self.ys[i], self.ys[i + 1], self.m[i], self.m[i + 1]);
        Ok(match order {
            0 => a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0,
            1 => {
                (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0
                    + (3.0 * b * b - 1.0) / 6.0 * h * m1
            }
            2 => a * m0 + b * m1,
            _ => (m1 - m0) / h,
        })
    }
}

fn natural_second_derivatives(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // tridiagonal system for interior knots (Thomas algorithm)
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        let lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
        if i > 1 {
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}
