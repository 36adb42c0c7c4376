//! Moment asymptotic expansions of the wavelet transform.
//!
//! Large dilation:
//!
//! ```text
//! W f(a, b) ~ sum_alpha mu_alpha(f) D^alpha psi(-b/a) / (alpha! a^(alpha + 1/2))
//! ```
//!
//! Small dilation, with the roles of `f` and `psi` swapped:
//!
//! ```text
//! a^{-1/2} <psi(x/a), f(x + b)> ~ sum_alpha mu_alpha(psi) D^alpha f(b) a^(alpha + 1/2) / alpha!
//! ```

use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::distributions::{
    Density, DistributionInput, GrowthClass, InputKind, MomentSequence, Support,
};
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureSpec};
use crate::transform;
use crate::wavelets::Wavelet;

/// Highest usable expansion order for power growth `gamma`: `[[gamma]] - 1`, bracket read as floor.
pub fn truncation_limit(gamma: f64) -> i64 {
    gamma.floor() as i64 - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    LargeA,
    SmallA,
    /// The small-dilation series with the printed Mexican-hat Gamma coefficients.
    SmallAPrinted,
}

/// Terms, partial sums and (once known) the reference value of one expansion.
#[derive(Debug, Clone)]
pub struct ExpansionResult {
    kind: ExpansionKind,
    a: f64,
    b: f64,
    terms: Vec<f64>,
    partial_sums: Vec<f64>,
    reference: OnceLock<f64>,
}

impl ExpansionResult {
    fn from_terms(kind: ExpansionKind, a: f64, b: f64, terms: Vec<f64>) -> Self {
        let mut partial_sums = Vec::with_capacity(terms.len());
        let mut acc = 0.0;
        for t in &terms {
            acc += t;
            partial_sums.push(acc);
        }
        Self {
            kind,
            a,
            b,
            terms,
            partial_sums,
            reference: OnceLock::new(),
        }
    }

    pub fn kind(&self) -> ExpansionKind {
        self.kind
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Highest order included.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[f64] {
        &self.terms
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    /// The full partial sum up to [`order`](Self::order).
    pub fn value(&self) -> f64 {
        *self.partial_sums.last().expect("at least one term")
    }

    pub fn reference(&self) -> Option<f64> {
        self.reference.get().copied()
    }

    /// Stores `value` as the reference unless one is already cached.
    pub fn with_reference(self, value: f64) -> Self {
        let _ = self.reference.set(value);
        self
    }

    /// Returns the cached reference, computing it with `compute` on first use.
    pub fn reference_or_compute(&self, compute: impl FnOnce() -> Result<f64>) -> Result<f64> {
        if let Some(v) = self.reference.get() {
            return Ok(*v);
        }
        let v = compute()?;
        Ok(*self.reference.get_or_init(|| v))
    }

    /// `reference - partial_sums[N]` for every `N`, once a reference is known.
    pub fn remainders(&self) -> Option<Vec<f64>> {
        let r = self.reference()?;
        Some(self.partial_sums.iter().map(|s| r - s).collect())
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_point(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!(
            "dilation a must be positive, got {a}"
        )));
    }
    if !b.is_finite() {
        return Err(Error::Domain(format!(
            "translation b must be finite, got {b}"
        )));
    }
    Ok(())
}

/// Moments `0..=n` or the error explaining why they are not all there.
fn require_moments(m: &MomentSequence, n: usize) -> Result<&[f64]> {
    if let GrowthClass::Power { gamma } = m.growth() {
        let cap = truncation_limit(gamma);
        if n as i64 > cap {
            return Err(Error::Truncation {
                requested: n,
                cap,
                gamma,
            });
        }
    }
    if m.len() <= n {
        return Err(Error::Config(format!(
            "expansion order {n} needs moments 0..={n} but only {} are available{}",
            m.len(),
            m.missing_reason()
                .map(|r| format!(" ({r})"))
                .unwrap_or_default()
        )));
    }
    Ok(&m.values()[..=n])
}

/// Rejects `n` above the truncation limit of a power-growth input before any work is done.
pub fn check_truncation(growth: GrowthClass, n: usize) -> Result<()> {
    match growth {
        GrowthClass::Power { gamma } if n as i64 > truncation_limit(gamma) => {
            Err(Error::Truncation {
                requested: n,
                cap: truncation_limit(gamma),
                gamma,
            })
        }
        _ => Ok(()),
    }
}

/// Large-dilation partial sums up to order `n`.
pub fn expansion_large_a(
    m: &MomentSequence,
    w: &Wavelet,
    a: f64,
    b: f64,
    n: usize,
) -> Result<ExpansionResult> {
    check_point(a, b)?;
    let mu = require_moments(m, n)?;
    let center = -b / a;
    let mut terms = Vec::with_capacity(n + 1);
    for (alpha, &mu_alpha) in mu.iter().enumerate() {
        let scale = factorial(alpha) * a.powi(alpha as i32) * a.sqrt();
        terms.push(mu_alpha * w.derivative(alpha, center)? / scale);
    }
    Ok(ExpansionResult::from_terms(
        ExpansionKind::LargeA,
        a,
        b,
        terms,
    ))
}

/// [`expansion_large_a`] over a grid of dilations, in parallel, output in grid order.
pub fn expansion_large_a_grid(
    m: &MomentSequence,
    w: &Wavelet,
    a_grid: &[f64],
    b: f64,
    n: usize,
) -> Result<Vec<ExpansionResult>> {
    a_grid
        .par_iter()
        .map(|&a| expansion_large_a(m, w, a, b, n))
        .collect()
}

/// Attaches `W f(a, b)` from direct quadrature as the reference of a large-dilation expansion.
pub fn attach_large_a_reference(
    e: &ExpansionResult,
    f: &DistributionInput,
    w: &Wavelet,
    spec: &QuadratureSpec,
) -> Result<f64> {
    e.reference_or_compute(|| Ok(transform::cwt_direct(f, w, e.a, e.b, spec)?.value))
}

/// A function that can be differentiated at a point, the `f` of the small-dilation expansion.
pub trait Smooth: Sync {
    fn derivative(&self, order: usize, x: f64) -> Result<f64>;

    fn eval(&self, x: f64) -> Result<f64> {
        self.derivative(0, x)
    }

    /// Points where the function is not smooth.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl Smooth for Density {
    fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        Density::derivative(self, order, x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        Density::breakpoints(self)
    }
}

impl Smooth for Wavelet {
    fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        Wavelet::derivative(self, order, x)
    }
}

/// Small-dilation partial sums up to order `n`, from the moments of the wavelet.
pub fn expansion_small_a(
    psi_moments: &MomentSequence,
    f: &dyn Smooth,
    a: f64,
    b: f64,
    n: usize,
) -> Result<ExpansionResult> {
    check_point(a, b)?;
    let mu = require_moments(psi_moments, n)?;
    let mut terms = Vec::with_capacity(n + 1);
    for (alpha, &mu_alpha) in mu.iter().enumerate() {
        let term = if mu_alpha == 0.0 {
            0.0
        } else {
            mu_alpha * f.derivative(alpha, b)? * a.powi(alpha as i32) * a.sqrt() / factorial(alpha)
        };
        terms.push(term);
    }
    Ok(ExpansionResult::from_terms(
        ExpansionKind::SmallA,
        a,
        b,
        terms,
    ))
}

/// `a^{-1/2} <psi(x/a), f(x + b)>`, evaluated as `sqrt(a) int psi(u) f(a u + b) du`.
///
/// Point masses in the wavelet slot pair exactly:
/// `sqrt(a) sum w (-1)^k a^k f^(k)(a c + b)`.
pub fn small_a_reference(
    psi: &DistributionInput,
    f: &dyn Smooth,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_point(a, b)?;
    match psi.kind() {
        InputKind::PointMasses(masses) => {
            let mut sum = 0.0;
            for m in masses {
                let k = m.derivative_order;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sum += m.weight * sign * a.powi(k as i32) * f.derivative(k, a * m.location + b)?;
            }
            Ok(a.sqrt() * sum)
        }
        InputKind::Density(density) => {
            let (lo, hi) = match density.support() {
                Support::Compact { lo, hi } => (lo, hi),
                Support::GaussianTails { center, scale } => {
                    (center - 10.0 * scale, center + 10.0 * scale)
                }
                Support::AlgebraicTails { .. } | Support::Unbounded => {
                    return Err(Error::Unsupported(format!(
                        "the {} density has no finite window for the small-dilation pairing",
                        density.name()
                    )))
                }
            };
            let mut points = vec![lo, hi];
            points.extend(density.breakpoints());
            points.extend(f.breakpoints().into_iter().map(|p| (p - b) / a));
            points.retain(|&p| p >= lo && p <= hi);
            points.sort_by(f64::total_cmp);
            points.dedup();
            let failure = std::sync::Mutex::new(None);
            let integrand = |u: f64| {
                let psi_u = density.eval(u);
                if psi_u == 0.0 {
                    return 0.0;
                }
                match f.eval(a * u + b) {
                    Ok(v) => psi_u * v,
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        0.0
                    }
                }
            };
            let r = quadrature::integrate_with_breakpoints(integrand, &points, spec);
            if let Some(e) = failure.into_inner().unwrap() {
                return Err(e);
            }
            Ok(a.sqrt() * r?.value)
        }
    }
}

/// Coefficient printed for the Mexican-hat small-dilation series at even order `2 alpha`:
/// `-2^((2 alpha - 1)/2) Gamma((2 alpha + 1)/2)`. Odd orders are absent from the printed series.
pub fn printed_small_a_coefficient(order: usize) -> f64 {
    if order % 2 == 1 {
        return 0.0;
    }
    let alpha = (order / 2) as f64;
    -(2f64).powf(alpha - 0.5) * gamma(alpha + 0.5)
}

/// The small-dilation series built from the printed Mexican-hat coefficients in place of moments.
pub fn mexican_hat_small_a_printed_coeffs(
    f: &dyn Smooth,
    a: f64,
    b: f64,
    n: usize,
) -> Result<ExpansionResult> {
    check_point(a, b)?;
    let mut terms = Vec::with_capacity(n + 1);
    for order in 0..=n {
        let c = printed_small_a_coefficient(order);
        let term = if c == 0.0 {
            0.0
        } else {
            c * f.derivative(order, b)? * a.powi(order as i32) * a.sqrt() / factorial(order)
        };
        terms.push(term);
    }
    Ok(ExpansionResult::from_terms(
        ExpansionKind::SmallAPrinted,
        a,
        b,
        terms,
    ))
}

/// One row of the printed-versus-computed coefficient comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientComparison {
    pub order: usize,
    pub printed: f64,
    pub moment: f64,
    pub mismatch: bool,
}

/// Compares the printed Gamma coefficients with the Mexican-hat moments in `psi_moments`.
pub fn compare_printed_small_a_coefficients(
    psi_moments: &MomentSequence,
    n: usize,
) -> Result<Vec<CoefficientComparison>> {
    let mu = require_moments(psi_moments, n)?;
    Ok(mu
        .iter()
        .enumerate()
        .map(|(order, &moment)| {
            let printed = printed_small_a_coefficient(order);
            let mismatch = (printed - moment).abs() > 1e-9 * (1.0 + moment.abs());
            CoefficientComparison {
                order,
                printed,
                moment,
                mismatch,
            }
        })
        .collect())
}

/// Closed-form moments of `-He_m(x) exp(-x^2/2)`:
/// `int x^alpha psi_m = -alpha!/(alpha - m)! * sqrt(2 pi) (alpha - m - 1)!!` for even `alpha - m`.
pub fn gaussian_family_moment(m: usize, alpha: usize) -> f64 {
    if alpha < m || (alpha - m) % 2 == 1 {
        return 0.0;
    }
    let j = alpha - m;
    let double_fact: f64 = (1..j).step_by(2).map(|k| k as f64).product();
    let falling: f64 = ((j + 1)..=alpha).map(|k| k as f64).product();
    -falling * (2.0 * PI).sqrt() * double_fact
}

/// Coefficients of the Mexican-hat Taylor polynomial about `-b/a` exactly as printed:
/// `exp(-b^2/2a^2)/a^2 * ((a^2 - b^2) + b(3a^2 - b^2)/a x + (6a^2 b^2 - 3a^4 - b^4)/(2a^2) x^2)`.
pub fn mexican_hat_p2_printed_coefficients(a: f64, b: f64) -> [f64; 3] {
    let (a2, b2) = (a * a, b * b);
    let g = (-b2 / (2.0 * a2)).exp() / a2;
    [
        g * (a2 - b2),
        g * b * (3.0 * a2 - b2) / a,
        g * (6.0 * a2 * b2 - 3.0 * a2 * a2 - b2 * b2) / (2.0 * a2),
    ]
}

/// The printed second-order expansion of `W f(a, b)` for the Mexican hat, verbatim:
/// `exp(-b^2/2a^2)/a^2 * ((a^2 - b^2)/sqrt(a) mu0 + b(3a^2 - b^2)/a^(3/2) mu1
///  + (6a^2 b^2 - 3a^4 - b^4)/(2 a^(5/2)) mu2)`.
pub fn mexican_hat_p2_printed(mu: [f64; 3], a: f64, b: f64) -> f64 {
    let (a2, b2) = (a * a, b * b);
    let g = (-b2 / (2.0 * a2)).exp() / a2;
    let s = a.sqrt();
    g * ((a2 - b2) / s * mu[0]
        + b * (3.0 * a2 - b2) / (a * s) * mu[1]
        + (6.0 * a2 * b2 - 3.0 * a2 * a2 - b2 * b2) / (2.0 * a2 * s) * mu[2])
}

/// The printed Taylor coefficients paired with the moments the way the general
/// large-dilation series pairs them: `sum c_alpha mu_alpha / a^(alpha + 1/2)`.
pub fn mexican_hat_p2_paired(mu: [f64; 3], a: f64, b: f64) -> f64 {
    let c = mexican_hat_p2_printed_coefficients(a, b);
    (0..3)
        .map(|alpha| c[alpha] * mu[alpha] / (a.powi(alpha as i32) * a.sqrt()))
        .sum()
}

/// First order above `n` whose coefficient is not (numerically) zero, and the
/// power of `a` it carries: `alpha + 1/2` (small dilation) or `-(alpha + 1/2)` (large).
pub fn next_surviving_order(coefficients: &[f64], n: usize, tol: f64) -> Option<usize> {
    coefficients
        .iter()
        .enumerate()
        .skip(n + 1)
        .find(|(_, c)| c.abs() > tol)
        .map(|(alpha, _)| alpha)
}
