//! Generalized-function inputs and their moment sequences `mu_alpha = <f, x^alpha>`.
//!
//! An input is either a finite combination of point masses `w delta^(k)(x - c)`
//! or a density. Each carries a growth class declared by the caller; the class
//! is never inferred, but it bounds which moments may be requested.

mod tabulated;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expansion::truncation_limit;
use crate::hermite::hermite_he;
use crate::quadrature::{self, QuadratureSpec};
use crate::wavelets::Wavelet;

pub use tabulated::Tabulated;

/// The distribution space an input is declared to live in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthClass {
    /// Compact support, `E'`.
    Compact,
    /// Less than exponential growth, `P'`.
    SubExponential,
    /// `O'_gamma`: pairs with test functions growing like `|x|^gamma`.
    Power { gamma: f64 },
    /// `O'_c`, the intersection of all `O'_gamma`.
    AllPower,
    /// `O'_M`, whose Fourier transforms lie in `O_c`.
    TemperedFourier,
}

impl GrowthClass {
    /// Highest moment order that may be used, `None` when unbounded.
    ///
    /// Only the power class is capped, at `[[gamma]] - 1` with `[[.]]` read as floor.
    pub fn max_valid_order(&self) -> Option<i64> {
        match *self {
            GrowthClass::Power { gamma } => Some(truncation_limit(gamma)),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GrowthClass::Compact => "compact",
            GrowthClass::SubExponential => "sub_exponential",
            GrowthClass::Power { .. } => "power",
            GrowthClass::AllPower => "all_power",
            GrowthClass::TemperedFourier => "tempered_fourier",
        }
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthClass::Compact => f.write_str("compact (E')"),
            GrowthClass::SubExponential => f.write_str("sub_exponential (P')"),
            GrowthClass::Power { gamma } => write!(f, "power gamma = {gamma} (O'_gamma)"),
            GrowthClass::AllPower => f.write_str("all_power (O'_c)"),
            GrowthClass::TemperedFourier => f.write_str("tempered_fourier (O'_M)"),
        }
    }
}

impl FromStr for GrowthClass {
    type Err = Error;

    /// Accepts `compact`, `sub_exponential`, `power:<gamma>`, `all_power`, `tempered_fourier`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let class = match s {
            "compact" | "E'" => GrowthClass::Compact,
            "sub_exponential" | "P'" => GrowthClass::SubExponential,
            "all_power" | "O'_c" => GrowthClass::AllPower,
            "tempered_fourier" | "O'_M" => GrowthClass::TemperedFourier,
            _ => {
                let gamma = s
                    .strip_prefix("power:")
                    .or_else(|| s.strip_prefix("power="))
                    .ok_or_else(|| Error::Config(format!("unknown growth class '{s}'")))?;
                let gamma: f64 = gamma
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad gamma in growth class '{s}'")))?;
                GrowthClass::Power { gamma }
            }
        };
        if let GrowthClass::Power { gamma } = class {
            if !gamma.is_finite() {
                return Err(Error::Config(
                    "power growth class needs a finite gamma".into(),
                ));
            }
        }
        Ok(class)
    }
}

/// `weight * delta^(derivative_order)(x - location)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub location: f64,
    pub derivative_order: usize,
    pub weight: f64,
}

impl PointMass {
    pub fn new(location: f64, derivative_order: usize, weight: f64) -> Self {
        Self {
            location,
            derivative_order,
            weight,
        }
    }

    /// `<w delta^(k)_c, phi> = w (-1)^k phi^(k)(c)`.
    pub fn pair(&self, phi_derivative: impl Fn(usize, f64) -> Result<f64>) -> Result<f64> {
        let k = self.derivative_order;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(self.weight * sign * phi_derivative(k, self.location)?)
    }

    /// `<w delta^(k)_c, x^alpha> = w (-1)^k alpha!/(alpha-k)! c^(alpha-k)`, zero for `alpha < k`.
    pub fn moment(&self, alpha: usize) -> f64 {
        let k = self.derivative_order;
        if alpha < k {
            return 0.0;
        }
        let falling: f64 = ((alpha - k + 1)..=alpha).map(|j| j as f64).product();
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        self.weight * sign * falling * self.location.powi((alpha - k) as i32)
    }
}

/// How a density's tails behave, which decides how it is integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Compact {
        lo: f64,
        hi: f64,
    },
    /// Gaussian-type decay about `center` on length scale `scale`.
    GaussianTails {
        center: f64,
        scale: f64,
    },
    /// Algebraic decay `|x|^(-exponent)`.
    AlgebraicTails {
        center: f64,
        exponent: f64,
    },
    /// No decay at all (a smooth test function such as a polynomial).
    Unbounded,
}

/// Densities with closed forms (plus tabulated data).
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    /// `amplitude * exp(-(x - mean)^2 / (2 sigma^2))`.
    Gaussian {
        mean: f64,
        sigma: f64,
        amplitude: f64,
    },
    /// `(1 - t^2)^power` with `t = (x - center)/radius`, zero for `|t| > 1`.
    Bump {
        center: f64,
        radius: f64,
        power: u32,
    },
    /// A mother wavelet used as a density (for the small-dilation expansion).
    Wavelet(Wavelet),
    /// `(1 + x^2)^(-(gamma + 1)/2)`: moments exist below order `gamma`.
    PowerTail {
        gamma: f64,
    },
    /// `sum_k c_k x^k`; smooth but without decay.
    Polynomial {
        coefficients: Vec<f64>,
    },
    Tabulated(Tabulated),
}

impl Density {
    pub fn gaussian(mean: f64, sigma: f64) -> Self {
        Density::Gaussian {
            mean,
            sigma,
            amplitude: 1.0,
        }
    }

    pub fn bump(center: f64, radius: f64, power: u32) -> Self {
        Density::Bump {
            center,
            radius,
            power,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Density::Gaussian { .. } => "gaussian",
            Density::Bump { .. } => "bump",
            Density::Wavelet(_) => "wavelet",
            Density::PowerTail { .. } => "power-tail",
            Density::Polynomial { .. } => "polynomial",
            Density::Tabulated(_) => "tabulated",
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match self {
            Density::Gaussian {
                mean,
                sigma,
                amplitude,
            } => {
                if !(sigma.is_finite() && *sigma > 0.0 && mean.is_finite() && amplitude.is_finite())
                {
                    return bad(format!(
                        "gaussian needs finite mean/amplitude and sigma > 0 (sigma = {sigma})"
                    ));
                }
            }
            Density::Bump { center, radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0 && center.is_finite()) {
                    return bad(format!(
                        "bump needs a finite center and radius > 0 (radius = {radius})"
                    ));
                }
            }
            Density::PowerTail { gamma } => {
                if !(gamma.is_finite() && *gamma > 0.0) {
                    return bad(format!("power-tail density needs gamma > 0, got {gamma}"));
                }
            }
            Density::Polynomial { coefficients } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("polynomial needs at least one finite coefficient".into());
                }
            }
            Density::Wavelet(_) | Density::Tabulated(_) => {}
        }
        Ok(())
    }

    pub fn support(&self) -> Support {
        match self {
            Density::Gaussian { mean, sigma, .. } => Support::GaussianTails {
                center: *mean,
                scale: *sigma,
            },
            Density::Bump { center, radius, .. } => Support::Compact {
                lo: center - radius,
                hi: center + radius,
            },
            Density::Wavelet(_) => Support::GaussianTails {
                center: 0.0,
                scale: 1.0,
            },
            Density::PowerTail { gamma } => Support::AlgebraicTails {
                center: 0.0,
                exponent: gamma + 1.0,
            },
            Density::Polynomial { .. } => Support::Unbounded,
            Density::Tabulated(t) => {
                let (lo, hi) = t.support();
                Support::Compact { lo, hi }
            }
        }
    }

    /// Points where the density is not smooth (support ends, spline knots).
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Density::Tabulated(t) => t.knots().to_vec(),
            _ => match self.support() {
                Support::Compact { lo, hi } => vec![lo, hi],
                _ => Vec::new(),
            },
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Density::Gaussian {
                mean,
                sigma,
                amplitude,
            } => {
                let t = (x - mean) / sigma;
                amplitude * (-0.5 * t * t).exp()
            }
            Density::Bump {
                center,
                radius,
                power,
            } => {
                let t = (x - center) / radius;
                if t.abs() >= 1.0 {
                    0.0
                } else {
                    (1.0 - t * t).powi(*power as i32)
                }
            }
            Density::Wavelet(w) => w.eval(x),
            Density::PowerTail { gamma } => (1.0 + x * x).powf(-0.5 * (gamma + 1.0)),
            Density::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
            }
            Density::Tabulated(t) => t.eval(x),
        }
    }

    /// `D^order f(x)` where a closed form exists.
    pub fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        if order == 0 {
            return Ok(self.eval(x));
        }
        match self {
            Density::Gaussian {
                mean,
                sigma,
                amplitude,
            } => {
                let t = (x - mean) / sigma;
                let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
                Ok(
                    amplitude * sign * hermite_he(order, t) * (-0.5 * t * t).exp()
                        / sigma.powi(order as i32),
                )
            }
            Density::Bump {
                center,
                radius,
                power,
            } => {
                let t = (x - center) / radius;
                if t.abs() >= 1.0 {
                    return Ok(0.0);
                }
                // (1 - t^2)^p = sum_j C(p, j) (-1)^j t^(2j)
                let p = *power as usize;
                let mut binom = 1.0;
                let mut sum = 0.0;
                for j in 0..=p {
                    if j > 0 {
                        binom = binom * (p + 1 - j) as f64 / j as f64;
                    }
                    let deg = 2 * j;
                    if deg >= order {
                        let falling: f64 = ((deg - order + 1)..=deg).map(|v| v as f64).product();
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        sum += sign * binom * falling * t.powi((deg - order) as i32);
                    }
                }
                Ok(sum / radius.powi(order as i32))
            }
            Density::Wavelet(w) => w.derivative(order, x),
            Density::Polynomial { coefficients } => {
                let mut sum = 0.0;
                for (k, c) in coefficients.iter().enumerate().skip(order).rev() {
                    let falling: f64 = ((k - order + 1)..=k).map(|v| v as f64).product();
                    sum = sum * x + c * falling;
                }
                Ok(sum)
            }
            Density::Tabulated(t) => t.derivative(order, x),
            Density::PowerTail { .. } => Err(Error::Unsupported(
                "power-tail density has no derivative engine".into(),
            )),
        }
    }
}

/// Point masses or a density.
#[derive(Debug, Clone, PartialEq)]
pub enum InputKind {
    PointMasses(Vec<PointMass>),
    Density(Density),
}

/// A generalized function `f` together with its declared growth class.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionInput {
    kind: InputKind,
    growth: GrowthClass,
}

impl DistributionInput {
    pub fn new(kind: InputKind, growth: GrowthClass) -> Result<Self> {
        if let GrowthClass::Power { gamma } = growth {
            if !gamma.is_finite() {
                return Err(Error::Config(
                    "power growth class needs a finite gamma".into(),
                ));
            }
        }
        match &kind {
            InputKind::PointMasses(masses) => {
                if masses.is_empty() {
                    return Err(Error::Config(
                        "point-mass input needs at least one mass".into(),
                    ));
                }
                if masses
                    .iter()
                    .any(|m| !(m.location.is_finite() && m.weight.is_finite()))
                {
                    return Err(Error::Config(
                        "point masses need finite locations and weights".into(),
                    ));
                }
            }
            InputKind::Density(d) => {
                d.validate()?;
                if growth == GrowthClass::Compact && !matches!(d.support(), Support::Compact { .. })
                {
                    return Err(Error::Config(format!(
                        "growth class compact (E') requires compact support, but the {} density has none",
                        d.name()
                    )));
                }
            }
        }
        Ok(Self { kind, growth })
    }

    /// `delta(x - location)`, compact class.
    pub fn delta(location: f64) -> Self {
        Self::delta_derivative(location, 0)
    }

    /// `delta^(order)(x - location)`, compact class.
    pub fn delta_derivative(location: f64, order: usize) -> Self {
        Self {
            kind: InputKind::PointMasses(vec![PointMass::new(location, order, 1.0)]),
            growth: GrowthClass::Compact,
        }
    }

    pub fn point_masses(masses: Vec<PointMass>, growth: GrowthClass) -> Result<Self> {
        Self::new(InputKind::PointMasses(masses), growth)
    }

    pub fn density(density: Density, growth: GrowthClass) -> Result<Self> {
        Self::new(InputKind::Density(density), growth)
    }

    pub fn kind(&self) -> &InputKind {
        &self.kind
    }

    pub fn growth(&self) -> GrowthClass {
        self.growth
    }

    pub fn as_density(&self) -> Option<&Density> {
        match &self.kind {
            InputKind::Density(d) => Some(d),
            InputKind::PointMasses(_) => None,
        }
    }

    pub fn as_point_masses(&self) -> Option<&[PointMass]> {
        match &self.kind {
            InputKind::PointMasses(m) => Some(m),
            InputKind::Density(_) => None,
        }
    }

    /// Highest valid moment order for the declared class.
    pub fn max_valid_order(&self) -> Option<i64> {
        self.growth.max_valid_order()
    }

    fn check_order(&self, alpha: usize) -> Result<()> {
        if let Some(cap) = self.max_valid_order() {
            if alpha as i64 > cap {
                return Err(Error::MomentDivergence {
                    order: alpha,
                    class: self.growth,
                    max_valid_order: Some(cap),
                });
            }
        }
        Ok(())
    }
}

/// Where a moment value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Quadrature,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Quadrature => "quadrature",
        })
    }
}

/// Tail-truncation half-width (in units of the density scale) for the moment of order `alpha`.
fn gaussian_window(alpha: usize) -> f64 {
    9.0 + (2.0 * alpha as f64 * 40f64.ln()).sqrt()
}

/// `mu_alpha = <f, x^alpha>` with the default quadrature tolerances.
pub fn moment(d: &DistributionInput, alpha: usize) -> Result<f64> {
    moment_with(d, alpha, &QuadratureSpec::default()).map(|(v, _)| v)
}

/// `mu_alpha` and how it was obtained.
pub fn moment_with(
    d: &DistributionInput,
    alpha: usize,
    spec: &QuadratureSpec,
) -> Result<(f64, Provenance)> {
    d.check_order(alpha)?;
    match &d.kind {
        InputKind::PointMasses(masses) => Ok((
            masses.iter().map(|m| m.moment(alpha)).sum(),
            Provenance::ClosedForm,
        )),
        InputKind::Density(density) => {
            density_moment(density, alpha, spec, d.growth).map(|v| (v, Provenance::Quadrature))
        }
    }
}

fn density_moment(
    density: &Density,
    alpha: usize,
    spec: &QuadratureSpec,
    growth: GrowthClass,
) -> Result<f64> {
    let diverges = || Error::MomentDivergence {
        order: alpha,
        class: growth,
        max_valid_order: growth.max_valid_order(),
    };
    let integrand = |x: f64| {
        let f = density.eval(x);
        if f == 0.0 {
            0.0
        } else {
            f * x.powi(alpha as i32)
        }
    };
    let value = match density.support() {
        Support::Compact { .. } => {
            quadrature::integrate_with_breakpoints(integrand, &density.breakpoints(), spec)?.value
        }
        Support::GaussianTails { center, scale } => {
            let t = gaussian_window(alpha) * scale;
            let first = quadrature::integrate(integrand, center - t, center + t, spec)?;
            let second =
                quadrature::integrate(integrand, center - 2.0 * t, center + 2.0 * t, spec)?;
            // error estimates carry the roundoff floor, which matters when the moment cancels to 0
            let slack = spec.abs_tol.max(spec.rel_tol * second.value.abs())
                + 2.0 * (first.err_estimate + second.err_estimate);
            if (first.value - second.value).abs() > slack {
                return Err(diverges());
            }
            second.value
        }
        Support::AlgebraicTails { center, exponent } => {
            if alpha as f64 + 1.0 >= exponent {
                return Err(diverges());
            }
            match quadrature::integrate_full_line(integrand, center, spec) {
                Ok(r) => r.value,
                Err(Error::NonConvergence { .. }) => return Err(diverges()),
                Err(e) => return Err(e),
            }
        }
        Support::Unbounded => return Err(diverges()),
    };
    if !value.is_finite() {
        return Err(diverges());
    }
    Ok(value)
}

/// Moments `mu_0..=mu_n` with provenance.
///
/// Orders the growth class forbids, or whose quadrature diverges, are absent;
/// [`MomentSequence::missing_reason`] says why.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    values: Vec<f64>,
    provenance: Vec<Provenance>,
    growth: GrowthClass,
    missing: Option<String>,
}

impl MomentSequence {
    /// Wraps known values, e.g. `[1, 0, 0, ...]` for `delta`.
    pub fn from_values(values: Vec<f64>, provenance: Provenance, growth: GrowthClass) -> Self {
        let provenance = vec![provenance; values.len()];
        Self {
            values,
            provenance,
            growth,
            missing: None,
        }
    }

    pub fn get(&self, alpha: usize) -> Option<f64> {
        self.values.get(alpha).copied()
    }

    pub fn provenance(&self, alpha: usize) -> Option<Provenance> {
        self.provenance.get(alpha).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of consecutive orders available, starting at 0.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn growth(&self) -> GrowthClass {
        self.growth
    }

    pub fn max_valid_order(&self) -> Option<i64> {
        self.growth.max_valid_order()
    }

    pub fn missing_reason(&self) -> Option<&str> {
        self.missing.as_deref()
    }
}

/// Batch of [`moment`] for orders `0..=up_to`.
pub fn moment_sequence(d: &DistributionInput, up_to: usize) -> MomentSequence {
    moment_sequence_with(d, up_to, &QuadratureSpec::default())
}

pub fn moment_sequence_with(
    d: &DistributionInput,
    up_to: usize,
    spec: &QuadratureSpec,
) -> MomentSequence {
    let mut seq = MomentSequence {
        values: Vec::with_capacity(up_to + 1),
        provenance: Vec::with_capacity(up_to + 1),
        growth: d.growth,
        missing: None,
    };
    for alpha in 0..=up_to {
        match moment_with(d, alpha, spec) {
            Ok((v, p)) => {
                seq.values.push(v);
                seq.provenance.push(p);
            }
            Err(e) => {
                seq.missing = Some(format!("orders {alpha}..={up_to} unavailable: {e}"));
                break;
            }
        }
    }
    seq
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn delta_moments() {
        let d = DistributionInput::delta(0.0);
        assert_eq!(moment(&d, 0).unwrap(), 1.0);
        let seq = moment_sequence(&d, 3);
        assert_eq!(seq.values(), &[1.0, 0.0, 0.0, 0.0]);
        assert!((0..4).all(|a| seq.provenance(a) == Some(Provenance::ClosedForm)));
    }

    #[test]
    fn delta_derivative_moments() {
        let d = DistributionInput::delta_derivative(0.0, 1);
        assert_eq!(moment(&d, 1).unwrap(), -1.0);
        assert_eq!(moment(&d, 0).unwrap(), 0.0);
        assert_eq!(moment(&d, 2).unwrap(), 0.0);
        // <delta''_c, x^3> = 6c
        let d = DistributionInput::delta_derivative(1.5, 2);
        assert_eq!(moment(&d, 3).unwrap(), 9.0);
        // <delta'_c, x^4> = -4 c^3
        let d = DistributionInput::delta_derivative(-2.0, 1);
        assert_eq!(moment(&d, 4).unwrap(), 32.0);
    }

    #[test]
    fn mexican_hat_density_moments() {
        let d = DistributionInput::density(
            Density::Wavelet(Wavelet::mexican_hat()),
            GrowthClass::SubExponential,
        )
        .unwrap();
        let seq = moment_sequence(&d, 4);
        let root = (2.0 * PI).sqrt();
        assert!(seq.get(0).unwrap().abs() < 1e-10);
        assert!(seq.get(1).unwrap().abs() < 1e-10);
        assert!((seq.get(2).unwrap() + 2.0 * root).abs() < 1e-10);
        assert!(seq.get(3).unwrap().abs() < 1e-10);
        assert!((seq.get(4).unwrap() + 12.0 * root).abs() < 1e-9);
        assert_eq!(seq.provenance(2), Some(Provenance::Quadrature));
    }

    #[test]
    fn even_density_has_vanishing_odd_moments() {
        let d =
            DistributionInput::density(Density::bump(0.0, 1.5, 3), GrowthClass::Compact).unwrap();
        let seq = moment_sequence(&d, 3);
        assert!(seq.get(1).unwrap().abs() < 1e-10);
        assert!(seq.get(3).unwrap().abs() < 1e-10);
        assert!(seq.get(0).unwrap() > 0.0);
    }

    #[test]
    fn compact_class_requires_compact_support() {
        let err = DistributionInput::density(Density::gaussian(0.0, 1.0), GrowthClass::Compact);
        assert!(matches!(err, Err(Error::Config(_))));
        assert!(
            DistributionInput::density(Density::bump(0.0, 1.0, 2), GrowthClass::Compact).is_ok()
        );
    }

    #[test]
    fn power_class_caps_moment_order() {
        let d = DistributionInput::density(
            Density::PowerTail { gamma: 3.5 },
            GrowthClass::Power { gamma: 3.5 },
        )
        .unwrap();
        assert_eq!(d.max_valid_order(), Some(2));
        // int (1+x^2)^(-9/4) dx = B(1/2, 7/4)
        let m0 = moment(&d, 0).unwrap();
        let beta = statrs::function::beta::beta(0.5, 1.75);
        assert!((m0 - beta).abs() < 1e-9, "{m0} vs {beta}");
        match moment(&d, 3) {
            Err(Error::MomentDivergence {
                order,
                max_valid_order,
                ..
            }) => {
                assert_eq!(order, 3);
                assert_eq!(max_valid_order, Some(2));
            }
            other => panic!("{other:?}"),
        }
        let seq = moment_sequence(&d, 5);
        assert_eq!(seq.len(), 3);
        assert!(seq.missing_reason().unwrap().contains("power"));
    }

    #[test]
    fn polynomial_moments_diverge() {
        let d = DistributionInput::density(
            Density::Polynomial {
                coefficients: vec![0.0, 0.0, 1.0],
            },
            GrowthClass::TemperedFourier,
        )
        .unwrap();
        assert!(matches!(moment(&d, 0), Err(Error::MomentDivergence { .. })));
        let seq = moment_sequence(&d, 2);
        assert!(seq.is_empty());
        assert!(seq.missing_reason().is_some());
    }

    #[test]
    fn growth_class_parsing() {
        assert_eq!(
            "compact".parse::<GrowthClass>().unwrap(),
            GrowthClass::Compact
        );
        assert_eq!(
            "power:2.5".parse::<GrowthClass>().unwrap(),
            GrowthClass::Power { gamma: 2.5 }
        );
        assert!("power:inf".parse::<GrowthClass>().is_err());
        assert!("weird".parse::<GrowthClass>().is_err());
    }

    #[test]
    fn density_derivatives() {
        let g = Density::gaussian(0.5, 2.0);
        // d/dx e^{-(x-m)^2/(2 s^2)} = -(x-m)/s^2 e^{...}
        let x = 1.3;
        let expected = -(x - 0.5) / 4.0 * g.eval(x);
        assert!((g.derivative(1, x).unwrap() - expected).abs() < 1e-15);

        let p = Density::Polynomial {
            coefficients: vec![1.0, -2.0, 0.5, 3.0],
        };
        // p'' = 1 + 18x
        assert!((p.derivative(2, 2.0).unwrap() - 37.0).abs() < 1e-13);
        assert_eq!(p.derivative(4, 2.0).unwrap(), 0.0);

        let b = Density::bump(0.2, 1.5, 2);
        // (1 - t^2)^2, t = (x - c)/r: d/dx = -4 t (1 - t^2) / r
        let x = 0.9;
        let t = (x - 0.2) / 1.5;
        let expected = -4.0 * t * (1.0 - t * t) / 1.5;
        assert!((b.derivative(1, x).unwrap() - expected).abs() < 1e-14);
        assert_eq!(b.derivative(1, 5.0).unwrap(), 0.0);
    }
}
