//! Closed-form mother wavelets of the Gaussian-derivative family.
//!
//! Every wavelet here has the form `psi_m(x) = -He_m(x) exp(-x^2/2)`, which is
//! `(-1)^(m+1) D^m exp(-x^2/2)`. The Mexican hat is `m = 2`:
//! `psi(x) = (1 - x^2) exp(-x^2/2)`. Consequently
//!
//! ```text
//! D^k psi_m(x) = (-1)^(k+1) He_{m+k}(x) exp(-x^2/2)
//! ```
//!
//! which the Hermite recurrence evaluates exactly up to rounding.

mod central;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::hermite_he;

/// How `D^k psi` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeEngine {
    /// Three-term Hermite recurrence. Exact formula; the default.
    #[default]
    HermiteRecurrence,
    /// Extended-precision central differences with Romberg extrapolation.
    /// Slow; used as an independent check of the recurrence.
    CentralDifference,
}

/// A real mother wavelet with exact derivatives.
///
/// Values are immutable; clone freely and share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavelet {
    hermite_order: usize,
    engine: DerivativeEngine,
    max_order: usize,
}

/// Beyond this radius `exp(-x^2/2)` underflows and the polynomial factor may overflow.
const UNDERFLOW_RADIUS: f64 = 40.0;

/// `(1 - x^2) exp(-x^2/2)`.
pub fn eval_mexican_hat(x: f64) -> f64 {
    if x.abs() > UNDERFLOW_RADIUS {
        return 0.0;
    }
    (1.0 - x * x) * (-0.5 * x * x).exp()
}

impl Wavelet {
    pub const DEFAULT_MAX_ORDER: usize = 16;

    pub fn mexican_hat() -> Self {
        Self {
            hermite_order: 2,
            engine: DerivativeEngine::default(),
            max_order: Self::DEFAULT_MAX_ORDER,
        }
    }

    /// `psi_m = (-1)^(m+1) D^m exp(-x^2/2)` for `m >= 1`. `m = 2` is the Mexican hat.
    pub fn gaussian_derivative(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config(
                "gaussian-derivative wavelets need order >= 1 (order 0 has nonzero mean)".into(),
            ));
        }
        Ok(Self {
            hermite_order: m,
            ..Self::mexican_hat()
        })
    }

    /// Parses `mexican-hat` or `gaussian-derivative-<m>`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim() {
            "mexican-hat" | "mexican_hat" | "ricker" => Ok(Self::mexican_hat()),
            other => match other.strip_prefix("gaussian-derivative-") {
                Some(m) => {
                    let m = m.parse::<usize>().map_err(|_| {
                        Error::Config(format!("bad gaussian-derivative order in '{other}'"))
                    })?;
                    Self::gaussian_derivative(m)
                }
                None => Err(Error::Config(format!("unknown wavelet '{other}'"))),
            },
        }
    }

    pub fn with_engine(mut self, engine: DerivativeEngine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order;
        self
    }

    pub fn engine(&self) -> DerivativeEngine {
        self.engine
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Order `m` of the Gaussian derivative this wavelet is built from.
    pub fn hermite_order(&self) -> usize {
        self.hermite_order
    }

    pub fn is_mexican_hat(&self) -> bool {
        self.hermite_order == 2
    }

    pub fn name(&self) -> String {
        if self.is_mexican_hat() {
            "mexican-hat".into()
        } else {
            format!("gaussian-derivative-{}", self.hermite_order)
        }
    }

    /// Zero mean holds for every member of the family (`m >= 1`).
    pub fn is_admissible(&self) -> bool {
        self.hermite_order >= 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.is_mexican_hat() {
            eval_mexican_hat(x)
        } else if x.abs() > UNDERFLOW_RADIUS {
            0.0
        } else {
            -hermite_he(self.hermite_order, x) * (-0.5 * x * x).exp()
        }
    }

    /// `D^order psi(x)`.
    pub fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        if order > self.max_order {
            return Err(Error::Config(format!(
                "derivative order {order} exceeds the configured maximum {}",
                self.max_order
            )));
        }
        Ok(match self.engine {
            DerivativeEngine::HermiteRecurrence => self.hermite_derivative(order, x),
            DerivativeEngine::CentralDifference => {
                central::derivative(self.hermite_order, order, x)
            }
        })
    }

    fn hermite_derivative(&self, order: usize, x: f64) -> f64 {
        if order == 0 {
            return self.eval(x);
        }
        if x.abs() > UNDERFLOW_RADIUS {
            return 0.0;
        }
        let sign = if order % 2 == 1 { 1.0 } else { -1.0 };
        sign * hermite_he(self.hermite_order + order, x) * (-0.5 * x * x).exp()
    }

    /// `psi_hat(omega) = int psi(x) exp(-i omega x) dx`
    /// `= (-1)^(m+1) (i omega)^m sqrt(2 pi) exp(-omega^2/2)`.
    pub fn fourier_transform(&self, omega: f64) -> Complex64 {
        let m = self.hermite_order;
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        let i_pow = Complex64::i().powu(m as u32);
        i_pow * (sign * omega.powi(m as i32) * (2.0 * PI).sqrt() * (-0.5 * omega * omega).exp())
    }

    /// Smallest `R` (on a 1/8 grid) such that `|psi(x)| < threshold` for all `|x| >= R`.
    pub fn tail_radius(&self, threshold: f64) -> f64 {
        // beyond the largest Hermite zero (< 2 sqrt(m) + 1) the envelope is monotone
        let m = self.hermite_order as f64;
        let mut r = 2.0 * m.sqrt() + 1.0;
        while (hermite_he(self.hermite_order, r) * (-0.5 * r * r).exp()).abs() >= threshold {
            r += 0.125;
        }
        r
    }

    /// Smallest `Omega` (on a 1/8 grid) such that `|psi_hat(w)| < threshold` for `|w| >= Omega`.
    pub fn fourier_cutoff(&self, threshold: f64) -> f64 {
        let m = self.hermite_order as i32;
        let mut w = (self.hermite_order as f64).sqrt() + 1.0;
        while w.powi(m) * (2.0 * PI).sqrt() * (-0.5 * w * w).exp() >= threshold {
            w += 0.125;
        }
        w
    }

    /// Taylor polynomial of degree `degree` about `center`.
    pub fn taylor_polynomial(&self, degree: usize, center: f64) -> Result<TaylorPolynomial> {
        let mut coefficients = Vec::with_capacity(degree + 1);
        let mut factorial = 1.0;
        for alpha in 0..=degree {
            if alpha > 0 {
                factorial *= alpha as f64;
            }
            coefficients.push(self.derivative(alpha, center)? / factorial);
        }
        Ok(TaylorPolynomial {
            center,
            coefficients,
        })
    }
}

impl Default for Wavelet {
    fn default() -> Self {
        Self::mexican_hat()
    }
}

impl fmt::Display for Wavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// `D^order psi(x)`; see [`Wavelet::derivative`].
pub fn wavelet_derivative(w: &Wavelet, order: usize, x: f64) -> Result<f64> {
    w.derivative(order, x)
}

/// See [`Wavelet::taylor_polynomial`].
pub fn taylor_polynomial(w: &Wavelet, degree: usize, center: f64) -> Result<TaylorPolynomial> {
    w.taylor_polynomial(degree, center)
}

/// `P_N(t) = sum_{alpha<=N} D^alpha psi(center)/alpha! t^alpha`.
///
/// In the large-dilation expansion the center is `-b/a`, so that
/// `psi(x - b/a) ~ P_N(x)` for small `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPolynomial {
    pub center: f64,
    /// `coefficients[alpha] = D^alpha psi(center) / alpha!`; `degree + 1` entries.
    pub coefficients: Vec<f64>,
}

impl TaylorPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Evaluates at displacement `t` from the center.
    pub fn eval_offset(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * t + c)
    }

    /// Evaluates at the absolute point `y`; `eval_at(center)` is `coefficients[0]`.
    pub fn eval_at(&self, y: f64) -> f64 {
        self.eval_offset(y - self.center)
    }
}
