//! The continuous wavelet transform
//!
//! ```text
//! W f(a, b) = a^{-1/2} int f(x) psi((x - b)/a) dx
//! ```
//!
//! computed two independent ways: directly in `x`, and on the Fourier side as
//! `C sqrt(a) int exp(i b w) f_hat(w) conj(psi_hat(a w)) dw`.
//!
//! Fourier convention: `f_hat(w) = int f(x) exp(-i w x) dx`, inverse
//! `(1/2pi) int exp(i w x) . dw`. The constant `C` is not assumed; it is
//! calibrated once against the closed-form transform of `delta` and comes out
//! as `1/(2 pi)`. Under this convention `D^alpha f_hat(0) = (-i)^alpha mu_alpha`,
//! the complex conjugate of `i^alpha mu_alpha`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::distributions::{moment, Density, DistributionInput, InputKind, Support};
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureSpec};
use crate::wavelets::Wavelet;

/// Describes the pinned Fourier convention; printed in reports.
pub const FOURIER_CONVENTION: &str = "f_hat(w) = int f(x) exp(-i w x) dx; \
     D^alpha f_hat(0) = (-i)^alpha mu_alpha = conj(i^alpha mu_alpha)";

/// Wavelet values below this are treated as zero when truncating `x`-space integrals.
const WAVELET_TAIL: f64 = 1e-20;
/// `|psi_hat(a w)|` below this is dropped on the Fourier side.
const FOURIER_TAIL: f64 = 1e-16;
/// Half-width, in standard deviations, kept for Gaussian-tailed densities.
const DENSITY_WINDOW: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Fourier,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Fourier => "fourier",
            Method::ClosedForm => "closed_form",
        })
    }
}

/// One value of `W f(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformPoint {
    pub a: f64,
    pub b: f64,
    pub value: f64,
    pub method: Method,
}

fn check_dilation(a: f64, b: f64) -> Result<()> {
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

/// `W f(a, b)` computed in `x`-space.
///
/// Point masses use the closed form
/// `a^{-1/2} sum w (-1)^k a^{-k} D^k psi((c - b)/a)`; densities are integrated.
pub fn cwt_direct(
    f: &DistributionInput,
    w: &Wavelet,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<TransformPoint> {
    check_dilation(a, b)?;
    let (value, method) = match f.kind() {
        InputKind::PointMasses(masses) => {
            let mut sum = 0.0;
            for m in masses {
                let k = m.derivative_order;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let d = w.derivative(k, (m.location - b) / a)?;
                sum += m.weight * sign * d / a.powi(k as i32);
            }
            (sum / a.sqrt(), Method::ClosedForm)
        }
        InputKind::Density(density) => (direct_density(density, w, a, b, spec)?, Method::Direct),
    };
    Ok(TransformPoint {
        a,
        b,
        value,
        method,
    })
}

fn direct_density(
    density: &Density,
    w: &Wavelet,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let reach = a * w.tail_radius(WAVELET_TAIL);
    let (mut lo, mut hi) = (b - reach, b + reach);
    let mut interior = vec![b];
    match density.support() {
        Support::Compact { lo: s_lo, hi: s_hi } => {
            lo = lo.max(s_lo);
            hi = hi.min(s_hi);
            interior.extend(density.breakpoints());
        }
        Support::GaussianTails { center, scale } => {
            lo = lo.max(center - DENSITY_WINDOW * scale);
            hi = hi.min(center + DENSITY_WINDOW * scale);
            interior.push(center);
        }
        Support::AlgebraicTails { center, .. } => interior.push(center),
        Support::Unbounded => {}
    }
    if lo >= hi {
        return Ok(0.0);
    }
    let mut points = vec![lo, hi];
    points.extend(interior.into_iter().filter(|&p| p > lo && p < hi));
    points.sort_by(f64::total_cmp);
    points.dedup();
    let integrand = |x: f64| {
        let f = density.eval(x);
        if f == 0.0 {
            0.0
        } else {
            f * w.eval((x - b) / a)
        }
    };
    let r = quadrature::integrate_with_breakpoints(integrand, &points, spec)?;
    Ok(r.value / a.sqrt())
}

/// `f_hat(w) = int f(x) exp(-i w x) dx`.
pub fn fourier_transform(
    f: &DistributionInput,
    omega: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    match f.kind() {
        InputKind::PointMasses(masses) => Ok(masses
            .iter()
            .map(|m| {
                // transform of delta^(k)(x - c) is (i w)^k exp(-i w c)
                let iw = Complex64::new(0.0, omega);
                m.weight
                    * iw.powu(m.derivative_order as u32)
                    * Complex64::from_polar(1.0, -omega * m.location)
            })
            .sum()),
        InputKind::Density(density) => density_fourier(density, omega, spec),
    }
}

fn density_fourier(density: &Density, omega: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    match density {
        Density::Gaussian {
            mean,
            sigma,
            amplitude,
        } => Ok(Complex64::from_polar(1.0, -omega * mean)
            * (amplitude
                * sigma
                * (2.0 * PI).sqrt()
                * (-0.5 * sigma * sigma * omega * omega).exp())),
        Density::Wavelet(w) => Ok(w.fourier_transform(omega)),
        Density::Bump { .. } | Density::Tabulated(_) => {
            let points = density.breakpoints();
            let re = quadrature::integrate_with_breakpoints(
                |x| density.eval(x) * (omega * x).cos(),
                &points,
                spec,
            )?;
            let im = quadrature::integrate_with_breakpoints(
                |x| -density.eval(x) * (omega * x).sin(),
                &points,
                spec,
            )?;
            Ok(Complex64::new(re.value, im.value))
        }
        Density::PowerTail { .. } | Density::Polynomial { .. } => Err(Error::Unsupported(format!(
            "no Fourier transform available for the {} density",
            density.name()
        ))),
    }
}

/// Half-width in `w` beyond which `f_hat` is negligible, if it decays.
fn fourier_reach(f: &DistributionInput) -> Option<f64> {
    match f.as_density()? {
        Density::Gaussian { sigma, .. } => Some(DENSITY_WINDOW / sigma),
        Density::Wavelet(w) => Some(w.fourier_cutoff(FOURIER_TAIL)),
        _ => None,
    }
}

/// `sqrt(a) int exp(i b w) f_hat(w) conj(psi_hat(a w)) dw` without the normalizing constant.
fn raw_fourier_pairing(
    f: &DistributionInput,
    w: &Wavelet,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mut reach = w.fourier_cutoff(FOURIER_TAIL) / a;
    if let Some(r) = fourier_reach(f) {
        reach = reach.min(r);
    }
    // the integrand is a closure over fallible evaluations; remember the first failure
    let failure: std::sync::Mutex<Option<Error>> = std::sync::Mutex::new(None);
    let integrand = |omega: f64| {
        let fh = match fourier_transform(f, omega, spec) {
            Ok(v) => v,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                return 0.0;
            }
        };
        (Complex64::from_polar(1.0, b * omega) * fh * w.fourier_transform(a * omega).conj()).re
    };
    let r = quadrature::integrate_with_breakpoints(integrand, &[-reach, 0.0, reach], spec);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(a.sqrt() * r?.value)
}

/// Normalizing constant of the Fourier-side pairing, calibrated once on `delta`
/// at `a = 1, b = 0` against the closed form `psi(0)`.
pub fn fourier_normalization() -> f64 {
    static CONSTANT: OnceLock<f64> = OnceLock::new();
    *CONSTANT.get_or_init(|| {
        let w = Wavelet::mexican_hat();
        let delta = DistributionInput::delta(0.0);
        let spec = QuadratureSpec {
            abs_tol: 1e-15,
            rel_tol: 1e-14,
            ..Default::default()
        };
        let raw = raw_fourier_pairing(&delta, &w, 1.0, 0.0, &spec)
            .expect("delta pairing is a Gaussian integral");
        w.eval(0.0) / raw
    })
}

/// `W f(a, b)` computed on the Fourier side.
pub fn cwt_fourier(
    f: &DistributionInput,
    w: &Wavelet,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<TransformPoint> {
    check_dilation(a, b)?;
    let value = fourier_normalization() * raw_fourier_pairing(f, w, a, b, spec)?;
    Ok(TransformPoint {
        a,
        b,
        value,
        method: Method::Fourier,
    })
}

/// Evaluates [`cwt_direct`] over many `(a, b)` pairs in parallel; output order follows input.
pub fn cwt_direct_grid(
    f: &DistributionInput,
    w: &Wavelet,
    points: &[(f64, f64)],
    spec: &QuadratureSpec,
) -> Result<Vec<TransformPoint>> {
    points
        .par_iter()
        .map(|&(a, b)| cwt_direct(f, w, a, b, spec))
        .collect()
}

/// Both sides of the moment/derivative duality at order `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentDualityCheck {
    pub alpha: usize,
    /// `D^alpha f_hat(0)` by central differences.
    pub lhs: Complex64,
    /// `i^alpha mu_alpha`.
    pub rhs: Complex64,
}

impl MomentDualityCheck {
    /// `(-i)^alpha mu_alpha`, the value `lhs` should match under [`FOURIER_CONVENTION`].
    pub fn pinned_rhs(&self) -> Complex64 {
        self.rhs.conj()
    }

    /// `|lhs - pinned_rhs|`.
    pub fn residual(&self) -> f64 {
        (self.lhs - self.pinned_rhs()).norm()
    }
}

/// Central-difference weights for `D^order` on the nodes `-p..=p` (unit spacing),
/// by Fornberg's recursion.
pub(crate) fn central_weights(order: usize, half_width: usize) -> Vec<f64> {
    let nodes: Vec<f64> = (-(half_width as i64)..=half_width as i64)
        .map(|k| k as f64)
        .collect();
    let n = nodes.len() - 1;
    let mut c = vec![vec![0.0; order + 1]; n + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..=n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Compares `D^alpha f_hat(0)` (central differences, step `h`) with `i^alpha mu_alpha`.
pub fn fourier_moment_check(
    f: &DistributionInput,
    alpha: usize,
    h: f64,
) -> Result<MomentDualityCheck> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Domain(format!(
            "difference step must be positive, got {h}"
        )));
    }
    let mu = moment(f, alpha)?;
    let spec = QuadratureSpec {
        abs_tol: 1e-15,
        rel_tol: 1e-14,
        ..Default::default()
    };
    let half_width = alpha / 2 + 5;
    let weights = central_weights(alpha, half_width);
    let mut lhs = Complex64::new(0.0, 0.0);
    for (k, wk) in weights.iter().enumerate() {
        if *wk == 0.0 {
            continue;
        }
        let omega = (k as f64 - half_width as f64) * h;
        lhs += *wk * fourier_transform(f, omega, &spec)?;
    }
    lhs /= h.powi(alpha as i32);
    Ok(MomentDualityCheck {
        alpha,
        lhs,
        rhs: Complex64::i().powu(alpha as u32) * mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::GrowthClass;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn delta_sifting() {
        let p = cwt_direct(
            &DistributionInput::delta(0.0),
            &Wavelet::mexican_hat(),
            4.0,
            0.0,
            &spec(),
        )
        .unwrap();
        assert_eq!(p.value, 0.5);
        assert_eq!(p.method, Method::ClosedForm);
    }

    #[test]
    fn delta_derivative_closed_form() {
        // <delta', phi> = -phi'(0) = -psi'(-1) = -2 e^{-1/2}
        let p = cwt_direct(
            &DistributionInput::delta_derivative(0.0, 1),
            &Wavelet::mexican_hat(),
            1.0,
            1.0,
            &spec(),
        )
        .unwrap();
        assert!((p.value + 1.213_061_319_425_266_8).abs() < 1e-15);
    }

    #[test]
    fn mexican_hat_paired_with_itself() {
        let f = DistributionInput::density(
            Density::Wavelet(Wavelet::mexican_hat()),
            GrowthClass::SubExponential,
        )
        .unwrap();
        let p = cwt_direct(&f, &Wavelet::mexican_hat(), 1.0, 0.0, &spec()).unwrap();
        assert!((p.value - 0.75 * PI.sqrt()).abs() < 1e-12);
        let q = cwt_fourier(&f, &Wavelet::mexican_hat(), 1.0, 0.0, &spec()).unwrap();
        assert!((q.value - p.value).abs() < 1e-8);
    }

    #[test]
    fn normalization_is_inverse_two_pi() {
        assert!((fourier_normalization() - 1.0 / (2.0 * PI)).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_dilation() {
        let f = DistributionInput::delta(0.0);
        let w = Wavelet::mexican_hat();
        assert!(cwt_direct(&f, &w, 0.0, 0.0, &spec()).is_err());
        assert!(cwt_direct(&f, &w, -1.0, 0.0, &spec()).is_err());
        assert!(cwt_fourier(&f, &w, f64::NAN, 0.0, &spec()).is_err());
    }

    #[test]
    fn fourier_of_polynomial_is_unsupported() {
        let f = DistributionInput::density(
            Density::Polynomial {
                coefficients: vec![0.0, 0.0, 1.0],
            },
            GrowthClass::TemperedFourier,
        )
        .unwrap();
        assert!(matches!(
            cwt_fourier(&f, &Wavelet::mexican_hat(), 1.0, 0.0, &spec()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn central_weights_reproduce_polynomial_derivatives() {
        for order in 0..=4 {
            let w = central_weights(order, 5);
            // exact on x^order: D^order x^order = order!
            let v: f64 = w
                .iter()
                .enumerate()
                .map(|(k, wk)| wk * (k as f64 - 5.0).powi(order as i32))
                .sum();
            let fact: f64 = (1..=order).map(|j| j as f64).product();
            assert!((v - fact).abs() < 1e-9, "order {order}: {v}");
        }
    }

    #[test]
    fn duality_for_delta_at_origin() {
        let c = fourier_moment_check(&DistributionInput::delta(0.0), 0, 0.05).unwrap();
        assert!((c.lhs - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(c.rhs, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn duality_sign_for_shifted_delta() {
        let c = fourier_moment_check(&DistributionInput::delta(0.7), 1, 0.05).unwrap();
        // d/dw exp(-i w c) at 0 is -i c, the printed form gives +i c
        assert!((c.lhs - Complex64::new(0.0, -0.7)).norm() < 1e-10);
        assert!((c.rhs - Complex64::new(0.0, 0.7)).norm() < 1e-15);
        assert!(c.residual() < 1e-10);
    }
}
