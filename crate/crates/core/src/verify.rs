//! Empirical decay orders: log-log fits of remainders against the dilation,
//! and the decay of windowed sup-seminorms of a dilated wavelet.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::wavelets::Wavelet;

/// Remainders smaller than this are treated as quadrature noise and left out of fits.
pub const DEFAULT_FLOOR: f64 = 1e-14;
/// Uniform grid size for window sups.
pub const SUP_GRID_POINTS: usize = 4096;

/// Least-squares fit of `ln |r|` against `ln a`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFitReport {
    pub a_grid: Vec<f64>,
    pub abs_remainders: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Indices left out because the remainder was below the floor (or not finite).
    pub excluded_points: Vec<usize>,
}

impl OrderFitReport {
    pub fn points_used(&self) -> usize {
        self.a_grid.len() - self.excluded_points.len()
    }
}

fn check_grid(a_grid: &[f64]) -> Result<()> {
    if a_grid.len() < 4 {
        return Err(Error::Domain(format!(
            "an order fit needs at least 4 grid points, got {}",
            a_grid.len()
        )));
    }
    if a_grid.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::Domain(
            "grid values must be positive and finite".into(),
        ));
    }
    let ratio = a_grid[1] / a_grid[0];
    if ratio < 2.0 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "grid must be increasing and geometric with ratio >= 2, got ratio {ratio}"
        )));
    }
    for pair in a_grid.windows(2) {
        let r = pair[1] / pair[0];
        if (r - ratio).abs() > 1e-9 * ratio {
            return Err(Error::Domain(format!(
                "grid is not geometric: ratio {r} after {} differs from {ratio}",
                pair[0]
            )));
        }
    }
    Ok(())
}

/// Fits `ln |remainder| = slope ln a + intercept`, skipping points below `floor`.
pub fn remainder_order_fit(
    a_grid: &[f64],
    remainders: &[f64],
    floor: f64,
) -> Result<OrderFitReport> {
    if a_grid.len() != remainders.len() {
        return Err(Error::Domain(format!(
            "grid has {} points but {} remainders were given",
            a_grid.len(),
            remainders.len()
        )));
    }
    check_grid(a_grid)?;
    let abs_remainders: Vec<f64> = remainders.iter().map(|r| r.abs()).collect();
    let mut excluded_points = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, (&a, &r)) in a_grid.iter().zip(&abs_remainders).enumerate() {
        if r.is_finite() && r >= floor {
            xs.push(a.ln());
            ys.push(r.ln());
        } else {
            excluded_points.push(i);
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData {
            usable: xs.len(),
            required: 3,
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(OrderFitReport {
        a_grid: a_grid.to_vec(),
        abs_remainders,
        slope,
        intercept,
        r_squared,
        excluded_points,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximum of `g` on `[lo, hi]`: the best of `points` uniform samples, then
/// golden-section refinement between the neighbours of that sample.
/// Returns `(argmax, max)`.
pub fn window_sup(g: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let points = points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = (lo, g(lo));
    let mut best_i = 0;
    for i in 1..points {
        let x = if i == points - 1 {
            hi
        } else {
            lo + i as f64 * step
        };
        let v = g(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let mut l = lo + best_i.saturating_sub(1) as f64 * step;
    let mut r = (lo + (best_i + 1) as f64 * step).min(hi);
    let mut c = r - INV_PHI * (r - l);
    let mut d = l + INV_PHI * (r - l);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..80 {
        if gc > gd {
            r = d;
            d = c;
            gd = gc;
            c = r - INV_PHI * (r - l);
            gc = g(c);
        } else {
            l = c;
            c = d;
            gc = gd;
            d = l + INV_PHI * (r - l);
            gd = g(d);
        }
        if r - l <= 1e-15 * (1.0 + l.abs()) {
            break;
        }
    }
    for (x, v) in [(c, gc), (d, gd)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// The window `b/a - M < x < b + M` for `b >= 0`; negative `b` is reflected first.
pub fn seminorm_window(a: f64, b: f64, m: f64) -> Result<(f64, f64)> {
    let b = b.abs();
    let (lo, hi) = (b / a - m, b + m);
    if hi <= lo {
        return Err(Error::Domain(format!(
            "seminorm window is empty for a = {a}, b = {b}, M = {m}"
        )));
    }
    Ok((lo, hi))
}

/// `psi` minus its Taylor polynomial of degree `q - 1` at 0 (nothing subtracted for `q = 0`).
#[derive(Debug, Clone)]
pub struct ResidualWavelet {
    wavelet: Wavelet,
    taylor: Vec<f64>,
}

impl ResidualWavelet {
    pub fn new(wavelet: &Wavelet, q: usize) -> Result<Self> {
        let taylor = if q == 0 {
            Vec::new()
        } else {
            wavelet.taylor_polynomial(q - 1, 0.0)?.coefficients
        };
        Ok(Self {
            wavelet: wavelet.clone(),
            taylor,
        })
    }

    /// `D^alpha` of the residual at `u`.
    pub fn derivative(&self, alpha: usize, u: f64) -> Result<f64> {
        let mut poly = 0.0;
        for (k, c) in self.taylor.iter().enumerate().skip(alpha).rev() {
            let falling: f64 = ((k - alpha + 1)..=k).map(|v| v as f64).product();
            poly = poly * u + c * falling;
        }
        Ok(self.wavelet.derivative(alpha, u)? - poly)
    }
}

/// `sup_{window} |D_x^alpha psi_q((x - b)/a)|`, the chain-rule factor `a^-alpha` included.
pub fn seminorm(residual: &ResidualWavelet, alpha: usize, a: f64, b: f64, m: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!(
            "dilation a must be positive, got {a}"
        )));
    }
    let (lo, hi) = seminorm_window(a, b, m)?;
    // reflecting x -> -x turns psi_q(u) into psi_q(-u); |D^alpha| only sees the sign of u
    let sign = if b < 0.0 { -1.0 } else { 1.0 };
    let b = b.abs();
    let scale = a.powi(-(alpha as i32));
    // surface a bad order here; inside the sweep it would only become NaN
    residual.derivative(alpha, 0.0)?;
    let g = |x: f64| {
        let u = sign * (x - b) / a;
        residual
            .derivative(alpha, u)
            .map(f64::abs)
            .unwrap_or(f64::NAN)
            * scale
    };
    Ok(window_sup(g, lo, hi, SUP_GRID_POINTS).1)
}

/// Fits the decay of the seminorm of `psi_q((x - b)/a)` over `a_grid`.
pub fn seminorm_decay_check(
    w: &Wavelet,
    q: usize,
    b: f64,
    m: f64,
    alpha: usize,
    a_grid: &[f64],
) -> Result<OrderFitReport> {
    check_grid(a_grid)?;
    let residual = ResidualWavelet::new(w, q)?;
    let sups: Vec<f64> = a_grid
        .par_iter()
        .map(|&a| seminorm(&residual, alpha, a, b, m))
        .collect::<Result<_>>()?;
    remainder_order_fit(a_grid, &sups, 0.0)
}
