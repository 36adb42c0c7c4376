//! Probabilists' Hermite polynomials.
//!
//! `He_{n+1}(x) = x He_n(x) - n He_{n-1}(x)`, with `He_0 = 1` and `He_1 = x`.
//! They generate the derivatives of the Gaussian: `D^n exp(-x^2/2) = (-1)^n He_n(x) exp(-x^2/2)`.

/// Values `He_0(x), ..., He_n(x)`.
pub fn hermite_he_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(x);
    for k in 1..n {
        let next = x * out[k] - k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// `He_n(x)` by forward recurrence.
pub fn hermite_he(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `D^n` of the Gaussian `exp(-x^2/2)`.
pub fn gaussian_derivative(n: usize, x: f64) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * hermite_he(n, x) * (-0.5 * x * x).exp()
}
