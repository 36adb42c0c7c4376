//! Central-difference derivative engine.
//!
//! Samples the closed-form profile in 256-bit floating point so that the
//! cancellation in high-order difference quotients does not swamp the result,
//! then Romberg-extrapolates over the step sequence `h, h/2, h/4`.
//! This is slow (milliseconds per call) and exists as an independent reference
//! for the Hermite recurrence, not as a production engine.

use astro_float::{BigFloat, Consts, RoundingMode};

const PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;
const BASE_STEP: f64 = 1.0 / 128.0;
const LEVELS: usize = 3;

fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PRECISION)
}

fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// `-He_m(y) exp(-y^2/2)` in extended precision.
fn profile(m: usize, y: &BigFloat, cc: &mut Consts) -> BigFloat {
    let mut prev = big(1.0);
    let mut cur = y.clone();
    if m == 0 {
        cur = prev.clone();
    } else {
        for k in 1..m {
            let next = y.mul(&cur, PRECISION, RM).sub(
                &prev.mul(&big(k as f64), PRECISION, RM),
                PRECISION,
                RM,
            );
            prev = cur;
            cur = next;
        }
    }
    let y2 = y.mul(y, PRECISION, RM);
    let gauss = y2.div(&big(-2.0), PRECISION, RM).exp(PRECISION, RM, cc);
    cur.mul(&gauss, PRECISION, RM).neg()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `delta_h^n f(x) / h^n`, the plain central difference with binomial weights.
fn difference_quotient(m: usize, order: usize, x: f64, h: f64, cc: &mut Consts) -> BigFloat {
    let mut acc = big(0.0);
    let x = big(x);
    let step = big(h);
    for k in 0..=order {
        // offsets are (order/2 - k) h, exact in binary for h a power of two
        let offset = big(order as f64 / 2.0 - k as f64).mul(&step, PRECISION, RM);
        let sample = profile(m, &x.add(&offset, PRECISION, RM), cc);
        let weight = if k % 2 == 0 {
            binomial(order, k)
        } else {
            -binomial(order, k)
        };
        acc = acc.add(&sample.mul(&big(weight), PRECISION, RM), PRECISION, RM);
    }
    acc.div(&step.powi(order, PRECISION, RM), PRECISION, RM)
}

/// `D^order` of `-He_m(x) exp(-x^2/2)` by extrapolated central differences.
pub(crate) fn derivative(m: usize, order: usize, x: f64) -> f64 {
    let mut cc = Consts::new().expect("astro-float constant cache");
    if order == 0 {
        return to_f64(&profile(m, &big(x), &mut cc));
    }
    let mut table: Vec<BigFloat> = (0..LEVELS)
        .map(|level| {
            let h = BASE_STEP / f64::powi(2.0, level as i32);
            difference_quotient(m, order, x, h, &mut cc)
        })
        .collect();
    // error expansion is in even powers of h
    for col in 1..LEVELS {
        let factor = f64::powi(4.0, col as i32);
        for level in (col..LEVELS).rev() {
            table[level] = table[level]
                .mul(&big(factor), PRECISION, RM)
                .sub(&table[level - 1], PRECISION, RM)
                .div(&big(factor - 1.0), PRECISION, RM);
        }
    }
    to_f64(&table[LEVELS - 1])
}
