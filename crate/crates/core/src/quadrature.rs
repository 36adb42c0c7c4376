//! Adaptive Gauss-Kronrod integration.
//!
//! A globally adaptive 10/21-point Gauss-Kronrod scheme in the style of
//! QUADPACK's `qag`: the interval with the largest error estimate is bisected
//! until the summed estimate meets `max(abs_tol, rel_tol * |I|)`. When every
//! remaining estimate has hit the rounding floor (`50 eps * int |g|` per
//! interval) no further bisection can help, and the result is accepted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Half-width used when a caller truncates an infinite range (in natural units of the integrand).
    pub truncation_t: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            truncation_t: 12.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.abs_tol) || !positive(self.rel_tol) {
            return Err(Error::Config(format!(
                "quadrature tolerances must be strictly positive (abs_tol = {}, rel_tol = {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        if !positive(self.truncation_t) {
            return Err(Error::Config(format!(
                "truncation_t must be positive, got {}",
                self.truncation_t
            )));
        }
        Ok(())
    }
}

/// Result of an integration: value and estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_estimate: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    /// error estimate is at the rounding floor; bisection cannot improve it
    saturated: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // saturated segments sink below every refinable one
        other
            .saturated
            .cmp(&self.saturated)
            .then(self.err.total_cmp(&other.err))
            .then(other.lo.total_cmp(&self.lo))
    }
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = g(center);
    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[10];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (g(center - dx), g(center + dx));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (g(center - dx), g(center + dx));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    if !res_kronrod.is_finite() || !res_abs.is_finite() {
        return Err(Error::Domain(format!(
            "integrand is not finite on [{lo:e}, {hi:e}]"
        )));
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let width = half.abs();
    let value = res_kronrod * half;
    res_abs *= width;
    res_asc *= width;

    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let mut saturated = false;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if floor >= err {
            err = floor;
            saturated = true;
        }
    }
    // interval can no longer be split in floating point
    if center <= lo || center >= hi {
        saturated = true;
    }
    Ok(Segment {
        lo,
        hi,
        value,
        err,
        saturated,
    })
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0_f64, 0.0_f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn finish(heap: BinaryHeap<Segment>) -> (f64, f64) {
    let mut segs = heap.into_vec();
    segs.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = neumaier_sum(segs.iter().map(|s| s.value));
    let err = neumaier_sum(segs.iter().map(|s| s.err));
    (value, err)
}

fn adaptive<F: Fn(f64) -> f64>(g: &F, points: &[f64], spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(gauss_kronrod_21(g, w[0], w[1])?);
        }
    }
    if heap.is_empty() {
        return Ok(Integral {
            value: 0.0,
            err_estimate: 0.0,
        });
    }
    let mut subdivisions = 0;
    loop {
        let total = neumaier_sum(heap.iter().map(|s| s.value));
        let total_err = neumaier_sum(heap.iter().map(|s| s.err));
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        let worst = *heap.peek().expect("non-empty");
        if total_err <= target || worst.saturated {
            let (value, err_estimate) = finish(heap);
            return Ok(Integral {
                value,
                err_estimate,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            let (best, err_estimate) = finish(heap);
            return Err(Error::NonConvergence {
                best,
                err_estimate,
                subdivisions,
            });
        }
        heap.pop();
        let mid = 0.5 * (worst.lo + worst.hi);
        heap.push(gauss_kronrod_21(g, worst.lo, mid)?);
        heap.push(gauss_kronrod_21(g, mid, worst.hi)?);
        subdivisions += 1;
    }
}

/// Integrates `g` over the finite interval `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(
    g: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!(
            "integration bounds must be finite with lo < hi, got [{lo}, {hi}]"
        )));
    }
    adaptive(&g, &[lo, hi], spec)
}

/// Integrates over `[points[0], points[last]]`, starting with one panel per
/// gap so that kinks at the breakpoints never sit inside a panel.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    g: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if points.len() < 2
        || points.iter().any(|p| !p.is_finite())
        || points.windows(2).any(|w| w[1] < w[0])
        || points[0] >= points[points.len() - 1]
    {
        return Err(Error::Domain(
            "breakpoints must be finite, sorted and span a non-empty interval".into(),
        ));
    }
    adaptive(&g, points, spec)
}

/// Integrates over `[lo, inf)` through `x = lo + t/(1-t)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    g: F,
    lo: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let mapped = |t: f64| {
        let s = 1.0 - t;
        let x = lo + t / s;
        let v = g(x);
        if v == 0.0 {
            0.0
        } else {
            v / (s * s)
        }
    };
    adaptive(&mapped, &[0.0, 1.0], spec)
}

/// Integrates over the whole real line, split at `split`.
pub fn integrate_full_line<F: Fn(f64) -> f64>(
    g: F,
    split: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let right = integrate_to_infinity(&g, split, spec)?;
    let left = integrate_to_infinity(|x| g(2.0 * split - x), split, spec)?;
    Ok(Integral {
        value: right.value + left.value,
        err_estimate: right.err_estimate + left.err_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_on_unit_interval() {
        let r = integrate(|_| 1.0, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_over_truncated_line() {
        // sqrt(2 pi) = 2.5066282746310005024...
        let r = integrate(
            |x| (-0.5 * x * x).exp(),
            -12.0,
            12.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value - 2.506_628_274_631_000_5).abs() < 1e-12);
        let spec = QuadratureSpec::default();
        assert!(r.err_estimate <= spec.abs_tol.max(spec.rel_tol * r.value.abs()));
    }

    #[test]
    fn mexican_hat_squared() {
        // int (1-x^2)^2 e^{-x^2} dx = sqrt(pi) (1 - 2 (1/2) + 3/4) = (3/4) sqrt(pi)
        let r = integrate(
            |x| {
                let v = (1.0 - x * x) * (-0.5 * x * x).exp();
                v * v
            },
            -12.0,
            12.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((r.value - 0.75 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn interval_additivity() {
        let g = |x: f64| (3.0 * x).sin() * (-x * x).exp() + x.powi(3);
        let spec = QuadratureSpec::default();
        let whole = integrate(g, -2.0, 3.0, &spec).unwrap();
        let left = integrate(g, -2.0, 0.7, &spec).unwrap();
        let right = integrate(g, 0.7, 3.0, &spec).unwrap();
        let bound = 2.0 * (whole.err_estimate + left.err_estimate + right.err_estimate);
        assert!((whole.value - left.value - right.value).abs() <= bound.max(1e-14));
    }

    #[test]
    fn doubling_truncation_leaves_gaussian_tail_integral_unchanged() {
        let spec = QuadratureSpec::default();
        let g = |x: f64| x * x * (-0.5 * x * x).exp();
        let t = spec.truncation_t;
        let a = integrate(g, -t, t, &spec).unwrap().value;
        let b = integrate(g, -2.0 * t, 2.0 * t, &spec).unwrap().value;
        assert!((a - b).abs() < spec.abs_tol);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            ..Default::default()
        };
        // 1/sqrt(x) has an endpoint singularity; 3 bisections are not enough
        match integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &spec) {
            Err(Error::NonConvergence {
                best, subdivisions, ..
            }) => {
                assert_eq!(subdivisions, 3);
                assert!((best - 2.0).abs() < 0.1);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_spec_and_bounds() {
        let bad = QuadratureSpec {
            abs_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &bad).is_err());
        let bad = QuadratureSpec {
            max_subdivisions: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(integrate(|x| x, 1.0, 0.0, &QuadratureSpec::default()).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn semi_infinite_and_full_line() {
        let spec = QuadratureSpec::default();
        let r = integrate_to_infinity(|x| (-x).exp(), 0.0, &spec).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        // int dx/(1+x^2) = pi
        let r = integrate_full_line(|x| 1.0 / (1.0 + x * x), 0.0, &spec).unwrap();
        assert!((r.value - PI).abs() < 1e-10);
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let spec = QuadratureSpec::default();
        let r = integrate_with_breakpoints(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], &spec).unwrap();
        assert!((r.value - 2.5).abs() < 1e-15);
    }
}
