//! Randomized invariants across the library.

use std::f64::consts::PI;

use proptest::prelude::*;

use cwt_asymptotics::distributions::{
    moment, moment_sequence, Density, DistributionInput, GrowthClass,
};
use cwt_asymptotics::expansion::{expansion_large_a, expansion_small_a, small_a_reference};
use cwt_asymptotics::hermite::hermite_he;
use cwt_asymptotics::quadrature::QuadratureSpec;
use cwt_asymptotics::transform::{cwt_direct, cwt_fourier};
use cwt_asymptotics::verify::{remainder_order_fit, window_sup, DEFAULT_FLOOR};
use cwt_asymptotics::wavelets::Wavelet;

fn tight() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-16,
        rel_tol: 1e-14,
        ..Default::default()
    }
}

fn bump(center: f64, radius: f64, power: u32) -> DistributionInput {
    DistributionInput::density(Density::bump(center, radius, power), GrowthClass::Compact).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermite_parity(n in 0usize..=20, x in -8.0f64..8.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (l, r) = (hermite_he(n, -x), sign * hermite_he(n, x));
        prop_assert!((l - r).abs() <= 1e-12 * (1.0 + r.abs()));
    }

    #[test]
    fn taylor_remainder_bound(degree in 0usize..=6, center in -3.0f64..3.0, t in -1.0f64..1.0) {
        let w = Wavelet::mexican_hat();
        let p = w.taylor_polynomial(degree, center).unwrap();
        let (_, sup) = window_sup(|y| w.derivative(degree + 1, y).unwrap().abs(), center - 1.0, center + 1.0, 512);
        let factorial: f64 = (1..=degree + 1).map(|k| k as f64).product();
        let bound = sup / factorial * t.abs().powi(degree as i32 + 1);
        let err = (w.eval(center + t) - p.eval_at(center + t)).abs();
        prop_assert!(err <= bound * (1.0 + 1e-9) + 1e-14, "err {} bound {}", err, bound);
    }

    #[test]
    fn translation_covariance(
        center in -1.0f64..1.0,
        shift in -3.0f64..3.0,
        a in 0.2f64..20.0,
        b in -4.0f64..4.0,
    ) {
        let w = Wavelet::mexican_hat();
        let spec = tight();
        let moved = cwt_direct(&bump(center + shift, 0.8, 3), &w, a, b, &spec).unwrap().value;
        let base = cwt_direct(&bump(center, 0.8, 3), &w, a, b - shift, &spec).unwrap().value;
        prop_assert!((moved - base).abs() <= 1e-9, "{} vs {}", moved, base);
    }

    #[test]
    fn moment_binomial_shift(center in -1.0f64..1.0, shift in -2.0f64..2.0, alpha in 0usize..=6) {
        let base = moment_sequence(&bump(center, 1.0, 4), alpha);
        let shifted = moment(&bump(center + shift, 1.0, 4), alpha).unwrap();
        let mut binom = 1.0;
        let mut expected = 0.0;
        for j in (0..=alpha).rev() {
            expected += binom * shift.powi((alpha - j) as i32) * base.values()[j];
            binom *= j as f64 / (alpha - j + 1) as f64;
        }
        prop_assert!((shifted - expected).abs() <= 1e-9 * (1.0 + expected.abs()), "{} vs {}", shifted, expected);
    }

    #[test]
    fn direct_and_fourier_agree(
        mean in -2.0f64..2.0,
        sigma in 0.3f64..2.0,
        a in 0.2f64..30.0,
        b in -5.0f64..5.0,
    ) {
        let w = Wavelet::mexican_hat();
        let spec = QuadratureSpec { abs_tol: 1e-13, rel_tol: 1e-11, ..Default::default() };
        for f in [
            DistributionInput::density(Density::gaussian(mean, sigma), GrowthClass::SubExponential).unwrap(),
            bump(mean, sigma, 4),
        ] {
            let d = cwt_direct(&f, &w, a, b, &spec).unwrap().value;
            let g = cwt_fourier(&f, &w, a, b, &spec).unwrap().value;
            prop_assert!((d - g).abs() <= 1e-7 * (1.0 + d.abs()), "direct {} fourier {}", d, g);
        }
    }

    #[test]
    fn grid_sup_grows_under_refinement(lo in -5.0f64..0.0, width in 0.5f64..8.0, points in 8usize..200) {
        let g = |x: f64| (3.0 * x).sin().abs() * (-0.1 * x * x).exp();
        let (_, coarse) = window_sup(g, lo, lo + width, points);
        let (_, fine) = window_sup(g, lo, lo + width, 2 * points - 1);
        prop_assert!(fine >= coarse - 1e-12, "fine {} coarse {}", fine, coarse);
    }

    #[test]
    fn power_law_slope_recovery(p in -8.0f64..2.0, c in 0.01f64..100.0, start in 0.5f64..50.0) {
        let grid: Vec<f64> = (0..6).map(|k| start * 2f64.powi(k)).collect();
        let r: Vec<f64> = grid.iter().map(|a| c * a.powf(p)).collect();
        prop_assume!(r.iter().all(|v| v.abs() >= DEFAULT_FLOOR));
        let fit = remainder_order_fit(&grid, &r, DEFAULT_FLOOR).unwrap();
        prop_assert!((fit.slope - p).abs() < 1e-9);
    }

    #[test]
    fn partial_sums_accumulate(center in -1.0f64..1.0, a in 1.0f64..500.0, b in -5.0f64..5.0, n in 0usize..=6) {
        let m = moment_sequence(&bump(center, 1.0, 4), n);
        let e = expansion_large_a(&m, &Wavelet::mexican_hat(), a, b, n).unwrap();
        prop_assert_eq!(e.terms().len(), n + 1);
        prop_assert_eq!(e.partial_sums()[0], e.terms()[0]);
        for k in 1..=n {
            let step = e.partial_sums()[k] - e.partial_sums()[k - 1];
            let scale = e.partial_sums()[k].abs().max(e.partial_sums()[k - 1].abs());
            prop_assert!((step - e.terms()[k]).abs() <= 4.0 * f64::EPSILON * scale);
        }
        prop_assert_eq!(e.value(), e.partial_sums()[n]);
    }

    #[test]
    fn small_dilation_series_reproduces_pairing(a in 0.005f64..0.03, b in -1.5f64..1.5) {
        // N = 12 leaves a first omitted term of order a^14.5
        let w = Wavelet::mexican_hat();
        let psi = DistributionInput::density(Density::Wavelet(w), GrowthClass::SubExponential).unwrap();
        let f = Density::gaussian(0.2, 0.9);
        let m = moment_sequence(&psi, 12);
        let series = expansion_small_a(&m, &f, a, b, 12).unwrap().value();
        let pairing = small_a_reference(&psi, &f, a, b, &tight()).unwrap();
        prop_assert!((series - pairing).abs() <= 1e-12, "series {} pairing {}", series, pairing);
    }
}

#[test]
fn gaussian_family_wavelets_have_zero_mean() {
    for m in 1..=6 {
        let w = Wavelet::gaussian_derivative(m).unwrap();
        let f =
            DistributionInput::density(Density::Wavelet(w), GrowthClass::SubExponential).unwrap();
        let mu0 = moment(&f, 0).unwrap();
        assert!(mu0.abs() < 1e-10, "m={m}: mu0 = {mu0}");
    }
}

#[test]
fn mollified_point_mass_moments_converge() {
    let c = 0.7;
    for alpha in 0..=4usize {
        let exact = moment(&DistributionInput::delta(c), alpha).unwrap();
        let mut last = f64::INFINITY;
        for sigma in [0.2, 0.1, 0.05, 0.025, 0.0125] {
            let mollifier = Density::Gaussian {
                mean: c,
                sigma,
                amplitude: 1.0 / (sigma * (2.0 * PI).sqrt()),
            };
            let f = DistributionInput::density(mollifier, GrowthClass::SubExponential).unwrap();
            let err = (moment(&f, alpha).unwrap() - exact).abs();
            assert!(
                err <= last + 1e-12,
                "alpha={alpha} sigma={sigma}: {err} after {last}"
            );
            last = err;
        }
        assert!(last < 1e-3, "alpha={alpha}: final error {last}");
    }
}
