//! Large-dilation expansion of a compact bump: partial sums against direct
//! quadrature, and the fitted decay order of each remainder.

use cwt_asymptotics::distributions::{
    moment_sequence_with, Density, DistributionInput, GrowthClass,
};
use cwt_asymptotics::expansion::{attach_large_a_reference, expansion_large_a};
use cwt_asymptotics::quadrature::QuadratureSpec;
use cwt_asymptotics::verify::{remainder_order_fit, DEFAULT_FLOOR};
use cwt_asymptotics::wavelets::Wavelet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = Wavelet::mexican_hat();
    let spec = QuadratureSpec {
        abs_tol: 1e-18,
        rel_tol: 1e-15,
        ..Default::default()
    };
    let f = DistributionInput::density(Density::bump(0.3, 1.0, 4), GrowthClass::Compact)?;
    let n = 3;
    let m = moment_sequence_with(&f, n, &spec);
    let b = 1.0;
    let grid: Vec<f64> = (0..7).map(|k| 16.0 * 2f64.powi(k)).collect();

    let mut remainders = vec![Vec::new(); n + 1];
    for &a in &grid {
        let e = expansion_large_a(&m, &w, a, b, n)?;
        attach_large_a_reference(&e, &f, &w, &spec)?;
        let r = e.remainders().expect("reference attached");
        println!(
            "a = {a:>6}: W = {:.15e}, remainders {:?}",
            e.reference().unwrap(),
            r.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
        );
        for (k, v) in r.into_iter().enumerate() {
            remainders[k].push(v);
        }
    }
    for (k, r) in remainders.iter().enumerate() {
        let fit = remainder_order_fit(&grid, r, DEFAULT_FLOOR)?;
        println!(
            "N = {k}: slope {:.3} (expected <= {:.1}), r^2 {:.6}, excluded {:?}",
            fit.slope,
            -(k as f64 + 0.5),
            fit.r_squared,
            fit.excluded_points
        );
    }
    Ok(())
}
