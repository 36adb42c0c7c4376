//! The transform computed in x-space and on the Fourier side, and the
//! moment/derivative duality at omega = 0.

use cwt_asymptotics::distributions::{Density, DistributionInput, GrowthClass};
use cwt_asymptotics::quadrature::QuadratureSpec;
use cwt_asymptotics::transform::{
    cwt_direct, cwt_fourier, fourier_moment_check, fourier_normalization, FOURIER_CONVENTION,
};
use cwt_asymptotics::wavelets::Wavelet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = Wavelet::mexican_hat();
    let spec = QuadratureSpec::default();
    println!("convention: {FOURIER_CONVENTION}");
    println!(
        "calibrated constant {:.17} vs 1/(2 pi) {:.17}",
        fourier_normalization(),
        1.0 / (2.0 * std::f64::consts::PI)
    );

    let inputs = [
        ("delta at 0.5", DistributionInput::delta(0.5)),
        ("delta''", DistributionInput::delta_derivative(0.0, 2)),
        (
            "gaussian",
            DistributionInput::density(Density::gaussian(0.0, 1.0), GrowthClass::SubExponential)?,
        ),
        (
            "bump",
            DistributionInput::density(Density::bump(0.3, 1.2, 3), GrowthClass::Compact)?,
        ),
    ];
    for (label, f) in &inputs {
        for (a, b) in [(0.5, 0.0), (2.0, 1.0), (8.0, -3.0)] {
            let d = cwt_direct(f, &w, a, b, &spec)?;
            let q = cwt_fourier(f, &w, a, b, &spec)?;
            println!(
                "{label:>12} a={a:<4} b={b:<5} {:>22.15e} ({}) {:>22.15e} diff {:.1e}",
                d.value,
                d.method,
                q.value,
                (d.value - q.value).abs()
            );
        }
    }

    let f = &inputs[3].1;
    for alpha in 0..=4 {
        let c = fourier_moment_check(f, alpha, 0.05)?;
        println!("alpha {alpha}: D^alpha f_hat(0) = {:.12}  i^alpha mu = {:.12}  residual vs conjugate {:.1e}", c.lhs, c.rhs, c.residual());
    }
    Ok(())
}
