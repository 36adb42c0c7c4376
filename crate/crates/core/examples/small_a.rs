//! Small-dilation expansion with the Mexican hat as the analyzing distribution,
//! next to the series built from the printed Gamma coefficients.

use cwt_asymptotics::distributions::{
    moment_sequence_with, Density, DistributionInput, GrowthClass,
};
use cwt_asymptotics::expansion::{
    compare_printed_small_a_coefficients, expansion_small_a, mexican_hat_small_a_printed_coeffs,
    small_a_reference,
};
use cwt_asymptotics::quadrature::QuadratureSpec;
use cwt_asymptotics::verify::{remainder_order_fit, DEFAULT_FLOOR};
use cwt_asymptotics::wavelets::Wavelet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = QuadratureSpec {
        abs_tol: 1e-18,
        rel_tol: 1e-15,
        ..Default::default()
    };
    let psi = DistributionInput::density(
        Density::Wavelet(Wavelet::mexican_hat()),
        GrowthClass::SubExponential,
    )?;
    let moments = moment_sequence_with(&psi, 8, &spec);
    let f = Density::gaussian(0.0, 1.0);
    let (b, n) = (0.5, 4);

    for row in compare_printed_small_a_coefficients(&moments, n)? {
        println!(
            "order {}: printed {:>12.6}  moment {:>12.6}{}",
            row.order,
            row.printed,
            row.moment,
            if row.mismatch { "  <- differs" } else { "" }
        );
    }

    let grid = [0.025, 0.05, 0.1, 0.2, 0.4];
    let mut remainders = Vec::new();
    for &a in &grid {
        let reference = small_a_reference(&psi, &f, a, b, &spec)?;
        let series = expansion_small_a(&moments, &f, a, b, n)?;
        let printed = mexican_hat_small_a_printed_coeffs(&f, a, b, n)?;
        println!("a = {a:<6} reference {reference:>14.6e}  moment series {:>14.6e}  printed series {:>14.6e}", series.value(), printed.value());
        remainders.push(reference - series.value());
    }
    let fit = remainder_order_fit(&grid, &remainders, DEFAULT_FLOOR)?;
    println!(
        "remainder slope {:.3}; next surviving term carries a^6.5",
        fit.slope
    );
    Ok(())
}
