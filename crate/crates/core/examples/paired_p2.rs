//! The second-order Mexican-hat expansion written out with explicit Taylor
//! coefficients, compared with the general series and with the display that
//! omits the a^-alpha factors.

use cwt_asymptotics::distributions::{moment_sequence, Density, DistributionInput, GrowthClass};
use cwt_asymptotics::expansion::{
    expansion_large_a, mexican_hat_p2_paired, mexican_hat_p2_printed,
};
use cwt_asymptotics::wavelets::Wavelet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = DistributionInput::density(Density::bump(0.3, 1.0, 4), GrowthClass::Compact)?;
    let m = moment_sequence(&f, 2);
    let mu = [m.values()[0], m.values()[1], m.values()[2]];
    let w = Wavelet::mexican_hat();
    println!(
        "{:>6} {:>6} {:>22} {:>22} {:>22}",
        "a", "b", "series N=2", "P_2 paired", "display"
    );
    for (a, b) in [(2.0, 1.0), (10.0, -3.0), (100.0, 5.0), (1000.0, 0.5)] {
        let series = expansion_large_a(&m, &w, a, b, 2)?.value();
        println!(
            "{a:>6} {b:>6} {series:>22.15e} {:>22.15e} {:>22.15e}",
            mexican_hat_p2_paired(mu, a, b),
            mexican_hat_p2_printed(mu, a, b)
        );
    }
    Ok(())
}
