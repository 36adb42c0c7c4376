//! Power-growth inputs cap the expansion order at [[gamma]] - 1.

use cwt_asymptotics::distributions::{moment_sequence, Density, DistributionInput, GrowthClass};
use cwt_asymptotics::expansion::{expansion_large_a, truncation_limit};
use cwt_asymptotics::wavelets::Wavelet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = Wavelet::mexican_hat();
    for gamma in [0.5, 1.0, 2.7, 3.5, 6.0] {
        let f =
            DistributionInput::density(Density::PowerTail { gamma }, GrowthClass::Power { gamma })?;
        println!("gamma = {gamma}: limit {}", truncation_limit(gamma));
        for n in 0..=4 {
            let m = moment_sequence(&f, n);
            match expansion_large_a(&m, &w, 100.0, 1.0, n) {
                Ok(e) => println!("  N = {n}: partial sum {:.6e}", e.value()),
                Err(err) => println!("  N = {n}: {err}"),
            }
        }
    }
    Ok(())
}
