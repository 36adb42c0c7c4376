//! Moment sequences of point masses and densities, with provenance, and what
//! happens when a growth class forbids high orders.

use cwt_asymptotics::distributions::{
    moment_sequence, Density, DistributionInput, GrowthClass, PointMass,
};
use cwt_asymptotics::wavelets::Wavelet;

fn show(label: &str, d: &DistributionInput, up_to: usize) {
    let m = moment_sequence(d, up_to);
    println!("{label} [{}]", d.growth());
    for (alpha, v) in m.values().iter().enumerate() {
        println!(
            "  mu_{alpha} = {v:>22.15e}  ({})",
            m.provenance(alpha).unwrap()
        );
    }
    if let Some(reason) = m.missing_reason() {
        println!("  {reason}");
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show("delta at 0", &DistributionInput::delta(0.0), 3);
    let masses = vec![PointMass::new(1.0, 0, 2.0), PointMass::new(-0.5, 1, 1.0)];
    show(
        "2 delta(x-1) + delta'(x+0.5)",
        &DistributionInput::point_masses(masses, GrowthClass::Compact)?,
        4,
    );
    show(
        "bump (1-x^2)^4",
        &DistributionInput::density(Density::bump(0.0, 1.0, 4), GrowthClass::Compact)?,
        4,
    );
    show(
        "Mexican hat as a density",
        &DistributionInput::density(
            Density::Wavelet(Wavelet::mexican_hat()),
            GrowthClass::SubExponential,
        )?,
        6,
    );
    show(
        "power tail, gamma = 3.5",
        &DistributionInput::density(
            Density::PowerTail { gamma: 3.5 },
            GrowthClass::Power { gamma: 3.5 },
        )?,
        5,
    );
    Ok(())
}
