//! Decay in a of the windowed sup-seminorm of psi_q((x - b)/a), where psi_q is
//! the wavelet minus its Taylor polynomial of degree q - 1.

use cwt_asymptotics::verify::seminorm_decay_check;
use cwt_asymptotics::wavelets::Wavelet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = Wavelet::mexican_hat();
    let grid: Vec<f64> = (0..6).map(|k| 8.0 * 2f64.powi(k)).collect();
    println!("{:>2} {:>5} {:>4} {:>8}", "q", "alpha", "b", "slope");
    for q in 0..=3 {
        for alpha in 0..=1 {
            for b in [0.0, 2.0, -2.0] {
                let fit = seminorm_decay_check(&w, q, b, 1.0, alpha, &grid)?;
                println!("{q:>2} {alpha:>5} {b:>4} {:>8.3}", fit.slope);
            }
        }
    }
    Ok(())
}
