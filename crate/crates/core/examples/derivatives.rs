//! Derivatives of the Mexican hat from the Hermite recurrence, checked against
//! the extended-precision central-difference engine, and a Taylor polynomial.

use cwt_asymptotics::wavelets::{DerivativeEngine, Wavelet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hermite = Wavelet::mexican_hat();
    let central = Wavelet::mexican_hat().with_engine(DerivativeEngine::CentralDifference);

    println!(
        "{:>5} {:>6} {:>24} {:>24} {:>10}",
        "order", "x", "hermite", "central", "rel diff"
    );
    for order in [0, 1, 2, 4, 8] {
        for x in [-2.5, 0.0, 1.0, 3.0] {
            let h = hermite.derivative(order, x)?;
            let c = central.derivative(order, x)?;
            let rel = (h - c).abs() / h.abs().max(1e-300);
            println!("{order:>5} {x:>6} {h:>24.16e} {c:>24.16e} {rel:>10.2e}");
        }
    }

    let (a, b) = (2.0, 1.0);
    let p = hermite.taylor_polynomial(2, -b / a)?;
    println!("\nP_2 about -b/a = {}: {:?}", -b / a, p.coefficients);
    for dx in [0.0, 0.05, 0.1] {
        let y = p.center + dx;
        println!(
            "  psi({y:.3}) = {:.12}   P_2 = {:.12}",
            hermite.eval(y),
            p.eval_at(y)
        );
    }
    Ok(())
}
