//! Number-basis check that squeezing destroys laziness: the commutator residual
//! of a truncated two-mode squeezed thermal state grows with the squeezing.

use lazystate::bloch::Side;
use lazystate::gaussian::fock::{squeezed_thermal_fock, SqueezedThermal};
use lazystate::laziness::commutator_residual;

fn main() -> lazystate::Result<()> {
    let cutoff = 20;
    for (a, b) in [(1.0, 1.0), (1.5, 1.2)] {
        println!("thermal covariances a = {a}, b = {b}, cutoff {cutoff}");
        for step in 0..=5 {
            let r = 0.1 * step as f64;
            let rho = squeezed_thermal_fock(&SqueezedThermal { a, b, r }, cutoff)?;
            println!(
                "  r = {r:.1}: residual {:.3e}",
                commutator_residual(&rho, Side::A)
            );
        }
    }
    Ok(())
}
