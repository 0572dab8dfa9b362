//! Entropy rate of subsystem A under random GUE couplings: zero for a lazy
//! state, generically nonzero otherwise.

use lazystate::bloch::{DensityMatrix, Side};
use lazystate::dynamics::{
    dynamics_audit, entropy_rate, entropy_rate_fd, random_coupling, AuditThresholds, FD_STEP,
};
use lazystate::io::{generate_example, ExampleSpec};

fn main() -> lazystate::Result<()> {
    let werner = generate_example(&ExampleSpec::Werner { p: 0.5 })?;
    let generic = DensityMatrix::random(2, 2, 3);

    for (name, rho) in [("werner", &werner), ("random", &generic)] {
        let audit = dynamics_audit(rho, Side::A, 200, 1, AuditThresholds::default())?;
        println!(
            "{name:>7}: lazy {:<5} max |dS_A/dt| = {:.3e} over {} couplings ({} finite-difference)",
            audit.is_lazy, audit.max_rate, audit.trials, audit.finite_difference_trials
        );
    }

    let h = random_coupling(2, 2, 42);
    let analytic = entropy_rate(&generic, &h, Side::A)?;
    let fd = entropy_rate_fd(&generic, &h, Side::A, FD_STEP)?;
    println!("single coupling: analytic {analytic:.10}, central difference {fd:.10}");
    Ok(())
}
