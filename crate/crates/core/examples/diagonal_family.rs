//! Two-qutrit states with diagonal correlations `Σ λ_k σ_k⊗σ_k`: with every
//! `λ_k ≠ 0` they are lazy exactly when the local vector `x` vanishes.

use lazystate::bloch::Side;
use lazystate::laziness::{diagonal_family, is_lazy, DEFAULT_TOLERANCE};

fn main() -> lazystate::Result<()> {
    let lambda = [0.05, -0.04, 0.06, 0.03, -0.05, 0.04, 0.02, -0.03];
    let y = [0.02, 0.0, -0.03, 0.01, 0.0, 0.02, 0.0, 0.01];
    for scale in [0.0, 1e-6, 1e-3, 0.05] {
        let x = [scale, 0.0, 0.0, -scale, 0.0, 0.5 * scale, 0.0, scale];
        let family = diagonal_family::state(&x, &y, &lambda);
        let rho = family.state.into_state()?;
        let report = is_lazy(&rho, Side::A, DEFAULT_TOLERANCE)?;
        let f = diagonal_family::f_matrix(&x);
        println!(
            "|x|max = {scale:<7} commutator {:.3e}  |F| = {:.3e}  lazy: {}",
            report.commutator_residual,
            f.norm(),
            report.is_lazy
        );
    }
    Ok(())
}
