//! Bloch form of a random two-qutrit state and its exact reconstruction.

use lazystate::bloch::{decompose, reconstruct, DensityMatrix, Side};
use lazystate::linalg::max_abs;
use lazystate::su_algebra::build_su_basis;

fn main() -> lazystate::Result<()> {
    let rho = DensityMatrix::random(3, 3, 7);
    let basis = build_su_basis(3)?;
    let bloch = decompose(&rho, &basis, &basis)?;

    println!("x = {:.4?}", bloch.x.as_slice());
    println!("y = {:.4?}", bloch.y.as_slice());
    println!("T ={:.4}", bloch.t);

    let back = reconstruct(&bloch, &basis, &basis)?;
    println!(
        "reconstruction error {:.1e}",
        max_abs(&(back.matrix - rho.matrix()))
    );

    let rho_a = rho.reduced(Side::A);
    println!(
        "spectrum of the A marginal: {:.4?}",
        rho_a.eigenvalues().as_slice()
    );
    Ok(())
}
