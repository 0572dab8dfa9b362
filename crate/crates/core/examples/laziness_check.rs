//! Commutator and structure-constant laziness tests on a few standard states.

use lazystate::bloch::{DensityMatrix, Side};
use lazystate::io::{generate_example, ExampleSpec};
use lazystate::laziness::{is_lazy, DEFAULT_TOLERANCE};

fn main() -> lazystate::Result<()> {
    let states = [
        (
            "Bell pair",
            generate_example(&ExampleSpec::MaximallyEntangled { d: 2 })?,
        ),
        ("Werner p=0.7", generate_example(&ExampleSpec::Werner { p: 0.7 })?),
        (
            "diagonal product",
            generate_example(&ExampleSpec::Product {
                a: vec![0.7, 0.3],
                b: vec![0.2, 0.5, 0.3],
            })?,
        ),
        ("random 2x3", DensityMatrix::random(2, 3, 11)),
    ];
    println!(
        "{:<18} {:>4} {:>12} {:>12} {:>6}",
        "state", "side", "commutator", "criterion", "lazy"
    );
    for (name, rho) in &states {
        for side in [Side::A, Side::B] {
            let r = is_lazy(rho, side, DEFAULT_TOLERANCE)?;
            println!(
                "{name:<18} {side:>4} {:>12.3e} {:>12.3e} {:>6}",
                r.commutator_residual, r.criterion_norm, r.is_lazy
            );
        }
    }
    Ok(())
}
