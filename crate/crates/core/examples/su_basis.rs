//! Build the su(n) generator basis and list its nonzero structure constants.
//!
//!     cargo run --example su_basis -- 3

use lazystate::su_algebra::{build_su_basis, verify_basis};

fn main() -> lazystate::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let basis = build_su_basis(n)?;
    let labels: Vec<String> = basis.kinds().iter().map(|k| k.to_string()).collect();
    println!("su({n}): {} generators: {}", basis.len(), labels.join(" "));

    let f = basis.structure_constants();
    println!("{} nonzero f_ijk with i < j < k:", f.nonzero_count());
    for ([i, j, k], v) in f.iter() {
        println!(
            "  f({}, {}, {}) = {v:+.6}   [{} {} {}]",
            i + 1,
            j + 1,
            k + 1,
            labels[i],
            labels[j],
            labels[k]
        );
    }

    let check = verify_basis(&basis);
    println!(
        "trace {:.1e}, orthonormality {:.1e}, hermiticity {:.1e}, commutator identity {:.1e}",
        check.trace, check.orthonormality, check.hermiticity, check.commutator
    );
    Ok(())
}
