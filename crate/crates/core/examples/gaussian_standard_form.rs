//! Two-mode Gaussian states: recover the standard form from a scrambled
//! covariance matrix, then test the closed-form identities and laziness.

use lazystate::gaussian::fock::SqueezedThermal;
use lazystate::gaussian::{analyse, standard_form_from_cov, CovarianceState};
use nalgebra::{Matrix2, Matrix4, Vector4};

fn rotation(a: f64) -> Matrix2<f64> {
    Matrix2::new(a.cos(), -a.sin(), a.sin(), a.cos())
}

fn main() -> lazystate::Result<()> {
    let form = SqueezedThermal {
        a: 1.4,
        b: 1.1,
        r: 0.4,
    }
    .form();

    // Local phase rotations and single-mode squeezing leave the standard form unchanged.
    let mut s = Matrix4::zeros();
    s.fixed_view_mut::<2, 2>(0, 0)
        .copy_from(&(rotation(0.7) * Matrix2::new(1.3, 0.0, 0.0, 1.0 / 1.3)));
    s.fixed_view_mut::<2, 2>(2, 2).copy_from(&rotation(-1.1));
    let scrambled = CovarianceState::new(s * form.covariance() * s.transpose(), Vector4::zeros())?;
    let recovered = standard_form_from_cov(&scrambled)?;
    println!("original  {form:?}");
    println!("recovered {recovered:?}");

    for (label, f) in [
        ("squeezed thermal", form),
        (
            "product",
            lazystate::GaussianStandardForm::new(2.0, 3.0, 0.0, 0.0),
        ),
    ] {
        let report = analyse(&f, 1e-10, 10, 0, None)?;
        println!(
            "{label:>16}: nu = ({:.4}, {:.4}), det identity residual {:.1e}, quadratic-form residual {:.1e}, lazy {}",
            report.symplectic_eigenvalues[0],
            report.symplectic_eigenvalues[1],
            report.det_identity_residual,
            report.quadratic_form_residual,
            report.is_lazy
        );
    }
    Ok(())
}
