//! Laziness tests: the direct commutator `[ρ, ρ_A ⊗ I]` and the
//! structure-constant criterion on the Bloch form.
//!
//! Expanding the commutator over generators gives
//!
//! ```text
//! [ρ, ρ_A⊗I] = 2i/(n_A² n_B) Σ_{l,j} G_lj σ_l⊗τ_j,   G_lj = Σ_{i,k} T_ij x_k f_ikl
//! ```
//!
//! and since `tr((σ_l⊗τ_j)(σ_l'⊗τ_j')) = 4 δ δ`, the two residuals are tied by
//! `‖[ρ, ρ_A⊗I]‖_F = 4/(n_A² n_B) ‖G‖_F`. The side-B mirror uses
//! `G'_il = Σ_{j,k} T_ij y_k g_jkl` and the factor `4/(n_A n_B²)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bloch::{decompose, BlochForm, DensityMatrix, Side};
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius, mul_left_local_a, mul_left_local_b, mul_right_local_a, mul_right_local_b, CMatrix,
};
use crate::su_algebra::{build_su_basis, SuBasis};

/// Default bound on the Frobenius commutator residual of a unit-trace state.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `[ρ, ρ_A ⊗ I]` for side A, `[ρ, I ⊗ ρ_B]` for side B.
pub fn commutator(rho: &DensityMatrix, side: Side) -> CMatrix {
    let m = rho.matrix();
    let local = rho.reduced_matrix(side);
    match side {
        Side::A => mul_right_local_a(m, &local, rho.dim_b()) - mul_left_local_a(&local, m, rho.dim_b()),
        Side::B => mul_right_local_b(m, &local, rho.dim_a()) - mul_left_local_b(&local, m, rho.dim_a()),
    }
}

/// Frobenius norm of [`commutator`]; zero exactly for lazy states.
pub fn commutator_residual(rho: &DensityMatrix, side: Side) -> f64 {
    frobenius(&commutator(rho, side))
}

/// Ratio `‖commutator‖_F / ‖G‖_F`.
pub fn norm_factor(side: Side, dim_a: usize, dim_b: usize) -> f64 {
    let (na, nb) = (dim_a as f64, dim_b as f64);
    match side {
        Side::A => 4.0 / (na * na * nb),
        Side::B => 4.0 / (na * nb * nb),
    }
}

/// `G_lj = Σ_{i,k} T_ij x_k f_ikl`, shape `(n_A²-1) × (n_B²-1)`.
pub fn criterion_matrix(bloch: &BlochForm, basis_a: &SuBasis) -> DMatrix<f64> {
    let (ga, gb) = bloch.t.shape();
    let mut g = DMatrix::zeros(ga, gb);
    basis_a.structure_constants().for_each_oriented(|i, k, l, v| {
        let w = v * bloch.x[k];
        if w != 0.0 {
            for j in 0..gb {
                g[(l, j)] += w * bloch.t[(i, j)];
            }
        }
    });
    g
}

/// Side-B mirror `G'_il = Σ_{j,k} T_ij y_k g_jkl`, shape `(n_A²-1) × (n_B²-1)`.
pub fn criterion_matrix_b(bloch: &BlochForm, basis_b: &SuBasis) -> DMatrix<f64> {
    let (ga, gb) = bloch.t.shape();
    let mut g = DMatrix::zeros(ga, gb);
    basis_b.structure_constants().for_each_oriented(|j, k, l, v| {
        let w = v * bloch.y[k];
        if w != 0.0 {
            for i in 0..ga {
                g[(i, l)] += w * bloch.t[(i, j)];
            }
        }
    });
    g
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LazinessReport {
    pub side: Side,
    /// Frobenius norm of the commutator.
    pub commutator_residual: f64,
    /// Max-abs entry of the criterion matrix.
    pub criterion_residual: f64,
    /// Frobenius norm of the criterion matrix.
    pub criterion_norm: f64,
    /// Commutator tolerance carried over to `criterion_norm` through the norm identity.
    pub criterion_threshold: f64,
    pub tolerance: f64,
    pub is_lazy: bool,
    pub criterion_is_lazy: bool,
}

/// Laziness report with freshly built bases.
pub fn is_lazy(rho: &DensityMatrix, side: Side, tol: f64) -> Result<LazinessReport> {
    let basis_a = build_su_basis(rho.dim_a())?;
    let basis_b = build_su_basis(rho.dim_b())?;
    is_lazy_with(rho, side, tol, &basis_a, &basis_b)
}

/// Laziness report reusing caller-provided bases.
pub fn is_lazy_with(
    rho: &DensityMatrix,
    side: Side,
    tol: f64,
    basis_a: &SuBasis,
    basis_b: &SuBasis,
) -> Result<LazinessReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let bloch = decompose(rho, basis_a, basis_b)?;
    let g = match side {
        Side::A => criterion_matrix(&bloch, basis_a),
        Side::B => criterion_matrix_b(&bloch, basis_b),
    };
    let commutator_residual = commutator_residual(rho, side);
    let criterion_norm = g.norm();
    let criterion_threshold = tol / norm_factor(side, rho.dim_a(), rho.dim_b());
    Ok(LazinessReport {
        side,
        commutator_residual,
        criterion_residual: g.amax(),
        criterion_norm,
        criterion_threshold,
        tolerance: tol,
        is_lazy: commutator_residual < tol,
        criterion_is_lazy: criterion_norm < criterion_threshold,
    })
}

/// The 3×3 family with diagonal correlations
/// `ρ = (I + Σ x_i σ_i⊗I + Σ y_j I⊗σ_j + Σ λ_k σ_k⊗σ_k) / 9`.
pub mod diagonal_family {
    use std::sync::OnceLock;

    use nalgebra::{DMatrix, DVector};

    use crate::bloch::{reconstruct, BlochForm, Reconstructed};
    use crate::su_algebra::{build_su_basis, SuBasis};

    pub(crate) fn su3() -> &'static SuBasis {
        static BASIS: OnceLock<SuBasis> = OnceLock::new();
        BASIS.get_or_init(|| build_su_basis(3).expect("su(3) basis"))
    }

    /// `F_jl = Σ_k x_k f_jkl` over su(3) in canonical order.
    pub fn f_matrix(x: &[f64; 8]) -> DMatrix<f64> {
        let mut f = DMatrix::zeros(8, 8);
        su3().structure_constants().for_each_oriented(|j, k, l, v| {
            f[(j, l)] += v * x[k];
        });
        f
    }

    #[derive(Debug, Clone)]
    pub struct FamilyState {
        pub state: Reconstructed,
        /// False when some `λ_k = 0`; then `x = 0` is sufficient for laziness
        /// but no longer necessary (only rows with `λ_j ≠ 0` constrain `x`).
        pub equivalence_guaranteed: bool,
    }

    pub fn state(x: &[f64; 8], y: &[f64; 8], lambda: &[f64; 8]) -> FamilyState {
        let basis = su3();
        let bloch = BlochForm {
            x: DVector::from_row_slice(x),
            y: DVector::from_row_slice(y),
            t: DMatrix::from_diagonal(&DVector::from_row_slice(lambda)),
        };
        let state = reconstruct(&bloch, basis, basis).expect("su(3) shapes are fixed");
        FamilyState {
            state,
            equivalence_guaranteed: lambda.iter().all(|&l| l != 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator as dense_commutator, identity, kron, C64};
    use nalgebra::DVector;

    fn ket(v: &[f64]) -> DVector<C64> {
        DVector::from_iterator(v.len(), v.iter().map(|&r| C64::new(r, 0.0)))
    }

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(2, 2, &ket(&[s, 0.0, 0.0, s])).unwrap()
    }

    /// ½|0⟩⟨0|⊗|+⟩⟨+| + ½|+⟩⟨+|⊗|0⟩⟨0|
    fn non_lazy_mixture() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let zero = ket(&[1.0, 0.0]);
        let plus = ket(&[s, s]);
        let p0 = &zero * zero.adjoint();
        let pp = &plus * plus.adjoint();
        let m = (kron(&p0, &pp) + kron(&pp, &p0)).unscale(2.0);
        DensityMatrix::new(2, 2, m).unwrap()
    }

    fn dense_residual(rho: &DensityMatrix, side: Side) -> f64 {
        let local = rho.reduced_matrix(side);
        let op = match side {
            Side::A => kron(&local, &identity(rho.dim_b())),
            Side::B => kron(&identity(rho.dim_a()), &local),
        };
        frobenius(&dense_commutator(rho.matrix(), &op))
    }

    #[test]
    fn product_and_bell_commute() {
        let mut rng = crate::random::seeded(1);
        let ra = crate::random::ginibre_density(3, &mut rng);
        let rb = crate::random::ginibre_density(2, &mut rng);
        let prod = DensityMatrix::product(&ra, &rb).unwrap();
        for side in [Side::A, Side::B] {
            assert!(commutator_residual(&prod, side) < 1e-14);
            assert!(commutator_residual(&bell(), side) < 1e-14);
        }
    }

    #[test]
    fn mixture_is_not_lazy() {
        let rho = non_lazy_mixture();
        let oracle = dense_residual(&rho, Side::A);
        assert!(oracle > 0.05);
        assert!((commutator_residual(&rho, Side::A) - oracle).abs() < 1e-14);
        let r = is_lazy(&rho, Side::A, DEFAULT_TOLERANCE).unwrap();
        assert!(!r.is_lazy && !r.criterion_is_lazy);
    }

    #[test]
    fn structured_commutator_matches_dense() {
        for seed in 0..5 {
            let rho = DensityMatrix::random(3, 2, seed);
            for side in [Side::A, Side::B] {
                assert!((commutator_residual(&rho, side) - dense_residual(&rho, side)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn criterion_vanishes_without_local_vector() {
        let basis = build_su_basis(3).unwrap();
        let mut bloch = BlochForm::zeros(3, 3);
        bloch.t = DMatrix::from_fn(8, 8, |i, j| (i as f64 - j as f64) * 0.01);
        assert_eq!(criterion_matrix(&bloch, &basis).amax(), 0.0);
    }

    #[test]
    fn criterion_vanishes_on_products() {
        let (ba, bb) = (build_su_basis(3).unwrap(), build_su_basis(2).unwrap());
        let mut rng = crate::random::seeded(2);
        let ra = crate::random::ginibre_density(3, &mut rng);
        let rb = crate::random::ginibre_density(2, &mut rng);
        let bloch = decompose(&DensityMatrix::product(&ra, &rb).unwrap(), &ba, &bb).unwrap();
        assert!(criterion_matrix(&bloch, &ba).amax() < 1e-14);
        assert!(criterion_matrix_b(&bloch, &bb).amax() < 1e-14);
    }

    #[test]
    fn norm_identity_random_qubits() {
        let basis = build_su_basis(2).unwrap();
        for seed in 0..20 {
            let rho = DensityMatrix::random(2, 2, seed);
            let bloch = decompose(&rho, &basis, &basis).unwrap();
            let lhs = dense_residual(&rho, Side::A);
            let rhs = norm_factor(Side::A, 2, 2) * criterion_matrix(&bloch, &basis).norm();
            assert!((lhs - rhs).abs() <= 1e-11 * lhs, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn side_b_norm_identity() {
        let (ba, bb) = (build_su_basis(2).unwrap(), build_su_basis(3).unwrap());
        for seed in 0..20 {
            let rho = DensityMatrix::random(2, 3, seed);
            let bloch = decompose(&rho, &ba, &bb).unwrap();
            let lhs = dense_residual(&rho, Side::B);
            let rhs = norm_factor(Side::B, 2, 3) * criterion_matrix_b(&bloch, &bb).norm();
            assert!((lhs - rhs).abs() <= 1e-11 * lhs, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn bell_report() {
        let r = is_lazy(&bell(), Side::A, 1e-10).unwrap();
        assert!(r.is_lazy && r.criterion_is_lazy);
        assert!(r.commutator_residual < 1e-13 && r.criterion_residual < 1e-13);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(matches!(
            is_lazy(&bell(), Side::A, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(is_lazy(&bell(), Side::A, f64::NAN).is_err());
    }

    #[test]
    fn f_matrix_spot_entries() {
        assert_eq!(diagonal_family::f_matrix(&[0.0; 8]).amax(), 0.0);
        let mut x = [0.0; 8];
        x[5] = 1.0;
        assert!((diagonal_family::f_matrix(&x)[(0, 1)] - 0.5).abs() < 1e-15);
        let mut x = [0.0; 8];
        x[7] = 1.0;
        assert!((diagonal_family::f_matrix(&x)[(1, 4)] + 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_family_cases() {
        let zero = diagonal_family::state(&[0.0; 8], &[0.0; 8], &[0.0; 8]);
        let mm = identity(9).unscale(9.0);
        assert!(crate::linalg::max_abs(&(&zero.state.matrix - mm)) < 1e-15);
        assert!(!zero.equivalence_guaranteed);

        let lazy = diagonal_family::state(&[0.0; 8], &[0.0; 8], &[0.1; 8]);
        assert!(lazy.equivalence_guaranteed && lazy.state.is_physical());
        let rho = lazy.state.into_state().unwrap();
        assert!(is_lazy(&rho, Side::A, 1e-10).unwrap().is_lazy);
        assert!(is_lazy(&rho, Side::B, 1e-10).unwrap().is_lazy);

        let mut x = [0.0; 8];
        x[0] = 0.2;
        let busy = diagonal_family::state(&x, &[0.0; 8], &[0.1; 8]);
        let rho = busy.state.into_state().unwrap();
        assert!(!is_lazy(&rho, Side::A, 1e-10).unwrap().is_lazy);
    }

    #[test]
    fn diagonal_family_large_lambda_flagged() {
        // Oracle: eigenvalue scan over λ; the flag flips once λ exceeds the
        // positivity boundary of the family.
        let mut seen_unphysical = false;
        for step in 1..=20 {
            let l = step as f64 * 0.1;
            let s = diagonal_family::state(&[0.0; 8], &[0.0; 8], &[l; 8]);
            let eig_min = crate::linalg::hermitian_eigenvalues(&s.state.matrix).min();
            assert_eq!(s.state.is_physical(), eig_min >= -1e-10);
            seen_unphysical |= !s.state.is_physical();
        }
        assert!(seen_unphysical);
        assert!(!diagonal_family::state(&[0.0; 8], &[0.0; 8], &[2.0; 8])
            .state
            .is_physical());
    }
}
