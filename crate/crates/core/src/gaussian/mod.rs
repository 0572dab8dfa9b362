//! Two-mode Gaussian states in standard form.
//!
//! Quadratures are ordered `(λ₁ᴵ, λ₁ᴿ, λ₂ᴵ, λ₂ᴿ)` and the vacuum covariance is
//! the identity, so the standard form
//!
//! ```text
//!     | n  0  c  0  |
//! M = | 0  n  0  c' |     n, m >= 1
//!     | c  0  m  0  |
//!     | 0  c' 0  m  |
//! ```
//!
//! is physical iff its smaller symplectic eigenvalue is at least 1. The state is
//! lazy iff `c = c' = 0`, i.e. iff it is a product state.
//!
//! The 6×6 matrices `A1`, `A2` arise when the commutator `[ρ, ρ_A]` is sandwiched
//! between coherent states; this module checks their determinant
//! `[c² - 2(1+m)(2+n)][c'² - 2(1+m)(2+n)]` and the difference of quadratic forms
//! `Bᵗ A1⁻¹ B - Bᵗ A2⁻¹ B` against closed forms.

pub mod fock;

use nalgebra::{Complex, Matrix2, Matrix4, Matrix6, Vector4, Vector6};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::random;

/// Slack on `ν₋ >= 1` and on `n, m >= 1`.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;

/// Real symmetric covariance matrix with optional displacement.
///
/// The displacement does not enter any laziness test.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    pub v: Matrix4<f64>,
    pub d: Vector4<f64>,
}

impl CovarianceState {
    pub fn new(v: Matrix4<f64>, d: Vector4<f64>) -> Result<Self> {
        let asym = (v - v.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "covariance matrix is not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(CovarianceState { v, d })
    }

    fn blocks(&self) -> (f64, f64, f64) {
        let v = &self.v;
        let det_a = v[(0, 0)] * v[(1, 1)] - v[(0, 1)] * v[(1, 0)];
        let det_b = v[(2, 2)] * v[(3, 3)] - v[(2, 3)] * v[(3, 2)];
        let det_c = v[(0, 2)] * v[(1, 3)] - v[(0, 3)] * v[(1, 2)];
        (det_a, det_b, det_c)
    }

    /// Symplectic eigenvalues from the Hermitian matrix `i V^½ Ω V^½`, whose
    /// spectrum is `±ν₊, ±ν₋`. Unlike the quadratic formula in `Δ` this keeps
    /// full precision when `ν₊ ≈ ν₋`.
    pub fn symplectic_spectrum(&self) -> Result<SymplecticSpectrum> {
        let (det_a, det_b, det_c) = self.blocks();
        let delta = det_a + det_b + 2.0 * det_c;
        let determinant = self.v.determinant();
        let v = to_complex(&self.v);
        let (values, _) = linalg::hermitian_eigen(&v);
        if values[0] <= 0.0 {
            return Err(Error::UnphysicalGaussian(format!(
                "covariance matrix is not positive definite (eigenvalue {:e})",
                values[0]
            )));
        }
        let root = linalg::hermitian_function(&v, f64::sqrt);
        let omega = to_complex(&Matrix4::new(
            0.0, 1.0, 0.0, 0.0, //
            -1.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, -1.0, 0.0,
        ));
        let k = (&root * omega * &root) * linalg::I;
        let nu = linalg::hermitian_eigenvalues(&k);
        let mut abs: Vec<f64> = nu.iter().map(|x| x.abs()).collect();
        abs.sort_by(f64::total_cmp);
        Ok(SymplecticSpectrum {
            nu_plus: 0.5 * (abs[2] + abs[3]),
            nu_minus: 0.5 * (abs[0] + abs[1]),
            delta,
            determinant,
        })
    }

    /// `χ(λ₁, λ₂) = exp(-½ ξᵗVξ - i dᵗξ)`.
    pub fn chi(&self, lambda1: C64, lambda2: C64) -> C64 {
        let xi = Vector4::new(lambda1.im, lambda1.re, lambda2.im, lambda2.re);
        let quad = (xi.transpose() * self.v * xi)[(0, 0)];
        Complex::new(-0.5 * quad, -self.d.dot(&xi)).exp()
    }
}

fn to_complex(m: &Matrix4<f64>) -> CMatrix {
    CMatrix::from_fn(4, 4, |i, j| C64::new(m[(i, j)], 0.0))
}

/// Standard-form parameters `(n, m, c, c')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GaussianStandardForm {
    pub n: f64,
    pub m: f64,
    pub c: f64,
    pub c_prime: f64,
}

impl GaussianStandardForm {
    pub fn new(n: f64, m: f64, c: f64, c_prime: f64) -> Self {
        GaussianStandardForm { n, m, c, c_prime }
    }

    pub fn covariance(&self) -> Matrix4<f64> {
        let GaussianStandardForm { n, m, c, c_prime: cp } = *self;
        Matrix4::new(
            n, 0.0, c, 0.0, //
            0.0, n, 0.0, cp, //
            c, 0.0, m, 0.0, //
            0.0, cp, 0.0, m,
        )
    }

    pub fn to_covariance_state(&self) -> CovarianceState {
        CovarianceState {
            v: self.covariance(),
            d: Vector4::zeros(),
        }
    }

    /// `χ(λ₁, λ₂) = exp(-½ ξᵗMξ)` with `ξ = (λ₁ᴵ, λ₁ᴿ, λ₂ᴵ, λ₂ᴿ)`.
    pub fn chi(&self, lambda1: C64, lambda2: C64) -> C64 {
        self.to_covariance_state().chi(lambda1, lambda2)
    }

    /// `2(1+m)(2+n)`, the shift appearing in every closed form below.
    fn kappa(&self) -> f64 {
        2.0 * (1.0 + self.m) * (2.0 + self.n)
    }
}

/// `χ` of a standard-form state; see [`GaussianStandardForm::chi`].
pub fn chi_eval(form: &GaussianStandardForm, lambda1: C64, lambda2: C64) -> C64 {
    form.chi(lambda1, lambda2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SymplecticSpectrum {
    pub nu_plus: f64,
    pub nu_minus: f64,
    /// `det A + det B + 2 det C`.
    pub delta: f64,
    pub determinant: f64,
}

impl SymplecticSpectrum {
    /// `disc` is `Δ² - 4 det`, passed separately so callers can supply a
    /// cancellation-free expression.
    fn from_invariants(delta: f64, determinant: f64, disc: f64) -> Result<Self> {
        let mut disc = disc;
        if disc < 0.0 {
            if disc < -PHYSICALITY_TOLERANCE * delta.abs().max(1.0).powi(2) {
                return Err(Error::UnphysicalGaussian(format!(
                    "malformed covariance: Δ² - 4 det = {disc:e} < 0"
                )));
            }
            disc = 0.0;
        }
        let root = disc.sqrt();
        let plus = 0.5 * (delta + root);
        // ν₊² ν₋² = det
        let minus = if plus > 0.0 { determinant / plus } else { 0.0 };
        Ok(SymplecticSpectrum {
            nu_plus: plus.max(0.0).sqrt(),
            nu_minus: minus.max(0.0).sqrt(),
            delta,
            determinant,
        })
    }

    pub fn is_physical(&self) -> bool {
        self.nu_minus >= 1.0 - PHYSICALITY_TOLERANCE
    }
}

/// Symplectic eigenvalues of `M`: `ν±² = (Δ ± √(Δ² - 4 det M)) / 2` with
/// `Δ = n² + m² + 2cc'` and `det M = (nm - c²)(nm - c'²)`.
///
/// The discriminant is evaluated as `(n² - m²)² + 4(nc + mc')(mc + nc')`,
/// which vanishes exactly for symmetric pure states.
pub fn check_uncertainty(form: &GaussianStandardForm) -> Result<SymplecticSpectrum> {
    let GaussianStandardForm { n, m, c, c_prime: cp } = *form;
    SymplecticSpectrum::from_invariants(
        n * n + m * m + 2.0 * c * cp,
        (n * m - c * c) * (n * m - cp * cp),
        (n * n - m * m).powi(2) + 4.0 * (n * c + m * cp) * (m * c + n * cp),
    )
}

/// Physical iff `n, m >= 1` and `ν₋ >= 1` (both with [`PHYSICALITY_TOLERANCE`]).
pub fn ensure_physical(form: &GaussianStandardForm) -> Result<SymplecticSpectrum> {
    if form.n < 1.0 - PHYSICALITY_TOLERANCE || form.m < 1.0 - PHYSICALITY_TOLERANCE {
        return Err(Error::UnphysicalGaussian(format!(
            "standard form needs n, m >= 1 (n = {}, m = {})",
            form.n, form.m
        )));
    }
    let spectrum = check_uncertainty(form)?;
    if !spectrum.is_physical() {
        return Err(Error::UnphysicalGaussian(format!(
            "smaller symplectic eigenvalue {} < 1",
            spectrum.nu_minus
        )));
    }
    Ok(spectrum)
}

/// `det(X)^¼ X^{-½}`: the unit-determinant (hence symplectic) map sending a
/// positive 2×2 block `X` to `√det X · I`. Uses `√X = (X + √det X · I) / √(tr X + 2√det X)`.
fn local_normaliser(x: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let root_det = x.determinant().sqrt();
    let root = (x + Matrix2::identity() * root_det) / (x.trace() + 2.0 * root_det).sqrt();
    root.try_inverse()
        .map(|inv| inv * root_det.sqrt())
        .ok_or_else(|| Error::Singular("local covariance block is singular".into()))
}

/// `+1` for a rotation, `-1` for a reflection.
fn orientation(q: &Matrix2<f64>) -> f64 {
    q.determinant().signum()
}

/// Reduce a covariance matrix `[[A, C], [Cᵗ, B]]` to `(n, m, c, c')`.
///
/// Local symplectic maps send `A → n I` and `B → m I`; the singular values of
/// the transformed `C`, with proper rotations on both sides, are `c` and `|c'|`,
/// and `c'` carries the sign of `det C`.
pub fn standard_form_from_cov(cov: &CovarianceState) -> Result<GaussianStandardForm> {
    let (det_a, det_b, _) = cov.blocks();
    if det_a < 1.0 - PHYSICALITY_TOLERANCE || det_b < 1.0 - PHYSICALITY_TOLERANCE {
        return Err(Error::UnphysicalGaussian(format!(
            "local determinants below vacuum: det A = {det_a}, det B = {det_b}"
        )));
    }
    let spectrum = cov.symplectic_spectrum()?;
    if !spectrum.is_physical() {
        return Err(Error::UnphysicalGaussian(format!(
            "smaller symplectic eigenvalue {} < 1",
            spectrum.nu_minus
        )));
    }
    let a: Matrix2<f64> = cov.v.fixed_view::<2, 2>(0, 0).into();
    let b: Matrix2<f64> = cov.v.fixed_view::<2, 2>(2, 2).into();
    let c: Matrix2<f64> = cov.v.fixed_view::<2, 2>(0, 2).into();
    let reduced = local_normaliser(&a)? * c * local_normaliser(&b)?.transpose();
    let svd = reduced.svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => {
            return Err(Error::NoStandardForm(
                "singular value decomposition failed".into(),
            ))
        }
    };
    let (s0, s1) = (svd.singular_values[0], svd.singular_values[1]);
    let (big, small) = if s0 >= s1 { (s0, s1) } else { (s1, s0) };
    Ok(GaussianStandardForm {
        n: det_a.sqrt(),
        m: det_b.sqrt(),
        c: big,
        c_prime: orientation(&u) * orientation(&v_t) * small,
    })
}

/// The two 6×6 complex matrices `A1`, `A2 = conj(A1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AMatrixPair {
    pub a1: Matrix6<C64>,
    pub a2: Matrix6<C64>,
}

fn a_matrix(form: &GaussianStandardForm, sign: f64) -> Matrix6<C64> {
    let GaussianStandardForm { n, m, c, c_prime: cp } = *form;
    let r = |x: f64| C64::new(x, 0.0);
    let i2 = C64::new(0.0, 2.0 * sign);
    let z = r(0.0);
    let one = r(1.0);
    Matrix6::from_row_slice(&[
        r(2.0 * n + 1.0),
        z,
        r(c),
        z,
        one,
        i2, //
        z,
        r(2.0 * n + 1.0),
        z,
        r(cp),
        -i2,
        one, //
        r(c),
        z,
        r(m + 1.0),
        z,
        z,
        z, //
        z,
        r(cp),
        z,
        r(m + 1.0),
        z,
        z, //
        one,
        -i2,
        z,
        z,
        one,
        z, //
        i2,
        one,
        z,
        z,
        z,
        one,
    ])
}

pub fn build_a_matrices(form: &GaussianStandardForm) -> AMatrixPair {
    AMatrixPair {
        a1: a_matrix(form, 1.0),
        a2: a_matrix(form, -1.0),
    }
}

/// `[c² - 2(1+m)(2+n)] · [c'² - 2(1+m)(2+n)]`.
pub fn det_closed_form(form: &GaussianStandardForm) -> f64 {
    let k = form.kappa();
    (form.c * form.c - k) * (form.c_prime * form.c_prime - k)
}

/// `B = (uᴵ, uᴿ, vᴵ, vᴿ, uᴵ, uᴿ)`.
pub fn coherent_vector(u: C64, v: C64) -> Vector6<f64> {
    Vector6::new(u.im, u.re, v.im, v.re, u.im, u.re)
}

/// Numeric `Bᵗ A1⁻¹ B - Bᵗ A2⁻¹ B` via LU solves.
pub fn quadratic_form_difference(form: &GaussianStandardForm, u: C64, v: C64) -> Result<C64> {
    if det_closed_form(form) == 0.0 {
        return Err(Error::Singular("A1 and A2 have zero determinant".into()));
    }
    let pair = build_a_matrices(form);
    let b = coherent_vector(u, v).map(|x| C64::new(x, 0.0));
    let solve = |a: &Matrix6<C64>| {
        a.lu()
            .solve(&b)
            .map(|x| b.dot(&x))
            .ok_or_else(|| Error::Singular("LU solve of A matrix failed".into()))
    };
    Ok(solve(&pair.a1)? - solve(&pair.a2)?)
}

/// Closed form `8ic'/(c'² - κ) uᴵvᴿ - 8ic/(c² - κ) uᴿvᴵ`, `κ = 2(1+m)(2+n)`.
pub fn quadratic_form_difference_closed(form: &GaussianStandardForm, u: C64, v: C64) -> C64 {
    let k = form.kappa();
    let first = 8.0 * form.c_prime / (form.c_prime * form.c_prime - k) * u.im * v.re;
    let second = 8.0 * form.c / (form.c * form.c - k) * u.re * v.im;
    C64::new(0.0, first - second)
}

/// Lazy iff `|c| < tol` and `|c'| < tol`; unphysical forms are rejected.
pub fn is_lazy_gaussian(form: &GaussianStandardForm, tol: f64) -> Result<bool> {
    ensure_physical(form)?;
    Ok(form.c.abs() < tol && form.c_prime.abs() < tol)
}

/// Random physical standard form: half the draws come from the squeezed-thermal
/// family (`n, m` thermal in `[1, 4]`, `r` in `[0, 0.8]`), half have independent
/// `(c, c')` rejection-sampled against `ν₋ >= 1`.
pub fn random_physical_form<R: Rng + ?Sized>(rng: &mut R) -> GaussianStandardForm {
    if rng.random_bool(0.5) {
        let st = fock::SqueezedThermal {
            a: rng.random_range(1.0..4.0),
            b: rng.random_range(1.0..4.0),
            r: rng.random_range(0.0..0.8),
        };
        return st.form();
    }
    let n: f64 = rng.random_range(1.0..4.0);
    let m: f64 = rng.random_range(1.0..4.0);
    let bound = (n * m).sqrt();
    loop {
        let form = GaussianStandardForm::new(
            n,
            m,
            rng.random_range(-bound..bound),
            rng.random_range(-bound..bound),
        );
        if ensure_physical(&form).is_ok() {
            return form;
        }
    }
}

/// Numbers reported for one standard form.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GaussianReport {
    pub standard_form: GaussianStandardForm,
    pub symplectic_eigenvalues: [f64; 2],
    pub is_lazy: bool,
    pub tolerance: f64,
    /// Max relative gap between the closed-form and numeric `det A1`, `det A2`.
    pub det_identity_residual: f64,
    /// Max gap between numeric and closed-form quadratic-form differences.
    #[serde(rename = "eq41Residual")]
    pub quadratic_form_residual: f64,
    /// Largest closed-form quadratic-form difference over the sampled points.
    pub quadratic_form_max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_cutoff: Option<usize>,
}

/// Relative determinant residual of both A matrices.
pub fn det_identity_residual(form: &GaussianStandardForm) -> f64 {
    let pair = build_a_matrices(form);
    let closed = det_closed_form(form);
    let scale = closed.abs().max(f64::MIN_POSITIVE);
    [pair.a1.determinant(), pair.a2.determinant()]
        .iter()
        .map(|d| (d - C64::new(closed, 0.0)).norm() / scale)
        .fold(0.0, f64::max)
}

/// Analyse a form: physicality, laziness, both proof identities on `samples`
/// seeded `(u, v)` points and, if requested, the Fock-space commutator.
pub fn analyse(
    form: &GaussianStandardForm,
    tol: f64,
    samples: usize,
    seed: u64,
    fock_cutoff: Option<usize>,
) -> Result<GaussianReport> {
    let spectrum = ensure_physical(form)?;
    let mut rng = random::seeded(seed);
    let mut quadratic_form_residual: f64 = 0.0;
    let mut quadratic_form_max: f64 = 0.0;
    for _ in 0..samples {
        let u = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let v = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let closed = quadratic_form_difference_closed(form, u, v);
        let numeric = quadratic_form_difference(form, u, v)?;
        quadratic_form_residual = quadratic_form_residual.max((numeric - closed).norm());
        quadratic_form_max = quadratic_form_max.max(closed.norm());
    }
    let fock_residual = match fock_cutoff {
        Some(cutoff) => {
            let rho = fock::fock_truncate(form, cutoff)?;
            Some(crate::laziness::commutator_residual(&rho, crate::bloch::Side::A))
        }
        None => None,
    };
    Ok(GaussianReport {
        standard_form: *form,
        symplectic_eigenvalues: [spectrum.nu_plus, spectrum.nu_minus],
        is_lazy: form.c.abs() < tol && form.c_prime.abs() < tol,
        tolerance: tol,
        det_identity_residual: det_identity_residual(form),
        quadratic_form_residual,
        quadratic_form_max,
        fock_residual,
        fock_cutoff,
    })
}
