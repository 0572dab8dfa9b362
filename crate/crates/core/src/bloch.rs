//! Bipartite density matrices and their generator expansion
//!
//! ```text
//! ρ = (I⊗I + Σ x_i σ_i⊗I + Σ y_j I⊗τ_j + Σ T_ij σ_i⊗τ_j) / (n_A n_B)
//! ```
//!
//! Subsystem A is the outer Kronecker factor throughout.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, hermiticity_deviation, kron, partial_trace_a, partial_trace_b, trace, CMatrix, C64,
};
use crate::random;
use crate::su_algebra::SuBasis;

pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues above `-POSITIVITY_TOLERANCE` count as nonnegative.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

/// Which subsystem a reduced state or laziness test refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => f.write_str("A"),
            Side::B => f.write_str("B"),
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::InvalidParameter(format!("unknown side {other:?}"))),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator on `H_A ⊗ H_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    data: CMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix. Errors name the violated invariant.
    pub fn new(dim_a: usize, dim_b: usize, data: CMatrix) -> Result<Self> {
        let rho = Self::from_raw(dim_a, dim_b, data)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Shape-checked but otherwise unvalidated wrapper.
    pub(crate) fn from_raw(dim_a: usize, dim_b: usize, data: CMatrix) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch(
                "subsystem dimensions must be positive".into(),
            ));
        }
        let n = dim_a * dim_b;
        if data.nrows() != n || data.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {n}x{n} for dims ({dim_a}, {dim_b})",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(DensityMatrix { dim_a, dim_b, data })
    }

    pub fn validate(&self) -> Result<()> {
        let (row, col, deviation) = hermiticity_deviation(&self.data);
        if deviation > HERMITICITY_TOLERANCE {
            return Err(Error::NotHermitian { row, col, deviation });
        }
        let deviation = (trace(&self.data) - C64::new(1.0, 0.0)).norm();
        if deviation > TRACE_TOLERANCE {
            return Err(Error::TraceDeviation { deviation });
        }
        let min_eigenvalue = self.min_eigenvalue();
        if min_eigenvalue < -POSITIVITY_TOLERANCE {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    /// `ρ_A ⊗ ρ_B`.
    pub fn product(rho_a: &CMatrix, rho_b: &CMatrix) -> Result<Self> {
        Self::new(rho_a.nrows(), rho_b.nrows(), kron(rho_a, rho_b))
    }

    /// `|ψ⟩⟨ψ|` for a normalised vector.
    pub fn pure(dim_a: usize, dim_b: usize, psi: &DVector<C64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let psi = psi.unscale(norm);
        Self::new(dim_a, dim_b, &psi * psi.adjoint())
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        let n = dim_a * dim_b;
        let data = CMatrix::identity(n, n).unscale(n as f64);
        DensityMatrix { dim_a, dim_b, data }
    }

    /// Seeded Ginibre state `G G† / tr(G G†)`.
    pub fn random(dim_a: usize, dim_b: usize, seed: u64) -> Self {
        let mut rng = random::seeded(seed);
        Self::random_with(dim_a, dim_b, &mut rng)
    }

    pub fn random_with<R: rand::Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> Self {
        let data = random::ginibre_density(dim_a * dim_b, rng);
        DensityMatrix { dim_a, dim_b, data }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigenvalues(&self.data)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().min()
    }

    /// Partial trace over the complement of `side`, as a single-party state
    /// (the traced-out factor has dimension 1).
    pub fn reduced(&self, side: Side) -> DensityMatrix {
        let data = self.reduced_matrix(side);
        let d = data.nrows();
        DensityMatrix {
            dim_a: d,
            dim_b: 1,
            data,
        }
    }

    /// `tr_B ρ` (side A) or `tr_A ρ` (side B) as a bare matrix.
    pub fn reduced_matrix(&self, side: Side) -> CMatrix {
        match side {
            Side::A => partial_trace_b(&self.data, self.dim_a, self.dim_b),
            Side::B => partial_trace_a(&self.data, self.dim_a, self.dim_b),
        }
    }

    /// `(U ⊗ V) ρ (U ⊗ V)†`.
    pub fn local_unitary(&self, u: &CMatrix, v: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim_a || v.nrows() != self.dim_b {
            return Err(Error::DimensionMismatch("local unitary sizes".into()));
        }
        let w = kron(u, v);
        let mut data = &w * &self.data * w.adjoint();
        random::symmetrize(&mut data);
        Ok(DensityMatrix {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            data,
        })
    }
}

/// Local Bloch vectors `x`, `y` and correlation matrix `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochForm {
    pub x: DVector<f64>,
    pub y: DVector<f64>,
    pub t: DMatrix<f64>,
}

impl BlochForm {
    pub fn zeros(dim_a: usize, dim_b: usize) -> Self {
        let (ga, gb) = (dim_a * dim_a - 1, dim_b * dim_b - 1);
        BlochForm {
            x: DVector::zeros(ga),
            y: DVector::zeros(gb),
            t: DMatrix::zeros(ga, gb),
        }
    }

    fn check_shapes(&self, basis_a: &SuBasis, basis_b: &SuBasis) -> Result<()> {
        let (ga, gb) = (basis_a.len(), basis_b.len());
        if self.x.len() != ga || self.y.len() != gb || self.t.shape() != (ga, gb) {
            return Err(Error::DimensionMismatch(format!(
                "Bloch form shapes x:{} y:{} T:{:?} do not match generator counts ({ga}, {gb})",
                self.x.len(),
                self.y.len(),
                self.t.shape()
            )));
        }
        Ok(())
    }
}

/// Serialised shape of a Bloch form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochJson {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<f64>>,
}

impl From<&BlochForm> for BlochJson {
    fn from(b: &BlochForm) -> Self {
        BlochJson {
            x: b.x.iter().copied().collect(),
            y: b.y.iter().copied().collect(),
            t: b.t.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }
}

fn check_bases(rho: &DensityMatrix, basis_a: &SuBasis, basis_b: &SuBasis) -> Result<()> {
    if basis_a.dim() != rho.dim_a() || basis_b.dim() != rho.dim_b() {
        return Err(Error::DimensionMismatch(format!(
            "state dims ({}, {}) vs basis dims ({}, {})",
            rho.dim_a(),
            rho.dim_b(),
            basis_a.dim(),
            basis_b.dim()
        )));
    }
    Ok(())
}

/// Coefficients of the generator expansion:
/// `x_i = (n_A/2) tr(ρ σ_i⊗I)`, `y_j = (n_B/2) tr(ρ I⊗τ_j)`,
/// `T_ij = (n_A n_B/4) tr(ρ σ_i⊗τ_j)`.
pub fn decompose(rho: &DensityMatrix, basis_a: &SuBasis, basis_b: &SuBasis) -> Result<BlochForm> {
    check_bases(rho, basis_a, basis_b)?;
    let (na, nb) = (rho.dim_a(), rho.dim_b());
    let m = rho.matrix();
    let rho_a = rho.reduced_matrix(Side::A);
    let rho_b = rho.reduced_matrix(Side::B);

    let x = DVector::from_fn(basis_a.len(), |i, _| {
        let tr: C64 = basis_a
            .sparse(i)
            .iter()
            .map(|&(a, ap, s)| rho_a[(ap, a)] * s)
            .sum();
        tr.re * na as f64 / 2.0
    });
    let y = DVector::from_fn(basis_b.len(), |j, _| {
        let tr: C64 = basis_b
            .sparse(j)
            .iter()
            .map(|&(b, bp, s)| rho_b[(bp, b)] * s)
            .sum();
        tr.re * nb as f64 / 2.0
    });
    let scale = (na * nb) as f64 / 4.0;
    let t = DMatrix::from_fn(basis_a.len(), basis_b.len(), |i, j| {
        let mut tr = C64::new(0.0, 0.0);
        // tr(ρ (σ⊗τ)) = Σ ρ[(a'b'),(ab)] σ[a,a'] τ[b,b']
        for &(a, ap, s) in basis_a.sparse(i) {
            for &(b, bp, t) in basis_b.sparse(j) {
                tr += m[(ap * nb + bp, a * nb + b)] * s * t;
            }
        }
        tr.re * scale
    });
    Ok(BlochForm { x, y, t })
}

/// Hermitian unit-trace operator assembled from a Bloch form. Positivity is
/// reported, not enforced.
#[derive(Debug, Clone)]
pub struct Reconstructed {
    pub dim_a: usize,
    pub dim_b: usize,
    pub matrix: CMatrix,
    pub min_eigenvalue: f64,
}

impl Reconstructed {
    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue >= -POSITIVITY_TOLERANCE
    }

    /// Validated state, or `NotPositive` for non-physical parameters.
    pub fn into_state(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.dim_a, self.dim_b, self.matrix)
    }
}

pub fn reconstruct(bloch: &BlochForm, basis_a: &SuBasis, basis_b: &SuBasis) -> Result<Reconstructed> {
    bloch.check_shapes(basis_a, basis_b)?;
    let (na, nb) = (basis_a.dim(), basis_b.dim());
    let n = na * nb;
    let mut m = CMatrix::identity(n, n);
    for (i, &xi) in bloch.x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        for &(a, ap, s) in basis_a.sparse(i) {
            for b in 0..nb {
                m[(a * nb + b, ap * nb + b)] += s * xi;
            }
        }
    }
    for (j, &yj) in bloch.y.iter().enumerate() {
        if yj == 0.0 {
            continue;
        }
        for &(b, bp, t) in basis_b.sparse(j) {
            for a in 0..na {
                m[(a * nb + b, a * nb + bp)] += t * yj;
            }
        }
    }
    for i in 0..basis_a.len() {
        for j in 0..basis_b.len() {
            let tij = bloch.t[(i, j)];
            if tij == 0.0 {
                continue;
            }
            for &(a, ap, s) in basis_a.sparse(i) {
                for &(b, bp, t) in basis_b.sparse(j) {
                    m[(a * nb + b, ap * nb + bp)] += s * t * tij;
                }
            }
        }
    }
    let mut matrix = m.unscale(n as f64);
    random::symmetrize(&mut matrix);
    let min_eigenvalue = hermitian_eigenvalues(&matrix).min();
    Ok(Reconstructed {
        dim_a: na,
        dim_b: nb,
        matrix,
        min_eigenvalue,
    })
}

/// Reduced state on `side`; wraps [`DensityMatrix::reduced`].
pub fn reduced_state(rho: &DensityMatrix, side: Side) -> DensityMatrix {
    rho.reduced(side)
}
