//! Dense complex matrix helpers shared by the state and dynamics code.
//!
//! Bipartite indices follow the row-major Kronecker convention: the composite
//! index of `(a, b)` is `a * dim_b + b`, so subsystem A is the outer factor.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().copied().sum()
}

/// `tr(a b)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest `|m_ij - conj(m_ji)|` and where it occurs.
pub fn hermiticity_deviation(m: &CMatrix) -> (usize, usize, f64) {
    let mut worst = (0, 0, 0.0);
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst.2 {
                worst = (i, j, d);
            }
        }
    }
    worst
}

fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending.
///
/// Only the lower triangle is read. Backed by faer: nalgebra's symmetric QR
/// mis-deflates block-sparse, rank-deficient inputs such as truncated
/// number-basis states.
pub fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let eig = to_faer(m)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("Hermitian eigensolver converges");
    let s = eig.S().column_vector();
    let u = eig.U();
    let values = DVector::from_fn(m.nrows(), |k, _| s[k].re);
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| u[(i, j)]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> DVector<f64> {
    let values = to_faer(m)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .expect("Hermitian eigensolver converges");
    DVector::from_vec(values)
}

/// Apply a real function to a Hermitian matrix through its spectrum.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let diag = CMatrix::from_diagonal(&values.map(|v| C64::new(f(v), 0.0)));
    &vectors * diag * vectors.adjoint()
}

/// Partial trace over B, leaving a `dim_a x dim_a` operator.
pub fn partial_trace_b(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_a, dim_a, |a, ap| {
        (0..dim_b).map(|b| m[(a * dim_b + b, ap * dim_b + b)]).sum()
    })
}

/// Partial trace over A, leaving a `dim_b x dim_b` operator.
pub fn partial_trace_a(m: &CMatrix, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_b, dim_b, |b, bp| {
        (0..dim_a).map(|a| m[(a * dim_b + b, a * dim_b + bp)]).sum()
    })
}

/// `m (op_a ⊗ I)` without materialising the Kronecker product.
pub fn mul_right_local_a(m: &CMatrix, op_a: &CMatrix, dim_b: usize) -> CMatrix {
    let dim_a = op_a.nrows();
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for row in 0..n {
        for ap in 0..dim_a {
            for bp in 0..dim_b {
                let mut acc = ZERO;
                for app in 0..dim_a {
                    acc += m[(row, app * dim_b + bp)] * op_a[(app, ap)];
                }
                out[(row, ap * dim_b + bp)] = acc;
            }
        }
    }
    out
}

/// `(op_a ⊗ I) m` without materialising the Kronecker product.
pub fn mul_left_local_a(op_a: &CMatrix, m: &CMatrix, dim_b: usize) -> CMatrix {
    let dim_a = op_a.nrows();
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for col in 0..n {
        for a in 0..dim_a {
            for b in 0..dim_b {
                let mut acc = ZERO;
                for app in 0..dim_a {
                    acc += op_a[(a, app)] * m[(app * dim_b + b, col)];
                }
                out[(a * dim_b + b, col)] = acc;
            }
        }
    }
    out
}

/// `m (I ⊗ op_b)`.
pub fn mul_right_local_b(m: &CMatrix, op_b: &CMatrix, dim_a: usize) -> CMatrix {
    let dim_b = op_b.nrows();
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for row in 0..n {
        for ap in 0..dim_a {
            for bp in 0..dim_b {
                let mut acc = ZERO;
                for bpp in 0..dim_b {
                    acc += m[(row, ap * dim_b + bpp)] * op_b[(bpp, bp)];
                }
                out[(row, ap * dim_b + bp)] = acc;
            }
        }
    }
    out
}

/// `(I ⊗ op_b) m`.
pub fn mul_left_local_b(op_b: &CMatrix, m: &CMatrix, dim_a: usize) -> CMatrix {
    let dim_b = op_b.nrows();
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, n);
    for col in 0..n {
        for a in 0..dim_a {
            for b in 0..dim_b {
                let mut acc = ZERO;
                for bpp in 0..dim_b {
                    acc += op_b[(b, bpp)] * m[(a * dim_b + bpp, col)];
                }
                out[(a * dim_b + b, col)] = acc;
            }
        }
    }
    out
}
