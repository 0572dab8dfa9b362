//! # lazystate
//!
//! Decide whether a bipartite quantum state is *lazy*: whether it commutes with
//! one of its reduced states, `[ρ_AB, ρ_A ⊗ I] = 0`. Lazy states are exactly
//! those whose subsystem entropy is stationary under every coupling Hamiltonian.
//!
//! - [`su_algebra`]: generalized Gell-Mann basis of su(n) and structure constants `f_ijk`.
//! - [`bloch`]: density matrices, Bloch decomposition `(x, y, T)`, partial traces.
//! - [`laziness`]: direct commutator test and the structure-constant criterion
//!   `Σ_{ik} T_ij x_k f_ikl = 0`, tied together by an exact norm identity.
//! - [`dynamics`]: entropy rate `dS_A/dt` under random GUE couplings.
//! - [`gaussian`]: two-mode Gaussian states in standard form; lazy iff product.
//! - [`io`] and [`cli`]: JSON file formats, example states and the command line.
//!
//! ```
//! use lazystate::{bloch::{DensityMatrix, Side}, laziness};
//!
//! let rho = DensityMatrix::maximally_mixed(2, 3);
//! let report = laziness::is_lazy(&rho, Side::A, laziness::DEFAULT_TOLERANCE).unwrap();
//! assert!(report.is_lazy);
//! ```

pub mod bloch;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod io;
pub mod laziness;
pub mod linalg;
pub mod random;
pub mod su_algebra;

pub use bloch::{BlochForm, DensityMatrix, Side};
pub use error::{Error, Result};
pub use gaussian::GaussianStandardForm;
pub use laziness::LazinessReport;
pub use su_algebra::SuBasis;
