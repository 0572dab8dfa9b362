//! Subsystem entropy rate under a global coupling Hamiltonian.
//!
//! At `t = 0`, `dρ_A/dt = -i tr_B [H, ρ]` and `dS_A/dt = -tr(dρ_A/dt · log₂ ρ_A)`.
//! A lazy state gives zero rate for every `H`. The analytic rate is cross-checked
//! against a central difference of `S_A` along exact evolution
//! `ρ(t) = e^{-iHt} ρ e^{iHt}` computed from the spectrum of `H`.

use nalgebra::{Complex, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::bloch::{DensityMatrix, Side};
use crate::error::{Error, Result};
use crate::laziness::{commutator_residual, DEFAULT_TOLERANCE};
use crate::linalg::{
    commutator, hermitian_eigen, hermitian_eigenvalues, hermitian_function, hermiticity_deviation,
    partial_trace_a, partial_trace_b, trace_of_product, CMatrix, C64,
};
use crate::random;

/// Reduced eigenvalues below this force the finite-difference path.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;
/// Central-difference step for the entropy curve.
pub const FD_STEP: f64 = 1e-5;

/// Hermitian coupling Hamiltonian on the joint space.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub hamiltonian: CMatrix,
    pub seed: u64,
}

impl Coupling {
    pub fn new(hamiltonian: CMatrix, seed: u64) -> Result<Self> {
        let (row, col, deviation) = hermiticity_deviation(&hamiltonian);
        if deviation > 1e-12 {
            return Err(Error::NotHermitian { row, col, deviation });
        }
        Ok(Coupling { hamiltonian, seed })
    }
}

/// GUE coupling for `dim_a * dim_b`, deterministic per `seed`.
pub fn random_coupling(dim_a: usize, dim_b: usize, seed: u64) -> Coupling {
    let mut rng = random::seeded(seed);
    Coupling {
        hamiltonian: random::gue(dim_a * dim_b, &mut rng),
        seed,
    }
}

/// Coupling for one audit trial, drawn from stream `trial` of `seed`.
pub fn trial_coupling(dim_a: usize, dim_b: usize, seed: u64, trial: u64) -> Coupling {
    let mut rng = random::seeded_stream(seed, trial);
    Coupling {
        hamiltonian: random::gue(dim_a * dim_b, &mut rng),
        seed,
    }
}

/// Von Neumann entropy in bits of a Hermitian unit-trace matrix.
pub fn entropy_of(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

pub fn entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(rho.matrix())
}

fn reduce(m: &CMatrix, dim_a: usize, dim_b: usize, side: Side) -> CMatrix {
    match side {
        Side::A => partial_trace_b(m, dim_a, dim_b),
        Side::B => partial_trace_a(m, dim_a, dim_b),
    }
}

fn check_coupling(rho: &DensityMatrix, h: &Coupling) -> Result<()> {
    if h.hamiltonian.nrows() != rho.dim() || h.hamiltonian.ncols() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "coupling is {}x{}, state is {}x{}",
            h.hamiltonian.nrows(),
            h.hamiltonian.ncols(),
            rho.dim(),
            rho.dim()
        )));
    }
    Ok(())
}

/// `dρ_side/dt` at `t = 0`.
pub fn reduced_derivative(rho: &DensityMatrix, h: &Coupling, side: Side) -> Result<CMatrix> {
    check_coupling(rho, h)?;
    let drho = commutator(&h.hamiltonian, rho.matrix()) * C64::new(0.0, -1.0);
    Ok(reduce(&drho, rho.dim_a(), rho.dim_b(), side))
}

/// Analytic `dS_side/dt` at `t = 0`.
///
/// Fails with [`Error::DegenerateSpectrum`] when the reduced state has an
/// eigenvalue below [`EIGENVALUE_FLOOR`].
pub fn entropy_rate(rho: &DensityMatrix, h: &Coupling, side: Side) -> Result<f64> {
    let reduced = rho.reduced_matrix(side);
    let min_eigenvalue = hermitian_eigenvalues(&reduced).min();
    if min_eigenvalue < EIGENVALUE_FLOOR {
        return Err(Error::DegenerateSpectrum {
            min_eigenvalue,
            floor: EIGENVALUE_FLOOR,
        });
    }
    let derivative = reduced_derivative(rho, h, side)?;
    let log = hermitian_function(&reduced, f64::log2);
    Ok(-trace_of_product(&derivative, &log).re)
}

/// Exact unitary evolution from the spectral decomposition of `H`.
#[derive(Debug, Clone)]
pub struct Evolution {
    energies: DVector<f64>,
    modes: CMatrix,
}

impl Evolution {
    pub fn new(h: &Coupling) -> Self {
        let (energies, modes) = hermitian_eigen(&h.hamiltonian);
        Evolution { energies, modes }
    }

    pub fn unitary(&self, t: f64) -> CMatrix {
        let phases = self.energies.map(|e| Complex::from_polar(1.0, -e * t));
        &self.modes * CMatrix::from_diagonal(&phases) * self.modes.adjoint()
    }

    /// `U(t) ρ U(t)†` as a bare matrix.
    pub fn evolve(&self, rho: &CMatrix, t: f64) -> CMatrix {
        let u = self.unitary(t);
        &u * rho * u.adjoint()
    }
}

/// Central difference `(S(δ) - S(-δ)) / 2δ` of the reduced entropy.
pub fn entropy_rate_fd(rho: &DensityMatrix, h: &Coupling, side: Side, delta: f64) -> Result<f64> {
    check_coupling(rho, h)?;
    let evo = Evolution::new(h);
    let s = |t: f64| {
        let m = evo.evolve(rho.matrix(), t);
        entropy_of(&reduce(&m, rho.dim_a(), rho.dim_b(), side))
    };
    Ok((s(delta) - s(-delta)) / (2.0 * delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RateMode {
    Analytic,
    FiniteDifference,
}

/// Analytic rate when the reduced spectrum allows it, finite difference otherwise.
pub fn entropy_rate_auto(rho: &DensityMatrix, h: &Coupling, side: Side) -> Result<(f64, RateMode)> {
    match entropy_rate(rho, h, side) {
        Ok(rate) => Ok((rate, RateMode::Analytic)),
        Err(Error::DegenerateSpectrum { .. }) => Ok((
            entropy_rate_fd(rho, h, side, FD_STEP)?,
            RateMode::FiniteDifference,
        )),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditThresholds {
    /// Lazy states must stay below this rate on every trial.
    pub rate_tol_lazy: f64,
    /// Non-lazy states must exceed this rate on at least one trial.
    pub rate_floor_non_lazy: f64,
    /// Commutator tolerance deciding which of the two applies.
    pub laziness_tolerance: f64,
}

impl Default for AuditThresholds {
    fn default() -> Self {
        AuditThresholds {
            rate_tol_lazy: 1e-8,
            rate_floor_non_lazy: 1e-3,
            laziness_tolerance: DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DynamicsAudit {
    pub side: Side,
    pub trials: usize,
    pub seed: u64,
    pub max_rate: f64,
    pub per_trial_rates: Vec<f64>,
    pub finite_difference_trials: usize,
    pub commutator_residual: f64,
    pub is_lazy: bool,
    pub consistent_with_laziness: bool,
    pub thresholds: AuditThresholds,
}

/// Entropy rates over `trials` GUE couplings; trial `k` uses stream `k` of `seed`.
pub fn dynamics_audit(
    rho: &DensityMatrix,
    side: Side,
    trials: usize,
    seed: u64,
    thresholds: AuditThresholds,
) -> Result<DynamicsAudit> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let results: Vec<(f64, RateMode)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let h = trial_coupling(rho.dim_a(), rho.dim_b(), seed, k);
            entropy_rate_auto(rho, &h, side)
        })
        .collect::<Result<_>>()?;
    let per_trial_rates: Vec<f64> = results.iter().map(|r| r.0).collect();
    let finite_difference_trials = results
        .iter()
        .filter(|r| r.1 == RateMode::FiniteDifference)
        .count();
    let max_rate = per_trial_rates.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let residual = commutator_residual(rho, side);
    let is_lazy = residual < thresholds.laziness_tolerance;
    let consistent_with_laziness = if is_lazy {
        max_rate < thresholds.rate_tol_lazy
    } else {
        max_rate > thresholds.rate_floor_non_lazy
    };
    Ok(DynamicsAudit {
        side,
        trials,
        seed,
        max_rate,
        per_trial_rates,
        finite_difference_trials,
        commutator_residual: residual,
        is_lazy,
        consistent_with_laziness,
        thresholds,
    })
}
