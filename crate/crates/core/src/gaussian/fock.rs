//! Truncated number-basis representation of two-mode squeezed thermal states.
//!
//! `S₂(r) (ρ_th(a) ⊗ ρ_th(b)) S₂(r)†` with `S₂(r) = exp(r (a₁†a₂† - a₁a₂))` has
//! standard form
//!
//! ```text
//! n = a cosh²r + b sinh²r,  m = a sinh²r + b cosh²r,  c = -c' = (a + b) cosh r sinh r
//! ```
//!
//! where `a, b >= 1` are the thermal covariances (`a = 1` is the vacuum).
//! The squeezer conserves `n₁ - n₂`, so it is exponentiated block by block on a
//! working space larger than the requested cutoff and then cropped.

use nalgebra::{DMatrix, DVector};

use super::{ensure_physical, GaussianStandardForm};
use crate::bloch::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// Largest tolerated trace loss from cropping to the cutoff.
pub const MAX_TRACE_DEFICIT: f64 = 1e-6;
pub const MIN_CUTOFF: usize = 4;
/// Extra levels kept while exponentiating the squeezer.
const WORKING_MARGIN: usize = 60;

/// Thermal covariances `a`, `b` and squeezing `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedThermal {
    pub a: f64,
    pub b: f64,
    pub r: f64,
}

impl SqueezedThermal {
    /// Invert the parametrisation for a form with `c' = -c`:
    /// `tanh 2r = 2c/(n+m)`, `a + b = (n+m)/cosh 2r`, `a - b = n - m`.
    pub fn from_form(form: &GaussianStandardForm) -> Result<Self> {
        let GaussianStandardForm { n, m, c, c_prime } = *form;
        if (c + c_prime).abs() > 1e-9 * c.abs().max(1.0) {
            return Err(Error::OutsideSqueezedThermal(format!(
                "needs c' = -c, got c = {c}, c' = {c_prime}"
            )));
        }
        let ratio = 2.0 * c / (n + m);
        if ratio.is_nan() || ratio.abs() >= 1.0 {
            return Err(Error::OutsideSqueezedThermal(format!(
                "|2c/(n+m)| = {} >= 1 has no squeezing parameter",
                ratio.abs()
            )));
        }
        let r = 0.5 * ratio.atanh();
        let sum = (n + m) / (2.0 * r).cosh();
        let a = 0.5 * (sum + (n - m));
        let b = 0.5 * (sum - (n - m));
        let tol = 1e-9;
        if a < 1.0 - tol || b < 1.0 - tol {
            return Err(Error::OutsideSqueezedThermal(format!(
                "thermal parameters a = {a}, b = {b} fall below the vacuum value 1"
            )));
        }
        Ok(SqueezedThermal {
            a: a.max(1.0),
            b: b.max(1.0),
            r,
        })
    }

    pub fn form(&self) -> GaussianStandardForm {
        let (ch2, sh2) = (self.r.cosh().powi(2), self.r.sinh().powi(2));
        let c = (self.a + self.b) * self.r.cosh() * self.r.sinh();
        GaussianStandardForm::new(self.a * ch2 + self.b * sh2, self.a * sh2 + self.b * ch2, c, -c)
    }
}

/// Photon-number distribution of a thermal state with covariance `a`,
/// mean occupation `(a - 1)/2`, on levels `0..=levels`.
pub fn thermal_populations(a: f64, levels: usize) -> DVector<f64> {
    let mean = 0.5 * (a - 1.0);
    let q = mean / (mean + 1.0);
    DVector::from_fn(levels + 1, |k, _| q.powi(k as i32) / (mean + 1.0))
}

/// `exp(r (a₁†a₂† - a₁a₂))` on the block `|k + d, k⟩` (or `|k, k + d⟩`),
/// `k = 0..len`.
fn squeezer_block(r: f64, offset: usize, len: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(len, len);
    for k in 0..len.saturating_sub(1) {
        let amp = r * (((k + offset + 1) * (k + 1)) as f64).sqrt();
        g[(k + 1, k)] = amp;
        g[(k, k + 1)] = -amp;
    }
    g.exp()
}

/// Squeezed thermal state on `(cutoff + 1)²` number states, renormalised.
pub fn squeezed_thermal_fock(params: &SqueezedThermal, cutoff: usize) -> Result<DensityMatrix> {
    let dim = cutoff + 1;
    DensityMatrix::new(dim, dim, cropped_matrix(params, cutoff)?)
}

fn cropped_matrix(params: &SqueezedThermal, cutoff: usize) -> Result<CMatrix> {
    if cutoff < MIN_CUTOFF {
        return Err(Error::InvalidParameter(format!(
            "cutoff must be at least {MIN_CUTOFF}"
        )));
    }
    let work = cutoff + WORKING_MARGIN;
    let pa = thermal_populations(params.a, work);
    let pb = thermal_populations(params.b, work);
    let dim = cutoff + 1;
    let mut rho = CMatrix::zeros(dim * dim, dim * dim);

    // Blocks are labelled by the signed offset n₁ - n₂.
    for offset in -(work as isize)..=(work as isize) {
        let d = offset.unsigned_abs();
        let len = work + 1 - d;
        let level = |k: usize| if offset >= 0 { (k + d, k) } else { (k, k + d) };
        let s = squeezer_block(params.r, d, len);
        let pops = DVector::from_fn(len, |k, _| {
            let (n1, n2) = level(k);
            pa[n1] * pb[n2]
        });
        let kept: Vec<usize> = (0..len)
            .filter(|&k| {
                let (n1, n2) = level(k);
                n1 <= cutoff && n2 <= cutoff
            })
            .collect();
        for &k in &kept {
            for &kp in &kept {
                let mut acc = 0.0;
                for j in 0..len {
                    acc += s[(k, j)] * pops[j] * s[(kp, j)];
                }
                let (n1, n2) = level(k);
                let (m1, m2) = level(kp);
                rho[(n1 * dim + n2, m1 * dim + m2)] = C64::new(acc, 0.0);
            }
        }
    }

    let kept_trace: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    let deficit = 1.0 - kept_trace;
    if deficit > MAX_TRACE_DEFICIT {
        return Err(Error::TruncationDeficit {
            deficit,
            limit: MAX_TRACE_DEFICIT,
        });
    }
    Ok(rho.unscale(kept_trace))
}

/// Fock representation of a physical standard form with `c' = -c`.
pub fn fock_truncate(form: &GaussianStandardForm, cutoff: usize) -> Result<DensityMatrix> {
    ensure_physical(form)?;
    let params = SqueezedThermal::from_form(form)?;
    squeezed_thermal_fock(&params, cutoff)
}
