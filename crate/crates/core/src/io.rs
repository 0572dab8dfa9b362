//! JSON file formats, example-state generators and run manifests.
//!
//! State file:
//!
//! ```json
//! {"dimA": 2, "dimB": 2, "matrix": [[[0.5, 0.0], [0.0, 0.0], ...], ...]}
//! ```
//!
//! Rows of `matrix` are complex entries as `[re, im]`, indexed with A as the
//! outer factor. Covariance file:
//!
//! ```json
//! {"covariance": [[n, 0, c, 0], ...], "displacement": [0, 0, 0, 0]}
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::{DVector, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::bloch::DensityMatrix;
use crate::error::{Error, Result};
use crate::gaussian::CovarianceState;
use crate::laziness::diagonal_family;
use crate::linalg::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StateFile {
    pub dim_a: usize,
    pub dim_b: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        StateFile::from_matrix(rho.dim_a(), rho.dim_b(), rho.matrix())
    }

    pub fn from_matrix(dim_a: usize, dim_b: usize, m: &CMatrix) -> Self {
        let matrix = m
            .row_iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        StateFile { dim_a, dim_b, matrix }
    }

    /// Shape-checked matrix without physical validation.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim_a * self.dim_b;
        if n == 0 {
            return Err(Error::DimensionMismatch("dimA and dimB must be positive".into()));
        }
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be {n}x{n} for dimA = {}, dimB = {}",
                self.dim_a, self.dim_b
            )));
        }
        Ok(CMatrix::from_fn(n, n, |r, c| {
            let [re, im] = self.matrix[r][c];
            C64::new(re, im)
        }))
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.dim_a, self.dim_b, self.to_matrix()?)
    }
}

pub fn parse_state(json: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<StateFile>(json)?.to_state()
}

pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&StateFile::from_state(rho)).expect("state file serialises")
}

pub fn save_state(rho: &DensityMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, state_to_json(rho))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceFile {
    pub covariance: [[f64; 4]; 4],
    #[serde(default)]
    pub displacement: [f64; 4],
}

impl CovarianceFile {
    pub fn to_state(&self) -> Result<CovarianceState> {
        let v = Matrix4::from_fn(|r, c| self.covariance[r][c]);
        CovarianceState::new(v, Vector4::from(self.displacement))
    }
}

pub fn load_covariance(path: impl AsRef<Path>) -> Result<CovarianceState> {
    serde_json::from_str::<CovarianceFile>(&fs::read_to_string(path)?)?.to_state()
}

/// Built-in example states.
#[derive(Debug, Clone, PartialEq)]
pub enum ExampleSpec {
    /// `Σ_k |kk⟩ / √d`.
    MaximallyEntangled {
        d: usize,
    },
    /// `diag(pa) ⊗ diag(pb)`.
    Product {
        a: Vec<f64>,
        b: Vec<f64>,
    },
    /// The 3×3 diagonal-correlation family.
    DiagonalFamily {
        x: [f64; 8],
        y: [f64; 8],
        lambda: [f64; 8],
    },
    /// `p |Ψ⁻⟩⟨Ψ⁻| + (1 - p) I/4`.
    Werner {
        p: f64,
    },
    Random {
        dim_a: usize,
        dim_b: usize,
        seed: u64,
    },
}

fn param<'a>(params: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    params
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key:?}")))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("{v:?}: {e}")))
        })
        .collect()
}

fn parse_vec8(params: &BTreeMap<String, String>, key: &str) -> Result<[f64; 8]> {
    match params.get(key) {
        None => Ok([0.0; 8]),
        Some(s) => parse_list(s)?
            .try_into()
            .map_err(|_| Error::InvalidParameter(format!("{key} needs 8 comma-separated values"))),
    }
}

fn parse_num<T: std::str::FromStr>(params: &BTreeMap<String, String>, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    param(params, key)?
        .parse()
        .map_err(|e| Error::InvalidParameter(format!("{key}: {e}")))
}

impl ExampleSpec {
    /// Build from a name and `key=value` parameters. `seed` is the run seed,
    /// used by `random` when no explicit `seed` parameter is given.
    pub fn from_params(name: &str, params: &BTreeMap<String, String>, seed: u64) -> Result<Self> {
        match name {
            "maximally_entangled" => Ok(ExampleSpec::MaximallyEntangled {
                d: if params.contains_key("d") {
                    parse_num(params, "d")?
                } else {
                    2
                },
            }),
            "product" => Ok(ExampleSpec::Product {
                a: parse_list(param(params, "a")?)?,
                b: parse_list(param(params, "b")?)?,
            }),
            "example1" => Ok(ExampleSpec::DiagonalFamily {
                x: parse_vec8(params, "x")?,
                y: parse_vec8(params, "y")?,
                lambda: parse_vec8(params, "lambda")?,
            }),
            "werner" => Ok(ExampleSpec::Werner {
                p: parse_num(params, "p")?,
            }),
            "random" => Ok(ExampleSpec::Random {
                dim_a: parse_num(params, "dimA")?,
                dim_b: parse_num(params, "dimB")?,
                seed: if params.contains_key("seed") {
                    parse_num(params, "seed")?
                } else {
                    seed
                },
            }),
            other => Err(Error::InvalidParameter(format!(
                "unknown example {other:?}; expected maximally_entangled, product, example1, werner or random"
            ))),
        }
    }
}

fn diagonal_state(p: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&DVector::from_iterator(
        p.len(),
        p.iter().map(|&v| C64::new(v, 0.0)),
    ))
}

/// Validated example state; non-physical parameter choices are errors.
pub fn generate_example(spec: &ExampleSpec) -> Result<DensityMatrix> {
    match spec {
        ExampleSpec::MaximallyEntangled { d } => {
            if *d < 2 {
                return Err(Error::InvalidParameter("d must be at least 2".into()));
            }
            let psi = DVector::from_fn(d * d, |idx, _| {
                if idx / d == idx % d {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            DensityMatrix::pure(*d, *d, &psi)
        }
        ExampleSpec::Product { a, b } => {
            if a.len() < 2 || b.len() < 2 {
                return Err(Error::InvalidParameter(
                    "product marginals need at least 2 entries".into(),
                ));
            }
            DensityMatrix::product(&diagonal_state(a), &diagonal_state(b))
        }
        ExampleSpec::DiagonalFamily { x, y, lambda } => {
            diagonal_family::state(x, y, lambda).state.into_state()
        }
        ExampleSpec::Werner { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParameter(format!("werner p = {p} outside [0, 1]")));
            }
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let singlet = DVector::from_vec(vec![
                C64::new(0.0, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
                C64::new(0.0, 0.0),
            ]);
            let proj = &singlet * singlet.adjoint();
            let mixed = CMatrix::identity(4, 4).unscale(4.0);
            DensityMatrix::new(2, 2, proj * C64::new(*p, 0.0) + mixed * C64::new(1.0 - p, 0.0))
        }
        ExampleSpec::Random { dim_a, dim_b, seed } => {
            if *dim_a < 2 || *dim_b < 2 {
                return Err(Error::InvalidParameter("random dims must be at least 2".into()));
            }
            Ok(DensityMatrix::random(*dim_a, *dim_b, *seed))
        }
    }
}

/// Record of one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub tool_version: String,
    pub results: serde_json::Value,
}

impl RunManifest {
    pub fn new(
        command: &str,
        parameters: BTreeMap<String, String>,
        seed: u64,
        results: serde_json::Value,
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            results,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serialises")
    }
}
