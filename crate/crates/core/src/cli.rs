//! Command-line front end.
//!
//! Every subcommand prints a [`RunManifest`] as JSON on stdout and a short
//! summary on stderr. Exit codes: 0 success (lazy where applicable), 1 success
//! but not lazy, 2 invalid input, 3 numerical failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bloch::{decompose, BlochJson, Side};
use crate::dynamics::{dynamics_audit, AuditThresholds};
use crate::error::{Error, Result};
use crate::gaussian::{analyse, standard_form_from_cov, GaussianStandardForm};
use crate::io::{
    generate_example, load_covariance, load_state, save_state, ExampleSpec, RunManifest, StateFile,
};
use crate::laziness::{is_lazy_with, DEFAULT_TOLERANCE};
use crate::su_algebra::{build_su_basis, verify_basis};

pub const EXIT_LAZY: i32 = 0;
pub const EXIT_NOT_LAZY: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "lazystate",
    version,
    about = "Decide whether bipartite quantum states are lazy"
)]
struct Cli {
    /// Also write the manifest to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Seed for every random draw in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    A,
    B,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::A => vec![Side::A],
            SideArg::B => vec![Side::B],
            SideArg::Both => vec![Side::A, Side::B],
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SingleSide {
    A,
    B,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// su(n) generators and structure constants.
    Basis {
        #[arg(long)]
        dim: usize,
        /// Include the nonzero structure constants.
        #[arg(long)]
        emit_f: bool,
    },
    /// Bloch form (x, y, T) of a state file.
    Decompose {
        #[arg(long)]
        state: PathBuf,
    },
    /// Laziness report for a state file.
    Check {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "a", ignore_case = true)]
        side: SideArg,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Entropy-rate audit over random couplings.
    Dynamics {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "a", ignore_case = true)]
        side: SingleSide,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Two-mode Gaussian standard form analysis.
    Gaussian {
        /// Standard form as `n,m,c,cprime`.
        #[arg(
            long,
            required_unless_present = "cov",
            conflicts_with = "cov",
            allow_hyphen_values = true
        )]
        form: Option<String>,
        /// 4x4 covariance JSON file, reduced to standard form first.
        #[arg(long)]
        cov: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Also build the state in a truncated number basis with this cutoff.
        #[arg(long)]
        fock_check: Option<usize>,
        /// Number of (u, v) points for the quadratic-form identity.
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Generate a built-in example state.
    Example {
        /// maximally_entangled, product, example1, werner or random.
        #[arg(long)]
        name: String,
        /// `key=value` parameter; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Write the state file here.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
}

struct Outcome {
    command: &'static str,
    parameters: BTreeMap<String, String>,
    results: Value,
    summary: String,
    code: i32,
}

fn params<const N: usize>(kv: [(&str, String); N]) -> BTreeMap<String, String> {
    kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn path_str(p: &std::path::Path) -> String {
    p.display().to_string()
}

fn parse_form(s: &str) -> Result<GaussianStandardForm> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidParameter(format!("--form {t:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    match v.as_slice() {
        [n, m, c, cp] => Ok(GaussianStandardForm::new(*n, *m, *c, *cp)),
        _ => Err(Error::InvalidParameter(
            "--form needs exactly four values n,m,c,cprime".into(),
        )),
    }
}

fn lazy_code(lazy: bool) -> i32 {
    if lazy {
        EXIT_LAZY
    } else {
        EXIT_NOT_LAZY
    }
}

fn execute(command: &Command, seed: u64) -> Result<Outcome> {
    match command {
        Command::Basis { dim, emit_f } => {
            let basis = build_su_basis(*dim)?;
            let generators: Vec<Value> = basis
                .kinds()
                .iter()
                .zip(basis.generators())
                .map(|(kind, g)| {
                    json!({
                        "label": kind.to_string(),
                        "matrix": StateFile::from_matrix(*dim, 1, g).matrix,
                    })
                })
                .collect();
            let verification = verify_basis(&basis);
            let mut results = json!({
                "dim": dim,
                "generators": generators,
                "verification": verification,
            });
            if *emit_f {
                let f: Vec<Value> = basis
                    .structure_constants()
                    .iter()
                    .map(|([i, j, k], v)| json!({"ijk": [i + 1, j + 1, k + 1], "value": v}))
                    .collect();
                results["f"] = Value::Array(f);
            }
            Ok(Outcome {
                command: "basis",
                parameters: params([("dim", dim.to_string()), ("emitF", emit_f.to_string())]),
                summary: format!(
                    "su({dim}): {} generators, {} nonzero f_ijk (i<j<k), max identity deviation {:.3e}",
                    basis.len(),
                    basis.structure_constants().nonzero_count(),
                    verification.max_deviation()
                ),
                results,
                code: 0,
            })
        }
        Command::Decompose { state } => {
            let rho = load_state(state)?;
            let basis_a = build_su_basis(rho.dim_a())?;
            let basis_b = build_su_basis(rho.dim_b())?;
            let bloch = decompose(&rho, &basis_a, &basis_b)?;
            Ok(Outcome {
                command: "decompose",
                parameters: params([("state", path_str(state))]),
                summary: format!(
                    "Bloch form: |x| = {:.6}, |y| = {:.6}, |T| = {:.6}",
                    bloch.x.norm(),
                    bloch.y.norm(),
                    bloch.t.norm()
                ),
                results: serde_json::to_value(BlochJson::from(&bloch))?,
                code: 0,
            })
        }
        Command::Check { state, side, tol } => {
            let rho = load_state(state)?;
            let basis_a = build_su_basis(rho.dim_a())?;
            let basis_b = build_su_basis(rho.dim_b())?;
            let reports = side
                .sides()
                .into_iter()
                .map(|s| is_lazy_with(&rho, s, *tol, &basis_a, &basis_b))
                .collect::<Result<Vec<_>>>()?;
            let all_lazy = reports.iter().all(|r| r.is_lazy);
            let summary = reports
                .iter()
                .map(|r| {
                    format!(
                        "side {}: {} (commutator {:.3e}, criterion {:.3e})",
                        r.side,
                        if r.is_lazy { "lazy" } else { "not lazy" },
                        r.commutator_residual,
                        r.criterion_norm
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            let results = if reports.len() == 1 {
                serde_json::to_value(&reports[0])?
            } else {
                json!({
                    "A": reports[0],
                    "B": reports[1],
                    "isLazy": all_lazy,
                })
            };
            Ok(Outcome {
                command: "check",
                parameters: params([
                    ("state", path_str(state)),
                    ("side", format!("{side:?}").to_lowercase()),
                    ("tol", format!("{tol:e}")),
                ]),
                results,
                summary,
                code: lazy_code(all_lazy),
            })
        }
        Command::Dynamics { state, side, trials } => {
            let rho = load_state(state)?;
            let side = match side {
                SingleSide::A => Side::A,
                SingleSide::B => Side::B,
            };
            let audit = dynamics_audit(&rho, side, *trials, seed, AuditThresholds::default())?;
            Ok(Outcome {
                command: "dynamics",
                parameters: params([
                    ("state", path_str(state)),
                    ("side", side.to_string()),
                    ("trials", trials.to_string()),
                ]),
                summary: format!(
                    "max |dS_{side}/dt| = {:.3e} over {} couplings; {}; {}",
                    audit.max_rate,
                    audit.trials,
                    if audit.is_lazy { "lazy" } else { "not lazy" },
                    if audit.consistent_with_laziness {
                        "consistent"
                    } else {
                        "INCONSISTENT"
                    }
                ),
                code: lazy_code(audit.is_lazy),
                results: serde_json::to_value(&audit)?,
            })
        }
        Command::Gaussian {
            form,
            cov,
            tol,
            fock_check,
            samples,
        } => {
            let (standard, mut parameters) = match (form, cov) {
                (Some(f), _) => (parse_form(f)?, params([("form", f.clone())])),
                (None, Some(path)) => {
                    let state = load_covariance(path)?;
                    (standard_form_from_cov(&state)?, params([("cov", path_str(path))]))
                }
                (None, None) => return Err(Error::InvalidParameter("need --form or --cov".into())),
            };
            parameters.insert("tol".into(), format!("{tol:e}"));
            parameters.insert("samples".into(), samples.to_string());
            if let Some(c) = fock_check {
                parameters.insert("fockCheck".into(), c.to_string());
            }
            let report = analyse(&standard, *tol, *samples, seed, *fock_check)?;
            let mut summary = format!(
                "(n, m, c, c') = ({}, {}, {}, {}); ν = ({:.6}, {:.6}); {}",
                standard.n,
                standard.m,
                standard.c,
                standard.c_prime,
                report.symplectic_eigenvalues[0],
                report.symplectic_eigenvalues[1],
                if report.is_lazy {
                    "lazy (product state)"
                } else {
                    "not lazy"
                }
            );
            if let Some(r) = report.fock_residual {
                summary.push_str(&format!("; Fock commutator {r:.3e}"));
            }
            Ok(Outcome {
                command: "gaussian",
                parameters,
                summary,
                code: lazy_code(report.is_lazy),
                results: serde_json::to_value(&report)?,
            })
        }
        Command::Example {
            name,
            params: raw,
            state_out,
        } => {
            let mut kv = BTreeMap::new();
            for p in raw {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidParameter(format!("--param {p:?} is not key=value")))?;
                kv.insert(k.trim().to_string(), v.trim().to_string());
            }
            let spec = ExampleSpec::from_params(name, &kv, seed)?;
            let rho = generate_example(&spec)?;
            if let Some(path) = state_out {
                save_state(&rho, path)?;
            }
            let mut parameters = kv;
            parameters.insert("name".into(), name.clone());
            Ok(Outcome {
                command: "example",
                parameters,
                summary: format!("{name}: {}x{} state", rho.dim_a(), rho.dim_b()),
                results: serde_json::to_value(StateFile::from_state(&rho))?,
                code: 0,
            })
        }
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INVALID;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(&cli.command, cli.seed) {
        Ok(outcome) => {
            let manifest = RunManifest::new(outcome.command, outcome.parameters, cli.seed, outcome.results);
            let text = manifest.to_json();
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_INVALID;
                }
            }
            let _ = writeln!(out, "{text}");
            if !cli.quiet {
                let _ = writeln!(err, "{}", outcome.summary);
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INVALID
            }
        }
    }
}
