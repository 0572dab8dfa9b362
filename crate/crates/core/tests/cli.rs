use std::path::Path;
use std::process::{Command, Output};

use lazystate::io::{load_state, RunManifest};
use serde_json::Value;

fn lazystate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lazystate"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(out: &Output) -> RunManifest {
    serde_json::from_slice(&out.stdout).expect("stdout is a manifest")
}

fn write_example(dir: &Path, file: &str, args: &[&str]) -> String {
    let path = dir.join(file);
    let path_str = path.to_str().unwrap().to_string();
    let mut full = vec!["--quiet", "example"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--state-out", &path_str]);
    let out = lazystate(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path_str
}

#[test]
fn bell_state_is_lazy() {
    let dir = tempfile::tempdir().unwrap();
    let bell = write_example(
        dir.path(),
        "bell.json",
        &["--name", "maximally_entangled", "--param", "d=2"],
    );
    let out = lazystate(&["check", "--state", &bell]);
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&out);
    assert_eq!(m.command, "check");
    assert_eq!(m.results["isLazy"], Value::Bool(true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lazy"));
}

#[test]
fn random_state_is_not_lazy_on_either_side() {
    let dir = tempfile::tempdir().unwrap();
    let rho = write_example(
        dir.path(),
        "random.json",
        &["--name", "random", "--param", "dimA=2", "--param", "dimB=3"],
    );
    let out = lazystate(&["--quiet", "check", "--state", &rho, "--side", "both"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stderr.is_empty());
    let m = manifest(&out);
    assert_eq!(m.results["A"]["isLazy"], Value::Bool(false));
    assert_eq!(m.results["B"]["isLazy"], Value::Bool(false));
}

#[test]
fn unphysical_gaussian_form_is_invalid_input() {
    let out = lazystate(&["gaussian", "--form", "1,1,0.5,0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("symplectic"));
}

#[test]
fn gaussian_verdicts() {
    let product = lazystate(&["--quiet", "gaussian", "--form", "2,3,0,0"]);
    assert_eq!(product.status.code(), Some(0));
    let squeezed = lazystate(&[
        "--quiet",
        "gaussian",
        "--form",
        "1.5,1.5,1.118033988749895,-1.118033988749895",
        "--fock-check",
        "12",
    ]);
    assert_eq!(
        squeezed.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&squeezed.stderr)
    );
    let m = manifest(&squeezed);
    assert!(m.results["fockResidual"].as_f64().unwrap() > 1e-3);
}

#[test]
fn malformed_state_files_are_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad_trace = dir.path().join("trace.json");
    std::fs::write(
        &bad_trace,
        r#"{"dimA":1,"dimB":2,"matrix":[[[0.6,0],[0,0]],[[0,0],[0.6,0]]]}"#,
    )
    .unwrap();
    let out = lazystate(&["check", "--state", bad_trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace deviation"));

    let missing = dir.path().join("missing.json");
    assert_eq!(
        lazystate(&["decompose", "--state", missing.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lazystate(&["check"]).status.code(), Some(2));
}

#[test]
fn dynamics_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let rho = write_example(
        dir.path(),
        "random.json",
        &["--name", "random", "--param", "dimA=2", "--param", "dimB=2"],
    );
    let run = |seed: &str| {
        lazystate(&[
            "--quiet", "--seed", seed, "dynamics", "--state", &rho, "--trials", "20",
        ])
    };
    let (first, second, other) = (run("9"), run("9"), run("10"));
    assert_eq!(first.status.code(), Some(1));
    assert_eq!(first.stdout, second.stdout);
    assert_ne!(first.stdout, other.stdout);
    let m = manifest(&first);
    assert_eq!(m.seed, 9);
    assert_eq!(m.results["consistentWithLaziness"], Value::Bool(true));
    assert_eq!(m.results["perTrialRates"].as_array().unwrap().len(), 20);
}

#[test]
fn output_flag_writes_the_same_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("basis.json");
    let out = lazystate(&[
        "--quiet",
        "--output",
        file.to_str().unwrap(),
        "basis",
        "--dim",
        "3",
        "--emit-f",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&file).unwrap();
    assert_eq!(
        written.trim_end(),
        String::from_utf8_lossy(&out.stdout).trim_end()
    );
    let m = manifest(&out);
    assert_eq!(m.results["generators"].as_array().unwrap().len(), 8);
    assert_eq!(m.results["f"].as_array().unwrap().len(), 9);
}

#[test]
fn example_state_file_roundtrips_through_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_example(
        dir.path(),
        "werner.json",
        &["--name", "werner", "--param", "p=0.4"],
    );
    let state = load_state(&path).unwrap();
    assert_eq!((state.dim_a(), state.dim_b()), (2, 2));
    let out = lazystate(&["--quiet", "decompose", "--state", &path]);
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&out);
    // Werner: no local Bloch vectors and T = -p·I.
    let x = m.results["x"].as_array().unwrap();
    assert!(x.iter().all(|v| v.as_f64().unwrap().abs() < 1e-15));
    let t = m.results["T"].as_array().unwrap();
    assert!((t[0][0].as_f64().unwrap() + 0.4).abs() < 1e-12);
}
