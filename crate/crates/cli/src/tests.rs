use std::path::Path;

use clap::Parser;

use crate::args::Cli;
use crate::error::{EXIT_MISMATCH, EXIT_OK, EXIT_VALIDATION};
use crate::execute;

fn run(args: &[&str]) -> Result<i32, crate::error::CliError> {
    let mut full = vec!["lieinv"];
    full.extend_from_slice(args);
    execute(&Cli::try_parse_from(full).expect("valid flags"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn torus_de_rham_totals_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = run(&["cohomology", "--group", "torus", "--dims", "2", "--cutoff", "25", "--out", out]).unwrap();
    assert_eq!(code, EXIT_OK);
    assert_eq!(read(&dir.path().join("totals.csv")), "p,q,total\n0,0,1\n0,1,2\n0,2,1\n");
}

#[test]
fn describe_cr_structure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run(&["describe", "--group", "su2", "--structure", "cr", "--out", out]).unwrap();
    let v: serde_json::Value = serde_json::from_str(&read(&dir.path().join("describe.json"))).unwrap();
    let s = &v["result"]["structure"];
    assert_eq!(s["semisimple"], false);
    assert_eq!(s["elliptic"], false);
    assert_eq!(s["n"], 1);
    assert_eq!(v["result"]["killing"]["semisimple"], true);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config_digest"].as_str().unwrap().len(), 64);
    assert!((v["tolerances"]["rank"].as_f64().unwrap() - 1e-9).abs() < 1e-20);
}

#[test]
fn malformed_constants_name_the_triple() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "[algebra]\ndim = 3\nconstants = [[1, 2, 3, 1.0], [2, 1, 3, 0.5]]\n",
    )
    .unwrap();
    let err = run(&["describe", "--config", cfg.to_str().unwrap()]).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_VALIDATION);
    assert_eq!(err.kind(), "antisymmetry-violation");
    let msg = err.to_string();
    assert!(msg.contains("i=1") && msg.contains("j=2") && msg.contains("k=3"), "{msg}");
}

#[test]
fn jacobi_violation_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "[algebra]\ndim = 3\nbrackets = [[1, 2, 3, 1.0], [2, 3, 1, 1.0], [3, 1, 2, 2.0], [1, 2, 1, 1.0]]\n",
    )
    .unwrap();
    let err = run(&["describe", "--config", cfg.to_str().unwrap()]).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_VALIDATION);
    assert_eq!(err.kind(), "jacobi-violation");
}

#[test]
fn custom_algebra_rejected_by_spectral_commands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("heis.toml");
    std::fs::write(&cfg, "[algebra]\nname = \"heisenberg\"\ndim = 3\nbrackets = [[1, 2, 3, 1.0]]\n").unwrap();
    let path = cfg.to_str().unwrap();
    let out = dir.path().join("o");
    assert_eq!(run(&["describe", "--config", path, "--out", out.to_str().unwrap()]).unwrap(), EXIT_OK);
    assert_eq!(run(&["lie-cohomology", "--config", path, "--out", out.to_str().unwrap()]).unwrap(), EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&read(&out.join("lie-cohomology.json"))).unwrap();
    // Heisenberg algebra, trivial coefficients: Betti numbers 1, 2, 2, 1
    let dims: Vec<u64> = v["result"]["absolute"][0]["dims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 2, 2, 1]);
    let err = run(&["spectrum", "--config", path]).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_VALIDATION);
}

#[test]
fn bad_flags_are_validation_errors() {
    for args in [
        &["spectrum", "--group", "sl2"][..],
        &["spectrum", "--cutoffs", "10,5"],
        &["cohomology", "--structure", "cr"],
        &["diagnose", "--weight", "gevrey:-1"],
        &["cohomology", "--bidegree", "1"],
        &["cohomology", "--bidegree", "5,0"],
        &["spectrum", "--cutoff=-1"],
    ] {
        let err = run(args).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION, "{args:?}: {err}");
    }
}

#[test]
fn lie_cohomology_cross_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for (group, structure, cutoff) in [("su2", "cr", "6"), ("torus", "d1+i*d2", "10")] {
        let code = run(&[
            "lie-cohomology", "--group", group, "--structure", structure, "--cutoff", cutoff, "--out", out,
        ])
        .unwrap();
        assert_ne!(code, EXIT_MISMATCH);
        assert_eq!(code, EXIT_OK);
        let csv = read(&dir.path().join("cross.csv"));
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")), "{csv}");
    }
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[group]\nkind = \"torus\"\ndims = 2\n\n[structure]\npreset = \"d1+sqrt2*d2\"\n\n[run]\ncutoffs = [100.0, 1000.0]\nbidegrees = [[0, 0]]\nseed = 3\n",
    )
    .unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run(&["diagnose", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]).unwrap();
    run(&[
        "diagnose", "--structure", "d1+sqrt2*d2", "--cutoffs", "100,1000", "--bidegree", "0,0", "--seed", "3",
        "--out", b.to_str().unwrap(),
    ])
    .unwrap();
    assert_eq!(read(&a.join("diagnose.json")), read(&b.join("diagnose.json")));
    assert_eq!(read(&a.join("sigma.csv")), read(&b.join("sigma.csv")));
}

#[test]
fn emit_representatives_adds_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    run(&["cohomology", "--group", "torus", "--dims", "1", "--structure", "d", "--cutoff", "4", "--emit-representatives", "--out", out]).unwrap();
    let v: serde_json::Value = serde_json::from_str(&read(&dir.path().join("cohomology.json"))).unwrap();
    let reps = v["result"]["representatives"].as_array().unwrap();
    // constants in degree 0 and dθ in degree 1, both at λ = 0
    assert_eq!(reps.len(), 2);
    assert!(reps.iter().all(|r| r["lambda"] == "0"));
}
