//! End-to-end CLI behavior: exit codes, JSON output, environment seed, and
//! report re-rendering.

use std::io::Write;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_solitonlab"))
}

fn manifold(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("manifolds")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn golden_files_pass_structure_and_soliton() {
    for file in ["example-3-6.toml", "example-4-5.toml"] {
        let out = bin()
            .args(["check", "structure", &manifold(file)])
            .output()
            .unwrap();
        assert!(out.status.success(), "{file} structure failed");
        let out = bin()
            .args(["check", "soliton", &manifold(file)])
            .output()
            .unwrap();
        assert!(out.status.success(), "{file} soliton failed");
    }
}

#[test]
fn missing_file_is_usage_error() {
    let out = bin()
        .args(["check", "structure", "/nonexistent/m.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_manifold_is_usage_error() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "[manifold]\nname = \"broken\"").unwrap();
    let out = bin()
        .args(["check", "structure", f.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("dimension"), "unhelpful error: {err}");
}

#[test]
fn json_output_is_deterministic_per_seed() {
    let run = |seed: &str| {
        bin()
            .args(["zoo", "run", "example-4-5", "--json", "--seed", seed])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
    let v: serde_json::Value = serde_json::from_slice(&run("3")).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["passed"], true);
}

#[test]
fn env_seed_override() {
    let out = bin()
        .args(["zoo", "run", "example-3-6", "--json"])
        .env("SOLITONLAB_SEED", "777")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 777);
}

#[test]
fn report_rerenders_saved_json() {
    let out = bin()
        .args(["zoo", "run", "example-3-6", "--json"])
        .output()
        .unwrap();
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(&out.stdout).unwrap();
    let rendered = bin()
        .args(["report", f.path().to_str().unwrap(), "--format", "text"])
        .output()
        .unwrap();
    assert!(rendered.status.success());
    let text = String::from_utf8_lossy(&rendered.stdout).to_string();
    assert!(text.contains("overall: PASS"), "{text}");
    assert!(text.contains("soliton/residual-max"));
}

#[test]
fn audit_subcommand_on_golden_files() {
    let out = bin()
        .args(["audit", &manifold("example-3-6.toml"), "--theorem", "3.3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["audit", &manifold("example-4-5.toml"), "--theorem", "4.3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args(["audit", &manifold("example-3-6.toml"), "--theorem", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zoo_list_names_all_entries() {
    let out = bin().args(["zoo", "list"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    for name in [
        "example-3-6",
        "example-4-5",
        "hyperbolic-3",
        "hyperbolic-5",
        "product-h2xr",
    ] {
        assert!(text.contains(name), "missing {name}:\n{text}");
    }
    let out = bin().args(["zoo", "run", "no-such-entry"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
