//! Runs every example binary that `cargo test` builds alongside the tests.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 7] = [
    "dtn_convergence",
    "krein_vs_direct",
    "eigenvalue_search",
    "duality",
    "elliptic_2d",
    "verification_report",
    "json_round_trip",
];

fn example_path(name: &str) -> PathBuf {
    // target/<profile>/deps/examples-<hash> -> target/<profile>/examples/<name>
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().and_then(|d| d.parent()).unwrap().join("examples");
    dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

#[test]
fn every_example_runs_to_completion() {
    for name in EXAMPLES {
        let path = example_path(name);
        assert!(path.exists(), "{} missing; build with `cargo test` or `cargo build --examples`", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(out.status.success(), "{name} failed:\n{}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}

#[test]
fn reports_pass_where_the_examples_claim_they_do() {
    let out = Command::new(example_path("eigenvalue_search")).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("complete: true"));
    let out = Command::new(example_path("verification_report")).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("overall: pass"));
}
