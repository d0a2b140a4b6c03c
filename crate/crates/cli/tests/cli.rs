//! End-to-end tests of the binary: round trips, determinism, exit codes and
//! error reporting.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("casimir-cli-{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_fixture(name: &str, dir: &Path) -> PathBuf {
    let out = binary().args(["fixture", name, "--out"]).arg(dir).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let line = stdout
        .lines()
        .find(|l| l.starts_with("wrote ") && l.ends_with(".toml"))
        .expect("fixture prints the problem path");
    PathBuf::from(line.trim_start_matches("wrote "))
}

fn construct(file: &Path, extra: &[&str]) -> Output {
    binary().arg("construct").arg(file).args(extra).output().unwrap()
}

#[test]
fn fixture_round_trips_through_construct() {
    let dir = tempdir("roundtrip");
    for name in ["toda(3)", "volterra_companion(3)", "gl3", "r3_jacobian(x^2+y^2+z^2)"] {
        let file = write_fixture(name, &dir);
        let out = construct(&file, &["--format", "machine"]);
        assert!(
            out.status.success(),
            "{name}: {}\n{}",
            out.status,
            String::from_utf8_lossy(&out.stdout)
        );
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        // computed table equals the expected table shipped with the fixture
        let expected_path = file.with_extension("expected.json");
        let expected: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(expected_path).unwrap()).unwrap();
        assert_eq!(doc["table"], expected["table"], "{name}");
        assert_eq!(doc["rank"], expected["rank"], "{name}");
    }
}

#[test]
fn machine_output_is_byte_deterministic() {
    let dir = tempdir("determinism");
    let file = write_fixture("toda(3)", &dir);
    let first = construct(&file, &["--format", "machine"]);
    let second = construct(&file, &["--format", "machine"]);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn fast_check_level_skips_expensive_checks() {
    let dir = tempdir("fast");
    let file = write_fixture("toda(3)", &dir);
    let out = construct(&file, &["--format", "machine", "--check-level", "fast"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.iter().any(|n| n.contains("casimir")));
    assert!(!names.iter().any(|n| n.contains("jacobi")));
}

#[test]
fn failing_sigma_names_the_condition_and_exits_one() {
    let dir = tempdir("badsigma");
    let file = write_fixture("toda(3)", &dir);
    // corrupt one sigma coefficient (a1 -> b1 on the first sigma term):
    // the induced bivector fails Jacobi, so the condition must fail too
    let mangled = std::fs::read_to_string(&file)
        .unwrap()
        .replacen("coeff = \"a1\"", "coeff = \"b1\"", 1);
    let bad = dir.join("mutated.toml");
    std::fs::write(&bad, mangled).unwrap();
    let out = construct(&bad, &[]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("FAIL  2\u{3c3}\u{2227}\u{3b4}\u{3c3} = \u{3b4}(\u{3c3}\u{2227}\u{3c3})"),
        "output was:\n{text}"
    );
    assert!(text.contains("result: FAILED"));
}

#[test]
fn verify_reports_first_failing_triple_for_mutated_bivector() {
    let dir = tempdir("verify");
    // verify-mode file with a mutated lattice bivector: {a1,b1} flipped
    let file = dir.join("mutated_bivector.toml");
    std::fs::write(
        &file,
        r#"
mode = "verify"
dimension = 6
coordinates = ["a1", "a2", "a3", "b1", "b2", "b3"]
casimirs = ["b1 + b2 + b3", "a1*a2*a3"]

[structure]
kind = "even"
omega0 = [
  { coeff = "1", wedge = ["a1", "b1"] },
  { coeff = "1", wedge = ["a2", "b2"] },
  { coeff = "1", wedge = ["a3", "b3"] },
]

[[bivector]]
coeff = "b1"
wedge = ["a1", "b1"]

[[bivector]]
coeff = "-a1"
wedge = ["a1", "b2"]

[[bivector]]
coeff = "a2"
wedge = ["a2", "b2"]

[[bivector]]
coeff = "-a2"
wedge = ["a2", "b3"]

[[bivector]]
coeff = "a3"
wedge = ["a3", "b3"]

[[bivector]]
coeff = "-a3"
wedge = ["a3", "b1"]
"#,
    )
    .unwrap();
    let out = binary().arg("verify").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    // casimir annihilation and the jacobi sweep both break; the first
    // failing triple is named
    assert!(text.contains("FAIL"));
    assert!(text.contains("first failing triple ("), "output was:\n{text}");

    // the unmutated bivector verifies clean
    let good = dir.join("good_bivector.toml");
    std::fs::write(
        &good,
        std::fs::read_to_string(&file)
            .unwrap()
            .replacen("coeff = \"b1\"\nwedge = [\"a1\", \"b1\"]", "coeff = \"a1\"\nwedge = [\"a1\", \"b1\"]", 1),
    )
    .unwrap();
    let out = binary().arg("verify").arg(&good).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn input_errors_exit_two() {
    let dir = tempdir("errors");
    // unreadable file
    let out = binary().arg("construct").arg(dir.join("missing.toml")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unparsable expression with line/column in the message
    let bad_expr = dir.join("bad_expr.toml");
    std::fs::write(
        &bad_expr,
        r#"
mode = "jacobian"
dimension = 3
coordinates = ["x", "y", "z"]
casimirs = ["x^2 + qq"]
coefficient = "1"
"#,
    )
    .unwrap();
    let out = binary().arg("construct").arg(&bad_expr).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1, column 7"), "stderr was: {err}");
    // unknown fixture lists the available names
    let out = binary().args(["fixture", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("available fixtures"));
    // dimension/coordinate mismatch
    let bad_dim = dir.join("bad_dim.toml");
    std::fs::write(
        &bad_dim,
        r#"
mode = "jacobian"
dimension = 4
coordinates = ["x", "y", "z"]
casimirs = ["x"]
"#,
    )
    .unwrap();
    let out = binary().arg("construct").arg(&bad_dim).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dirac_and_nonholonomic_modes() {
    let dir = tempdir("modes");
    let dirac = dir.join("dirac.toml");
    std::fs::write(
        &dirac,
        r#"
mode = "dirac"
dimension = 4
coordinates = ["q1", "q2", "p1", "p2"]
casimirs = ["q2", "p2"]

[structure]
kind = "even"
omega0 = [
  { coeff = "1", wedge = ["q1", "p1"] },
  { coeff = "1", wedge = ["q2", "p2"] },
]
"#,
    )
    .unwrap();
    let out = construct(&dirac, &["--format", "machine"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["table"].as_array().unwrap().len(), 1);
    assert_eq!(doc["table"][0]["value"].as_str().unwrap(), "1");

    // the nonintegrable constraint fails its Jacobi sweep: exit 1, but the
    // kernel annihilation lines still pass
    let nh = dir.join("nonholonomic.toml");
    std::fs::write(
        &nh,
        r#"
mode = "nonholonomic"
dimension = 6
coordinates = ["Q1", "Q2", "Q3", "P1", "P2", "P3"]
hamiltonian = "(P1^2 + P2^2 + P3^2)/2"

[[constraints]]
coeffs = ["0", "-Q1", "1"]
"#,
    )
    .unwrap();
    let out = construct(&nh, &["--format", "machine"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for check in doc["checks"].as_array().unwrap() {
        let name = check["name"].as_str().unwrap();
        if name.contains("annihilated") {
            assert!(check["passed"].as_bool().unwrap(), "{name}");
        }
        if name.contains("jacobi") {
            assert!(!check["passed"].as_bool().unwrap(), "{name}");
        }
    }
}

#[test]
fn kernel_mode_reduces_to_exact_differentials() {
    let dir = tempdir("kernel");
    let kernel = dir.join("kernel.toml");
    std::fs::write(
        &kernel,
        r#"
mode = "kernel"
dimension = 4
coordinates = ["q1", "q2", "p1", "p2"]

[structure]
kind = "even"
omega0 = [
  { coeff = "1", wedge = ["q1", "p1"] },
  { coeff = "1", wedge = ["q2", "p2"] },
]

[[sigma]]
coeff = "1"
wedge = ["q1", "p1"]

[[alphas]]
terms = [ { coeff = "1", wedge = ["q2"] } ]

[[alphas]]
terms = [ { coeff = "1", wedge = ["p2"] } ]
"#,
    )
    .unwrap();
    let out = construct(&kernel, &["--format", "machine"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["table"].as_array().unwrap().len(), 1);
    assert_eq!(doc["table"][0]["left"].as_str().unwrap(), "q1");
    assert_eq!(doc["table"][0]["value"].as_str().unwrap(), "1");
}
