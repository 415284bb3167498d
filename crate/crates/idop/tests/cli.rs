//! End-to-end tests of the command-line binary: output strings, JSON
//! mode, exit codes, and determinism across runs.

use std::process::{Command, Output};

fn idop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idop"))
        .args(args)
        .output()
        .expect("failed to run binary")
}

fn stdout_of(args: &[&str]) -> String {
    let out = idop(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

const DIRICHLET: &str = r#"{"T":"D^2","conditions":["E[0]","E[1]"]}"#;
const NEUMANN_PLUS: &str =
    r#"{"T":"D^2","conditions":["E[0].D","E[1].D","E[1]"],"exceptional":["1"]}"#;

#[test]
fn normalize_reduces_products() {
    assert_eq!(stdout_of(&["normalize", "-e", "A.A"]), "(x.A) - (A.x)\n");
    assert_eq!(stdout_of(&["normalize", "-e", "D.A"]), "1\n");
    assert_eq!(stdout_of(&["normalize", "-e", "A - A"]), "0\n");
}

#[test]
fn mul_and_add_operators() {
    assert_eq!(stdout_of(&["mul", "-e", "D^2", "-e", "A", "-e", "A"]), "1\n");
    assert_eq!(
        stdout_of(&["add", "-e", "E[1]", "-e", "E[1].A"]),
        "E[1] + (E[1].A)\n"
    );
}

#[test]
fn apply_operator_to_function() {
    let out = stdout_of(&["apply", "-e", "D^2 + A + E[1] + E[1].A", "-e", "x^3"]);
    assert_eq!(out, "5/4 + 6 x + x^4/4\n");
}

#[test]
fn greens_operator_of_dirichlet_problem() {
    assert_eq!(
        stdout_of(&["greens", "-e", DIRICHLET]),
        "(x.A) - (A.x) - ((x E[1]).A) + ((x E[1]).A.x)\n"
    );
}

#[test]
fn greens_function_branches() {
    let out = stdout_of(&["greensfn", "-e", DIRICHLET]);
    assert_eq!(out, "lower: -xi + x xi\nupper: -x + x xi\n");
    let js = stdout_of(&["greensfn", "--json", "-e", DIRICHLET]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    assert_eq!(v["interval"][1], "1");
    assert_eq!(v["lower"], "-xi + x xi");
    assert_eq!(v["upper"], "-x + x xi");
}

#[test]
fn compat_of_singular_problem() {
    let singular = r#"{"T":"D^2","conditions":["E[0].D","E[1].D"]}"#;
    assert_eq!(stdout_of(&["compat", "-e", singular]), "E[1].A\n");
    assert_eq!(stdout_of(&["compat", "-e", NEUMANN_PLUS]), "E[1].A\n");
}

#[test]
fn generalized_greens_and_projector() {
    let g = stdout_of(&["gengreens", "-e", NEUMANN_PLUS]);
    assert_eq!(
        g,
        "(x.A) - (A.x) + (((-1/2 - x^2/2) E[1]).A) + (E[1].A.x)\n"
    );
    assert_eq!(stdout_of(&["project", "-e", NEUMANN_PLUS]), "1 - (E[1].A)\n");
}

#[test]
fn factor_splits_operator_and_problem() {
    assert_eq!(stdout_of(&["factor", "-e", "D^2 - 1"]), "-1 + D\n1 + D\n");
    let out = stdout_of(&["factor", "-e", DIRICHLET, "-e", "D", "-e", "D"]);
    assert_eq!(out, "T: D\nconditions:\n  E[1].A\nT: D\nconditions:\n  E[0]\n");
}

#[test]
fn check_reports_pass_lines() {
    let out = stdout_of(&["check", "-e", DIRICHLET]);
    assert_eq!(out, "PASS regular\nPASS T.G = 1\nPASS b[1].G = 0\nPASS b[2].G = 0\n");
    let out = stdout_of(&["check", "-e", NEUMANN_PLUS]);
    assert!(out.lines().all(|l| l.starts_with("PASS")));
    assert!(out.contains("PASS T.G = Q"));
}

#[test]
fn exit_codes() {
    // parse error -> 2
    let out = idop(&["normalize", "-e", "D^2 ("]);
    assert_eq!(out.status.code(), Some(2));
    // computation failure (non-regular problem) -> 1
    let out = idop(&["greens", "-e", r#"{"T":"D^2","conditions":["E[0].D","E[1].D"]}"#]);
    assert_eq!(out.status.code(), Some(1));
    // schema error -> 2
    let out = idop(&["greens", "-e", r#"{"oops":1}"#]);
    assert_eq!(out.status.code(), Some(2));
    // check failure -> 1
    let out = idop(&[
        "check",
        "-e",
        r#"{"T":"D^2","conditions":["E[0].D","E[1].D"]}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL regular"));
}

#[test]
fn oracle_flag_accepts_valid_products() {
    assert_eq!(stdout_of(&["mul", "--oracle", "-e", "A", "-e", "A"]), "(x.A) - (A.x)\n");
    assert_eq!(
        stdout_of(&["greens", "--oracle", "-e", DIRICHLET]),
        "(x.A) - (A.x) - ((x E[1]).A) + ((x E[1]).A.x)\n"
    );
}

#[test]
fn json_output_round_trips() {
    let js = stdout_of(&["greens", "--json", "-e", DIRICHLET]);
    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    let text = v["text"].as_str().unwrap();
    assert_eq!(stdout_of(&["normalize", "-e", text]).trim_end(), text);
}

#[test]
fn file_inputs_are_read() {
    let dir = std::env::temp_dir().join("idop-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("problem.json");
    std::fs::write(&path, DIRICHLET).unwrap();
    let out = stdout_of(&["greens", path.to_str().unwrap()]);
    assert_eq!(out, "(x.A) - (A.x) - ((x E[1]).A) + ((x E[1]).A.x)\n");
}

#[test]
fn runs_are_deterministic() {
    let corpus: &[&[&str]] = &[
        &["normalize", "-e", "A.A.A"],
        &["greens", "-e", DIRICHLET],
        &["gengreens", "-e", NEUMANN_PLUS],
        &["compat", "-e", NEUMANN_PLUS],
        &["greensfn", "--json", "-e", DIRICHLET],
        &["check", "-e", DIRICHLET],
    ];
    for args in corpus {
        let a = idop(args);
        let b = idop(args);
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
