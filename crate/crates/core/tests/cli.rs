//! Black-box tests of the command line binary: report content, byte
//! determinism, exit codes, stdin piping, and the budget environment
//! override.

use std::io::Write;
use std::process::{Command, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_toricext");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: Option<&str>, envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(BIN);
    cmd.args(args)
        .env_remove("TORIC_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(text) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().expect("binary finishes");
    Run {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

const CONE: &str = r#"{"A": [[1, 1, -2]]}"#;

#[test]
fn classify_reads_stdin_and_reports() {
    let r = run(&["classify", "--input", "-"], Some(CONE), &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(
        r.stdout,
        "presentation: 1 relation(s) on 3 coordinate(s)\n\
         prime: yes\n\
         contains origin: yes\n\
         positive kernel vector: (1, 1, 1)\n\
         variety dimension: 2\n\
         hilbert basis columns (3):\n\
        \x20 (2, 0, 1)\n\
        \x20 (0, 2, 1)\n\
        \x20 (1, 1, 1)\n\
         kernel basis columns (1):\n\
        \x20 (1, 1, -2)\n\
         normalization is affine space: no\n\
         locally irreducible: not computed\n\
         check A*B = 0: ok\n\
         check B*E = 0: ok\n"
    );
}

#[test]
fn classify_reads_files() {
    let path = std::env::temp_dir().join(format!("toricext-cli-{}.json", std::process::id()));
    std::fs::write(&path, CONE).unwrap();
    let r = run(&["classify", "--input", path.to_str().unwrap()], None, &[]);
    std::fs::remove_file(&path).ok();
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("prime: yes"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for format in ["text", "json"] {
        let a = run(
            &["classify", "--input", "-", "--format", format],
            Some(CONE),
            &[],
        );
        let b = run(
            &["classify", "--input", "-", "--format", format],
            Some(CONE),
            &[],
        );
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn obstruction_exit_codes() {
    let r = run(&["obstruction", "--input", "-"], Some(CONE), &[]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("minimal obstruction value: (2, 2, 2)"));

    let trivial = r#"{"A": [[2, 1, -2]]}"#;
    let r = run(&["obstruction", "--input", "-"], Some(trivial), &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("ker B trivial"));
    assert!(r.stdout.is_empty());
}

#[test]
fn parse_failures_exit_two() {
    let r = run(&["classify", "--input", "-"], Some("nonsense"), &[]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("malformed document"));

    let r = run(&["classify", "--input", "/no/such/file.json"], None, &[]);
    assert_eq!(r.code, 2);

    let r = run(&["classify", "--input", "-"], Some(r#"{"A": []}"#), &[]);
    assert_eq!(r.code, 2);
}

#[test]
fn usage_errors_exit_two() {
    let r = run(&["no-such-command", "--input", "-"], Some(""), &[]);
    assert_eq!(r.code, 2);
}

#[test]
fn counterexample_pipes_into_decide_extension() {
    let ce = run(
        &["counterexample", "--input", "-", "--format", "json"],
        Some(CONE),
        &[],
    );
    assert_eq!(ce.code, 0, "stderr: {}", ce.stderr);
    assert!(ce.stdout.contains("\"witness\""));

    let decide = run(&["decide-extension", "--input", "-"], Some(&ce.stdout), &[]);
    assert_eq!(decide.code, 0, "stderr: {}", decide.stderr);
    assert_eq!(
        decide.stdout,
        "verdict: NotExtendable\nselections examined: 1\n"
    );

    let decide_json = run(
        &["decide-extension", "--input", "-", "--format", "json"],
        Some(&ce.stdout),
        &[],
    );
    assert!(decide_json.stdout.contains("\"verdict\": \"NotExtendable\""));
    assert!(decide_json.stdout.contains("\"selections_examined\": \"1\""));
}

#[test]
fn saturate_reports_normality() {
    let r = run(
        &["saturate", "--input", "-"],
        Some(r#"{"A": [[2, 0, 1], [0, 2, 1], [1, 1, 1]]}"#),
        &[],
    );
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("already saturated: yes"));
    assert!(r.stdout.contains("check saturation contains generators: ok"));
}

const FOUR_SELECTIONS: &str = r#"{
    "A": [[1, 1, -2]],
    "primes": ["P", "Q"],
    "classes": [["1"], ["1"]],
    "H_S": {"free_rank": 1, "torsion": []},
    "H_X": {"free_rank": 0, "torsion": []},
    "rho": [[]],
    "V": [[2, 2], [2, 2], [2, 2]]
}"#;

#[test]
fn budget_flag_and_env_override() {
    let r = run(
        &["decide-extension", "--input", "-", "--budget", "2"],
        Some(FOUR_SELECTIONS),
        &[],
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("search budget exceeded"));

    // the environment variable wins over the flag
    let r = run(
        &["decide-extension", "--input", "-", "--budget", "10"],
        Some(FOUR_SELECTIONS),
        &[("TORIC_BUDGET", "2")],
    );
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("search budget exceeded"));

    let r = run(
        &["decide-extension", "--input", "-", "--budget", "2"],
        Some(FOUR_SELECTIONS),
        &[("TORIC_BUDGET", "10")],
    );
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("verdict: NotExtendable"));
    assert!(r.stdout.contains("selections examined: 4"));

    let r = run(
        &["decide-extension", "--input", "-", "--budget", "10"],
        Some(FOUR_SELECTIONS),
        &[("TORIC_BUDGET", "zebra")],
    );
    assert_eq!(r.code, 2);
}

#[test]
fn extendable_certificates_are_reported() {
    let doc = r#"{
        "A": [[1, 1, -2]],
        "primes": ["Z1", "Z2", "W1", "W2"],
        "classes": [["-1"], ["-1"], ["1"], ["1"]],
        "H_S": {"free_rank": 1, "torsion": []},
        "H_X": {"free_rank": 1, "torsion": []},
        "rho": [["1"]],
        "V": [[2, 0, 1, 1], [0, 2, 1, 1], [1, 1, 1, 1]]
    }"#;
    let r = run(&["decide-extension", "--input", "-"], Some(doc), &[]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert!(r.stdout.contains("verdict: Extendable"));
    assert!(r.stdout.contains("class witness: (-1)"));
    assert!(r.stdout.contains("check B*U = V: ok"));
    assert!(r.stdout.contains("check class equation: ok"));
}
