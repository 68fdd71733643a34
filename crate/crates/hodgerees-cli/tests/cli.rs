//! End-to-end tests of the `hodgerees` binary: exit codes, command output,
//! determinism, and the document round trip through the real file format.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hodgerees_cli::document::{document_from_exact, AnyMhs, MhsDocument};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hodgerees"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// T⟨0⟩: one-dimensional, pure of weight zero.
const TATE_DOC: &str = r#"{
  "field": "gaussian_rational",
  "dim": 1,
  "weight_filtration": [ { "weight": 0, "basis": [["1"]] } ],
  "hodge_filtration": [ { "level": 1, "basis": [] } ]
}"#;

/// The two-dimensional extension with Hodge line spanned by `i·e1 + e2`:
/// α = 1, not R-split.
const IMAGINARY_EXTENSION_DOC: &str = r#"{
  "field": "gaussian_rational",
  "dim": 2,
  "weight_filtration": [
    { "weight": 0, "basis": [["1", "0"]] },
    { "weight": 2, "basis": [["1", "0"], ["0", "1"]] }
  ],
  "hodge_filtration": [
    { "level": 1, "basis": [["i", "1"]] }
  ]
}"#;

#[test]
fn alpha_of_the_tate_document_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "tate.json", TATE_DOC);
    let out = run(&["alpha", path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out).trim(), "0");
}

#[test]
fn alpha_of_the_imaginary_extension_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "ext.json", IMAGINARY_EXTENSION_DOC);
    let out = run(&["alpha", path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out).trim(), "1");
}

#[test]
fn report_shows_the_expected_flags_and_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let pure = write_file(dir.path(), "tate.json", TATE_DOC);
    let mixed = write_file(dir.path(), "ext.json", IMAGINARY_EXTENSION_DOC);

    let out = run(&["report", pure.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("R-split: true, alpha: 0"), "report:\n{text}");
    assert!(text.contains("c2 == alpha: true"), "report:\n{text}");
    // Pure structure: the h and t tables coincide entrywise.
    assert!(text.contains("h^{0,0} = 1"), "report:\n{text}");
    assert!(text.contains("t^{0,0} = 1"), "report:\n{text}");

    let out1 = run(&["report", mixed.to_str().unwrap()]);
    let out2 = run(&["report", mixed.to_str().unwrap()]);
    assert!(out1.status.success());
    assert_eq!(out1.stdout, out2.stdout, "report must be deterministic");
    let text = stdout_of(&out1);
    assert!(text.contains("R-split: false, alpha: 1"), "report:\n{text}");
    assert!(text.contains("c2 == alpha: true"), "report:\n{text}");
}

#[test]
fn document_round_trip_preserves_the_tables_through_the_cli() {
    // Serialize a programmatically built structure, feed the file to the
    // binary, and check that it reads back with the same α; the table-level
    // equality is asserted in-process.
    let dir = tempfile::tempdir().unwrap();
    let doc: MhsDocument = serde_json::from_str(IMAGINARY_EXTENSION_DOC).unwrap();
    let AnyMhs::Exact(h) = doc.to_structure().unwrap() else {
        panic!("expected the exact backend");
    };
    let rebuilt = document_from_exact(&h);
    let json = serde_json::to_string_pretty(&rebuilt).unwrap();
    let path = write_file(dir.path(), "roundtrip.json", &json);

    let AnyMhs::Exact(h2) = rebuilt.to_structure().unwrap() else {
        panic!("expected the exact backend");
    };
    assert_eq!(h.hodge_numbers(), h2.hodge_numbers());
    assert_eq!(h.alpha(), h2.alpha());

    let out = run(&["alpha", path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert_eq!(stdout_of(&out).trim(), "1");
}

#[test]
fn parse_and_validation_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    let out = run(&["alpha", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "missing file");

    let garbled = write_file(dir.path(), "garbled.json", "{ not json");
    let out = run(&["alpha", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "malformed JSON");
    assert!(stderr_of(&out).contains("line"), "JSON errors carry a location");

    let complex_w = IMAGINARY_EXTENSION_DOC.replacen("[\"1\", \"0\"]", "[\"i\", \"0\"]", 1);
    let bad = write_file(dir.path(), "bad_w.json", &complex_w);
    let out = run(&["alpha", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "complex weight row");
    assert!(
        stderr_of(&out).contains("weight filtration not real"),
        "stderr: {}",
        stderr_of(&out)
    );
}

#[test]
fn usage_failures_exit_1() {
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["curve0", "--punctures", "0,1x", "--pairs", ""]);
    assert_eq!(out.status.code(), Some(1), "malformed literal is a usage error");

    let out = run(&["curve0", "--punctures", "0,1", "--pairs", "inf"]);
    assert_eq!(out.status.code(), Some(1), "pair without a colon");

    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "tate.json", TATE_DOC);
    let out = bin()
        .args(["alpha", path.to_str().unwrap()])
        .env("HODGEREES_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "invalid HODGEREES_TOL");
}

#[test]
fn tolerance_env_var_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "tate.json", TATE_DOC);
    let out = bin()
        .args(["alpha", path.to_str().unwrap()])
        .env("HODGEREES_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "0");
}

#[test]
fn verify_passes_on_a_small_run_and_on_zero_cases() {
    let out = run(&["verify", "--seed", "1", "--cases", "4"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("cases=4"), "got: {text}");
    assert!(text.contains("failures=0"), "got: {text}");

    let out = run(&["verify", "--cases", "0"]);
    assert!(out.status.success(), "zero cases is a vacuous pass");
    assert!(stdout_of(&out).contains("failures=0"));
}

#[test]
fn curve0_reproduces_the_four_point_examples() {
    let out = run(&["curve0", "--punctures", "0,1", "--pairs", "inf:2"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("alpha_1: criterion = 1"), "got: {text}");
    assert!(text.contains("methods agree: true"), "got: {text}");

    let out = run(&["curve0", "--punctures", "0,1", "--pairs", "inf:0.5+0.7i"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("alpha_1: criterion = 0"), "got: {text}");
    assert!(text.contains("methods agree: true"), "got: {text}");
}

#[test]
fn curve_validation_failures_exit_2() {
    let out = run(&["curve0", "--punctures", "0,0", "--pairs", "inf:2"]);
    assert_eq!(out.status.code(), Some(2), "coincident punctures");

    let out = run(&["curve1", "--tau", "-i", "--punctures", "0.1", "--pairs", "0.2:0.3"]);
    assert_eq!(out.status.code(), Some(2), "tau in the lower half-plane");
    assert!(stderr_of(&out).contains("imaginary part"), "stderr: {}", stderr_of(&out));
}

#[test]
fn curve1_methods_agree_on_the_documented_example() {
    let out = run(&["curve1", "--tau", "i", "--punctures", "0.1,0.3", "--pairs", "0.5:0.7"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("methods agree: true"), "got: {text}");
    assert!(text.contains("period matrix (2 x 4"), "got: {text}");
}

#[test]
fn scan_writes_a_deterministic_grid_with_the_split_line_on_re_half() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scan.csv");
    let args_base = [
        "scan-m04",
        "--re-min",
        "0",
        "--re-max",
        "1",
        "--im-min",
        "-0.5",
        "--im-max",
        "0.5",
        "--steps",
        "3",
        "--out",
    ];

    let mut args: Vec<&str> = args_base.to_vec();
    let out_str = out_path.to_str().unwrap().to_string();
    args.push(&out_str);
    let out = run(&args);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let first = std::fs::read_to_string(&out_path).unwrap();

    // Header plus steps² rows.
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines.len(), 1 + 9);
    assert_eq!(lines[0], "re,im,alpha1,flag");

    // α₁ = 0 exactly on the re = 0.5 column; this grid has no degenerate
    // points (Q = 0 and Q = 1 are punctures only at im = 0, which this grid
    // hits at re ∈ {0, 1} — those are degenerate and flagged).
    for line in &lines[1..] {
        let cells: Vec<&str> = line.split(',').collect();
        let re: f64 = cells[0].parse().unwrap();
        match cells[3] {
            "ok" => {
                let alpha: usize = cells[2].parse().unwrap();
                assert_eq!(alpha == 0, (re - 0.5).abs() < 1e-9, "line: {line}");
            }
            "degenerate" => {
                assert!(cells[2].is_empty());
                let im: f64 = cells[1].parse().unwrap();
                assert_eq!(im, 0.0, "degenerate only where Q hits a puncture");
            }
            other => panic!("unexpected flag {other}"),
        }
    }
    // Q = 0 and Q = 1 lie on this grid: exactly two degenerate rows.
    assert_eq!(first.matches("degenerate").count(), 2);

    // Re-running (with a different worker count) yields identical bytes.
    let mut args2: Vec<&str> = args_base.to_vec();
    args2.push(&out_str);
    args2.extend_from_slice(&["--workers", "2"]);
    let out = run(&args2);
    assert!(out.status.success());
    let second = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(first, second, "scan output must be deterministic");
}

#[test]
fn scan_rejects_an_unwritable_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("no-such-dir").join("scan.csv");
    let out = run(&[
        "scan-m04",
        "--steps",
        "2",
        "--out",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("cannot write"), "stderr: {}", stderr_of(&out));
}
