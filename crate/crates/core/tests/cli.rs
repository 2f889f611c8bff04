//! CLI behaviour: exit codes, single-document JSON, pinned golden output.
//! Set UPDATE_GOLDEN=1 to rewrite the golden files.

use std::path::PathBuf;

use hurwitz::cli::run;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/cli").join(format!("{name}.json"))
}

/// Runs `args` with `--format json`, parses the output and compares it with
/// the golden file.
fn check_golden(name: &str, args: &[&str], code: i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.code, code, "{name}: stderr {}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).expect("one JSON document");
    assert_eq!(doc["status"], code);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let golden = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(out.stdout, golden, "{name} differs from its golden file");
}

#[test]
fn classify_prints_four_cases() {
    let out = run(&["hurwitz", "classify"]);
    assert_eq!(out.code, 0);
    for d in ["7", "3", "1", "0"] {
        assert!(out.stdout.contains(&format!("leaf δ = {d}:")), "{}", out.stdout);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["algebra", "verify", "--name", "octonions"]).code, 0);
    let bogus = run(&["algebra", "verify", "--name", "bogus"]);
    assert_eq!(bogus.code, 2);
    assert!(bogus.stdout.is_empty());
    assert!(bogus.stderr.contains("bogus"));
    assert_eq!(run(&["algebra", "verify", "--name", "octonions", "--double"]).code, 1);
    assert_eq!(run(&["no-such-command"]).code, 2);
    assert_eq!(run(&["algebra", "verify"]).code, 2);
    assert_eq!(run(&["--format", "yaml", "hurwitz", "classify"]).code, 2);
    assert_eq!(run(&["diagram", "reduce", "tests/data/missing.json"]).code, 2);
    assert_eq!(run(&["diagram", "probe", "--without", "nonexistent"]).code, 2);
    let control = run(&["diagram", "probe", "--rules", "generic", "--without", "triangle", "--bound", "6", "--trials", "200"]);
    assert_eq!(control.code, 1);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn seed_gives_identical_output() {
    let args = ["--format", "json", "--seed", "11", "diagram", "probe", "--bound", "6", "--trials", "40"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let args = ["--seed", "5", "sym", "verify", "--algebra", "quaternions", "--special"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn timing_is_opt_in() {
    let plain = run(&["--format", "json", "algebra", "props", "--name", "reals"]);
    assert!(!plain.stdout.contains("timing_ms"));
    let timed = run(&["--format", "json", "--timing", "algebra", "props", "--name", "reals"]);
    let doc: serde_json::Value = serde_json::from_str(&timed.stdout).unwrap();
    assert!(doc["timing_ms"].is_u64());
}

#[test]
fn name_aliases_agree() {
    let a = run(&["algebra", "props", "--name", "octonions"]);
    let b = run(&["algebra", "props", "--algebra", "octonions"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn golden_algebra() {
    check_golden("algebra_verify_octonions", &["algebra", "verify", "--name", "octonions"], 0);
    check_golden("algebra_verify_sedenions", &["algebra", "verify", "--name", "octonions", "--double"], 1);
    check_golden("algebra_props_quaternions", &["algebra", "props", "--name", "quaternions"], 0);
    check_golden("algebra_derivations_quaternions", &["algebra", "derivations", "--name", "quaternions"], 0);
    check_golden("algebra_show_complexes", &["algebra", "show", "--name", "complexes"], 0);
}

#[test]
fn golden_vpa() {
    check_golden("vpa_verify_octonions", &["vpa", "verify", "--from", "octonions"], 0);
    check_golden("vpa_roundtrip_quaternions", &["vpa", "roundtrip", "--from", "quaternions"], 0);
}

#[test]
fn golden_diagram() {
    check_golden("diagram_reduce_square", &["diagram", "reduce", "--rules", "generic", "tests/data/square.json"], 0);
    check_golden("diagram_reduce_theta_g2", &["diagram", "reduce", "--rules", "g2", "tests/data/theta.json"], 0);
    check_golden("diagram_eval_theta", &["diagram", "eval", "--algebra", "quaternions", "tests/data/theta.json"], 0);
    check_golden(
        "diagram_probe_g2",
        &["--seed", "5", "diagram", "probe", "--rules", "g2", "--bound", "6", "--trials", "30"],
        0,
    );
}

#[test]
fn golden_hurwitz() {
    check_golden("hurwitz_derive", &["hurwitz", "derive"], 0);
    check_golden("hurwitz_classify", &["hurwitz", "classify"], 0);
}

#[test]
fn golden_triality() {
    check_golden("triality_verify_complexes", &["triality", "verify", "--algebra", "complexes"], 0);
    check_golden("triality_roundtrip_quaternions", &["triality", "roundtrip", "--algebra", "quaternions"], 0);
}

#[test]
fn golden_sym() {
    check_golden("sym_verify_complexes", &["sym", "verify", "--algebra", "complexes", "--special"], 0);
    check_golden("sym_extract_complexes", &["sym", "extract", "--algebra", "complexes"], 0);
}

#[test]
fn golden_verify_all() {
    check_golden("verify_all", &["--seed", "2024", "verify-all"], 0);
}
