use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_almost-invariant"));
    c.env_remove("ALMOST_INVARIANT_THREADS");
    c
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(sub: &str, input: &Path) -> Output {
    bin().args([sub, "--in"]).arg(input).output().unwrap()
}

fn certificate(o: &Output) -> Value {
    let v: Value = serde_json::from_slice(&o.stdout).expect("certificate JSON on stdout");
    v["certificate"].clone()
}

fn verify(cert: &Path, input: &Path) -> Output {
    bin().arg("verify").arg("--cert").arg(cert).arg("--in").arg(input).output().unwrap()
}

#[test]
fn every_example_runs_and_verifies() {
    let dir = TempDir::new().unwrap();
    for (sub, file) in [
        ("wagner", "wagner_single.json"),
        ("wagner", "wagner_axes.json"),
        ("wagner", "wagner_gf4_semilinear.json"),
        ("operator", "operator_swap.json"),
        ("galois-subspace", "galois_subspace_gf4.json"),
        ("galois-operator", "galois_operator_gf9.json"),
        ("set-majority", "set_majority_swap.json"),
    ] {
        let input = example(file);
        let cert = dir.path().join(format!("{file}.cert"));
        let o = bin().args([sub, "--quiet", "--in"]).arg(&input).arg("--out").arg(&cert).output().unwrap();
        assert_eq!(code(&o), 0, "{file}: {}", stderr(&o));
        assert!(o.stdout.is_empty() && o.stderr.is_empty(), "{file}: --out and --quiet leave no output");
        let v = verify(&cert, &input);
        assert_eq!(code(&v), 0, "{file}: {}", stderr(&v));
    }
}

#[test]
fn single_subspace_is_its_own_approximation() {
    let o = run("wagner", &example("wagner_single.json"));
    assert_eq!(code(&o), 0);
    let c = certificate(&o);
    assert_eq!(c["w"], serde_json::json!([[1, 0, 1], [0, 1, 1]]));
    assert_eq!(c["dim_w"], 2);
    assert!(stderr(&o).starts_with("wagner"), "summary line on stderr: {}", stderr(&o));
}

#[test]
fn swapped_point_has_empty_majority_and_refinement() {
    let o = run("set-majority", &example("set_majority_swap.json"));
    assert_eq!(code(&o), 0);
    let c = certificate(&o);
    assert_eq!(c["r"], 1);
    assert_eq!(c["a0"], serde_json::json!([]));
    assert_eq!(c["symdiff"], 1);
    assert_eq!(c["refined"]["a0"], serde_json::json!([0, 1]));
    assert_eq!(c["refined"]["strict"], true);
}

#[test]
fn frobenius_conjugate_lines_descend_to_zero() {
    let o = run("galois-subspace", &example("galois_subspace_gf4.json"));
    assert_eq!(code(&o), 0);
    let c = certificate(&o);
    assert_eq!(c["w"], serde_json::json!([]));
    assert_eq!(c["w0"], serde_json::json!([]));
}

#[test]
fn malformed_json_reports_position() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", "{\n  \"kind\": \"wagner\",\n  \"field\": {\"p\": 2}\n  \"ambient_dim\": 2\n}\n");
    let o = run("wagner", &p);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn schema_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let unknown = write(&dir, "u.json", r#"{"field": {"p": 2}, "ambient_dim": 2, "subspaces": [[[1, 0]]], "extra": 1}"#);
    assert_eq!(code(&run("wagner", &unknown)), 3);
    let wrong_kind = write(&dir, "k.json", r#"{"kind": "operator", "field": {"p": 2}, "ambient_dim": 2, "subspaces": [[[1, 0]]]}"#);
    assert_eq!(code(&run("wagner", &wrong_kind)), 3);
    let out_of_field = write(&dir, "f.json", r#"{"field": {"p": 3}, "ambient_dim": 2, "subspaces": [[[1, 3]]]}"#);
    let o = run("wagner", &out_of_field);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let not_prime = write(&dir, "p.json", r#"{"field": {"p": 4}, "ambient_dim": 2, "subspaces": [[[1, 0]]]}"#);
    assert_eq!(code(&run("wagner", &not_prime)), 3);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run("wagner", &missing)), 3);
}

#[test]
fn usage_errors_exit_3_and_help_exits_0() {
    assert_eq!(code(&bin().arg("wagner").output().unwrap()), 3);
    assert_eq!(code(&bin().arg("frobnicate").output().unwrap()), 3);
    assert_eq!(code(&bin().arg("--help").output().unwrap()), 0);
    assert_eq!(code(&bin().arg("--version").output().unwrap()), 0);
}

#[test]
fn hypothesis_violations_exit_2() {
    let dir = TempDir::new().unwrap();
    let far = write(
        &dir,
        "far.json",
        r#"{"field": {"p": 2}, "ambient_dim": 4, "subspaces": [[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 1, 0], [0, 0, 0, 1]]], "r": 1}"#,
    );
    let o = run("wagner", &far);
    assert_eq!(code(&o), 2, "{}", stderr(&o));

    let char_divides = write(
        &dir,
        "op.json",
        r#"{"field": {"p": 2}, "d": 2, "d_prime": 2,
            "generators": [{"v": [[0, 1], [1, 0]], "v_prime": [[0, 1], [1, 0]]}],
            "t": [[1, 0], [0, 0]]}"#,
    );
    let o = run("operator", &char_divides);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

fn tampered(dir: &TempDir, original: &Value, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v = original.clone();
    edit(&mut v);
    write(dir, "tampered.json", &serde_json::to_string_pretty(&v).unwrap())
}

#[test]
fn verify_rejects_tampering_and_names_the_field() {
    let dir = TempDir::new().unwrap();
    let input = example("wagner_axes.json");
    let o = run("wagner", &input);
    assert_eq!(code(&o), 0);
    let original: Value = serde_json::from_slice(&o.stdout).unwrap();

    let bound = tampered(&dir, &original, |v| v["certificate"]["bound_dim"] = Value::from(5));
    let o = verify(&bound, &input);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("bound_dim"), "{}", stderr(&o));

    let moved = tampered(&dir, &original, |v| v["certificate"]["w"] = serde_json::json!([[1, 0]]));
    let o = verify(&moved, &input);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("invariance"), "{}", stderr(&o));

    let h = tampered(&dir, &original, |v| v["certificate"]["h_table"] = serde_json::json!([1, 1]));
    let o = verify(&h, &input);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("h_table"), "{}", stderr(&o));

    let other = example("wagner_single.json");
    let o = verify(&bound, &other);
    assert_eq!(code(&o), 1, "certificate checked against a different instance");
}

#[test]
fn conjecture_writes_reproducible_reports() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let args = ["conjecture", "--dim", "5", "--group-cap", "6", "--trials", "30", "--seed", "11", "--quiet", "--out-dir"];
    let o = bin().args(args).arg(a.path()).env("ALMOST_INVARIANT_THREADS", "1").output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = bin().args(args).arg(b.path()).env("ALMOST_INVARIANT_THREADS", "3").output().unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for name in ["report.csv", "summary.json"] {
        let x = fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(name)).unwrap(), "{name} differs");
    }
    let csv = fs::read_to_string(a.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 31);
    let summary: Value = serde_json::from_str(&fs::read_to_string(a.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["trials"], 30);
}

#[test]
fn conjecture_rejects_bad_settings() {
    let dir = TempDir::new().unwrap();
    let o = bin().args(["conjecture", "--trials", "1", "--out-dir"]).arg(dir.path()).env("ALMOST_INVARIANT_THREADS", "zero").output().unwrap();
    assert_eq!(code(&o), 3);
    let o = bin().args(["conjecture", "--p", "4", "--out-dir"]).arg(dir.path()).output().unwrap();
    assert_eq!(code(&o), 3);
    let o = bin().args(["conjecture", "--candidates", "r^3", "--out-dir"]).arg(dir.path()).output().unwrap();
    assert_eq!(code(&o), 3);
}
