use std::path::{Path, PathBuf};

use superform::format::transform_from_text;
use superform::group::{act, TransformPair};
use superform::reduction::{canonical_matrix, CanonicalLabel, Tag};

fn forms() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("forms")
}

fn form(name: &str) -> String {
    forms().join(name).display().to_string()
}

fn run(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("superform").chain(args.iter().copied());
    let code = superform_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn classify_b5() {
    let (code, out, _) = run(&["classify", &form("b5.form")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("irreducible: B5\n"), "{out}");
    assert!(out.contains("residual: 0\n"));
}

#[test]
fn classify_writes_replayable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("b6.witness");
    let (code, _, _) = run(&["classify", &form("b6.form"), "--witness", w.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (x, y) = transform_from_text(&std::fs::read_to_string(&w).unwrap(), "w").unwrap();
    let b6 = canonical_matrix(&CanonicalLabel::new(Tag::B6).unwrap()).unwrap();
    let t = TransformPair::new(x, y).unwrap();
    assert_eq!(act(&b6, &t).unwrap(), b6);
}

#[test]
fn irrational_alpha_needs_approximation() {
    let (code, out, _) = run(&["classify", &form("b2_sqrt2.form")]);
    assert_eq!(code, 0);
    assert!(out.contains("B2(alpha^2=2) + TrivEven"));
    assert!(out.contains("witness: approximate"));
    let (code, _, err) = run(&["classify", &form("b2_sqrt2.form"), "--mode", "exact"]);
    assert_eq!(code, 2);
    assert!(err.contains("irrational"), "{err}");
}

#[test]
fn equivalence_exit_codes() {
    assert_eq!(run(&["equivalent", &form("b2_2.form"), &form("b3.form")]).0, 1);
    assert_eq!(run(&["equivalent", &form("b2_2.form"), &form("b2_2.form")]).0, 0);
    assert_eq!(run(&["equivalent", &form("b5.form"), &form("b1.form")]).0, 1);
    assert_eq!(run(&["equivalent", &form("inhomogeneous.form"), &form("b1.form")]).0, 0);
}

#[test]
fn input_errors_have_positions() {
    let (code, _, err) = run(&["classify", &form("bad_scalar.form")]);
    assert_eq!(code, 2);
    assert!(err.contains("bad_scalar.form:6:7"), "{err}");
    let (code, _, err) = run(&["invariants", &form("bad_shape.form")]);
    assert_eq!(code, 2);
    assert!(err.contains("bad_shape.form:4:"), "{err}");
    assert_eq!(run(&["classify", &form("missing.form")]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn table_verifies_against_golden() {
    let (code, out, _) = run(&["table", "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 8);
    assert!(out.contains("B2(alpha=1+i)    k=2 2l=2 rank=2 isotropic=false P=[1, 0, 2*i]"));
}

#[test]
fn osp_tables_match_golden() {
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/osp_tables.txt")).unwrap();
    let (code, out, _) = run(&["osp-demo", "--table-only"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden);
}

#[test]
fn osp_demo_with_fock_checks() {
    let (code, out, _) = run(&["osp-demo", "--fock-degree", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("25/25 pairs pass"));
    assert!(out.contains("adjoint ideal: ok"));
    assert!(out.contains("fock N=6 inhomogeneous: representation 0 defects"));
    let (code, out, _) = run(&["osp-demo", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["adjoint_ideal"], true);
}

#[test]
fn algebra_and_invariants() {
    let (code, out, _) = run(&["algebra", &form("inhomogeneous.json"), "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[b1, b2] = 1 * K\n[b1, a] = 1 * kappa\n[a, a] = 1 * K\naxioms: ok\n");
    let (code, out, _) = run(&["invariants", &form("b2_i.form"), "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["signature"]["p0"], "-1");
    assert_eq!(v["relation_sign"], 1);
}

#[test]
fn selftest_is_deterministic() {
    let a = run(&["selftest", "--seed", "9"]);
    let b = run(&["selftest", "--seed", "9"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a, b);
}

#[test]
fn corrupted_golden_file_fails_with_diff() {
    let dir = tempfile::tempdir().unwrap();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for name in ["table.txt", "osp_tables.txt"] {
        std::fs::copy(golden.join(name), dir.path().join(name)).unwrap();
    }
    let path = dir.path().join("osp_tables.txt");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("[E-, F-] = kappa*E-", "[E-, F-] = -kappa*E-")).unwrap();
    let (code, out, _) = run(&["selftest", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("-  [E-, F-] = -kappa*E-"), "{out}");
    assert!(out.contains("+  [E-, F-] = kappa*E-"));
    assert!(out.contains("golden files: 1/2 passed"));
}
