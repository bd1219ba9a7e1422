//! The `cll` binary end to end: exit codes, output shapes and the JSON
//! schemas in `docs/`.

use std::process::Command;

use cll::testkit::{GenConfig, TermGen};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cll(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_cll")).args(args).output().expect("spawn cll");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/../../docs/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errs: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errs.is_empty(), "{errs:?}\n{doc:#}");
}

#[test]
fn documented_invocations() {
    assert_eq!(cll(&["refines", "a.0", "a.0 \\/ b.0"]).code, 0);
    let r = cll(&["refines", "tau.(a.0 \\/ b.0)", "tau.a.0 [] tau.b.0"]);
    assert_eq!(r.code, 1);
    let v = json(&r);
    assert_eq!(v["holds"], false);
    assert!(v["witness"].is_object());
    assert_valid(&schema("witness"), &v);
    let r = cll(&["normalize", "a.bot"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "bot\n"));
}

#[test]
fn parse_echoes_canonical_form() {
    let r = cll(&["parse", "a.0 [] (b.0 [] c.0)"]);
    assert_eq!(r.code, 0);
    let again = cll(&["parse", r.stdout.trim()]);
    assert_eq!(again.stdout, r.stdout);
    assert_eq!(cll(&["parse", "⊥ ∨ a.0"]).stdout, "bot \\/ a.0\n");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    for args in [&["parse", "a.("][..], &["parse"], &["nope"], &["refines", "a.0"], &["lts", "0", "--format", "png"]] {
        let r = cll(args);
        assert_eq!(r.code, 2, "{args:?}");
        assert!(!r.stderr.is_empty());
    }
    assert_eq!(cll(&["parse", "--file", "/nonexistent/terms.txt"]).code, 2);
}

#[test]
fn state_limit_exits_3() {
    let r = cll(&["lts", "a.b.c.d.0 |[]| a.b.c.d.0", "--max-states", "5"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("limit"));
}

#[test]
fn lts_exports() {
    let r = cll(&["lts", "tau.a.0 [] b.0"]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    assert_valid(&schema("lts"), &v);
    assert_eq!(v["states"][0]["term"], "tau.a.0 [] b.0");
    let dot = cll(&["lts", "tau.a.0 [] b.0", "--format", "dot"]);
    assert!(dot.stdout.starts_with("digraph"));
    assert!(dot.stdout.contains("style=dashed"));
}

#[test]
fn equiv_reports_direction() {
    let r = cll(&["equiv", "a.0", "a.0 \\/ b.0"]);
    assert_eq!(r.code, 1);
    let v = json(&r);
    assert_valid(&schema("witness"), &v);
    assert_eq!(v["failed_direction"], "rhs_below_lhs");
    let r = cll(&["equiv", "a.0 [] b.0", "b.0 [] a.0"]);
    assert_eq!(r.code, 0);
    assert_valid(&schema("witness"), &json(&r));
    let r = cll(&["refines", "--stable", "a.0", "a.0 [] b.0"]);
    assert_eq!(r.code, 1);
    assert_valid(&schema("witness"), &json(&r));
}

#[test]
fn prove_with_trace_and_check() {
    let r = cll(&["prove", "a.bot [] a.0", "a.(bot \\/ 0)", "--trace", "--check"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("holds\n"));
    assert!(r.stdout.contains("STEP 1:"));
    assert!(r.stdout.contains("GOAL:"));
    assert!(r.stdout.ends_with("check: valid\n"));

    let r = cll(&["prove", "a.bot [] a.0", "a.(bot \\/ 0)", "--trace", "--check", "--format", "json"]);
    let v = json(&r);
    assert_valid(&schema("trace"), &v["trace"]);
    assert_eq!(v["check"]["valid"], true);

    let r = cll(&["prove", "a.(bot \\/ 0)", "a.bot [] a.0", "--format", "json"]);
    assert_eq!(r.code, 1);
    let v = json(&r);
    assert_eq!(v["trace"], Value::Null);
    assert_valid(&schema("witness"), &v["witness"]);
}

#[test]
fn normalize_trace_json() {
    let r = cll(&["normalize", "(a.0 \\/ b.0) /\\ a.c.0", "--trace", "--format", "json"]);
    assert_eq!(r.code, 0);
    let v = json(&r);
    assert_valid(&schema("trace"), &v["trace"]);
    assert_eq!(v["trace"]["goal"]["relation"], "=");
}

#[test]
fn terms_from_file() {
    let dir = std::env::temp_dir().join(format!("cll-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("pair.txt");
    std::fs::write(&f, "# lhs then rhs\na.0\n\na.0 \\/ b.0\n").unwrap();
    let r = cll(&["refines", "--file", f.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(json(&r)["rhs"], "a.0 \\/ b.0");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn selftest_is_deterministic_across_jobs() {
    let a = cll(&["selftest", "--seed", "7", "--count", "8"]);
    let b = cll(&["selftest", "--seed", "7", "--count", "8", "--jobs", "3"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.lines().all(|l| !l.starts_with("FAIL")));
}

#[test]
fn random_outputs_match_schemas() {
    let (lts, wit, tr) = (schema("lts"), schema("witness"), schema("trace"));
    let mut g = TermGen::new(GenConfig::default().with_seed(31).with_max_degree(8));
    for _ in 0..25 {
        let (t, s) = (g.term().to_string(), g.term().to_string());
        let r = cll(&["lts", &t]);
        assert_valid(&lts, &json(&r));
        let r = cll(&["refines", &t, &s]);
        assert_valid(&wit, &json(&r));
        let r = cll(&["equiv", &t, &s]);
        assert_valid(&wit, &json(&r));
        let r = cll(&["prove", &t, &s, "--trace", "--check", "--format", "json"]);
        let v = json(&r);
        if v["holds"] == true {
            assert_valid(&tr, &v["trace"]);
            assert_eq!(v["check"]["valid"], true);
        } else {
            assert_valid(&wit, &v["witness"]);
        }
        assert_eq!(cll(&["prove", &t, &s, "--format", "json"]).stdout, cll(&["prove", &t, &s, "--format", "json"]).stdout);
    }
}
