use serde_json::Value;
use tatereg::cli::{run_command, run_to_string, EXIT_MISMATCH, EXIT_OK, EXIT_UNCERTIFIED, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String) {
    run_to_string(std::iter::once("tatereg").chain(args.iter().copied()))
}

fn head(v: &Value, n: usize) -> Vec<i64> {
    v["coefficients"].as_array().unwrap()[..n].iter().map(|x| x.as_i64().unwrap()).collect()
}

fn run_json(args: &[&str]) -> Value {
    let (code, out) = run(args);
    assert_eq!(code, EXIT_OK, "{out}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn j_header_coefficients() {
    let v = run_json(&["series", "--name", "j", "--order", "3", "--p", "7", "--precision", "8"]);
    assert_eq!(v["val"], -1);
    assert_eq!(head(&v, 3), [1, 744, 196884]);
    assert_eq!(v["cross_check"], true);
}

#[test]
fn coefficients_are_reduced_to_the_certified_precision() {
    let v = run_json(&["series", "--name", "j", "--order", "3", "--p", "7", "--precision", "2"]);
    // 744 ≡ 9 and 196884 ≡ 2 mod 49
    assert_eq!(head(&v, 3), [1, 9, 2]);
}

#[test]
fn check_cp_seven_holds() {
    let v = run_json(&["check-cp", "--p", "7"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["k_p"], "0");
}

#[test]
fn ex1_bound_is_three() {
    let v = run_json(&["bound", "--family", "ex1", "--k", "5", "--p", "11", "--order", "99"]);
    assert_eq!(v["bound"], 3);
    assert_eq!(v["eis_image_basis"].as_array().unwrap().len(), 3);
    assert_eq!(v["bound_valid"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bound", "--family", "ex9", "--p", "11"]).0, EXIT_USAGE);
    assert_eq!(run(&["check-conditions", "--family", "ex1", "--k", "5", "--p", "5"]).0, EXIT_USAGE);
    assert_eq!(run(&["series", "--name", "j", "--p", "9", "--order", "3"]).0, EXIT_USAGE);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["bound", "--family", "k3", "--p", "7", "--fibers", "z9"]).0, EXIT_USAGE);
    assert_eq!(run(&["decompose", "--name", "j", "--p", "7", "--order", "10", "--format", "csv"]).0, EXIT_OK);
    assert_eq!(run(&["reproduce", "--format", "json", "--manifest", "/nonexistent.json"]).0, EXIT_MISMATCH);
}

#[test]
fn uncertified_precision_exits_three() {
    let (code, out) = run(&["decompose", "--name", "e3b", "--p", "7", "--order", "60", "--precision", "1", "--guard", "0"]);
    assert_eq!(code, EXIT_UNCERTIFIED, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"]["uncertified_at"], 7);
    let v = run_json(&["decompose", "--name", "e3b", "--p", "7", "--order", "60"]);
    assert_eq!(v["eisenstein"], true);
}

#[test]
fn residue_command_agrees() {
    let v = run_json(&["residue", "--a", "1", "--b", "2", "--r", "5", "--p", "7", "--order", "30"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["dlog_pass"], true);
    assert_eq!(run(&["residue", "--a", "1", "--b", "2", "--r", "7", "--p", "7"]).0, EXIT_USAGE);
}

#[test]
fn reports_are_deterministic() {
    let args = ["bound", "--family", "k3", "--p", "7", "--order", "49", "--fibers", "1,-1", "--exclude=1,-1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["excluded"][0]["excluded"], true);
}

#[test]
fn csv_tables() {
    let (code, out) = run(&["check-conditions", "--family", "ex1", "--k", "5", "--p", "7..13", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "family,k,p,a_prime,b_prime,k_p,cp1_ok,ordinary");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("ex1,5,13,true,"));
}

#[test]
fn manifests() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"name": "empty", "jobs": []}"#).unwrap();
    let (code, out) = run(&["reproduce", "--manifest", empty.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(0), Some(0)));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name": "bad", "jobs": [{"id": "j", "argv": ["series", "--name", "j", "--p", "7", "--order", "3", "--precision", "8"],
            "fixtures": [{"pointer": "/coefficients/1", "value": 745, "provenance": "derived: deliberately wrong"}]}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["reproduce", "--manifest", bad.to_str().unwrap()]).0, EXIT_MISMATCH);

    let unsourced = dir.path().join("unsourced.json");
    std::fs::write(
        &unsourced,
        r#"{"name": "u", "jobs": [{"id": "j", "argv": ["check-cp", "--p", "7"],
            "fixtures": [{"pointer": "/holds", "value": true, "provenance": "trust me"}]}]}"#,
    )
    .unwrap();
    assert_eq!(run(&["reproduce", "--manifest", unsourced.to_str().unwrap()]).0, EXIT_MISMATCH);
}

#[test]
fn bundled_manifest_passes() {
    let (code, out) = run(&["reproduce", "--jobs", "4"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() >= 15);
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["series", "--name", "e3a", "--p", "11", "--order", "30", "--cache-dir", d];
    let first = run(&args);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    assert_eq!(run(&args), first);
    let path = files[0].as_ref().unwrap().path();
    std::fs::write(&path, b"garbage").unwrap();
    assert_eq!(run(&args), first);
    assert_ne!(std::fs::read(&path).unwrap(), b"garbage");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let code = run_command([
        "tatereg",
        "check-conditions",
        "--family",
        "k3",
        "--p",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["k_p"], "432");
}
