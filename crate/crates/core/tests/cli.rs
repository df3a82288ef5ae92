use std::process::{Command, Output};

fn vunify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vunify")).args(args).output().expect("run vunify")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn variants_of_xor_sum() {
    let out = vunify(&["variants", "xor", "X * Y"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("Variant #").count(), 7);
    assert!(text.contains("Variant #1\n[ElemXor]: #1:[ElemXor] * #2:[ElemXor]\nX --> #1:[ElemXor]\nY --> #2:[ElemXor]\n"));
}

#[test]
fn variants_bound_is_reported() {
    let out = vunify(&["variants", "xor", "X * Y", "--bound", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("Variant #").count(), 2);
    assert!(text.contains("bound 2 reached"));
}

#[test]
fn fast_unify_prints_one_unifier() {
    let out = vunify(&["unify", "xor", "X =? U * V", "--fast"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "Unifier #1\nX --> #1:[ElemXor] * #2:[ElemXor]\nU --> #1:[ElemXor]\nV --> #2:[ElemXor]\n\n"
    );
}

#[test]
fn equations_may_span_arguments() {
    let out = vunify(&["unify", "xor", "X =? a", "/\\", "Y =? X * b", "--post", "--quotient"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "Unifier #1\nX --> a\nY --> a * b\n\n");
}

#[test]
fn json_output() {
    let out = vunify(&["unify", "xor", "X =? U * V", "--fast", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["unifier_index"], 1);
    let bindings = arr[0]["bindings"].as_array().unwrap();
    assert_eq!(bindings.len(), 3);
    assert_eq!(bindings[0]["var"], "X");
    assert_eq!(bindings[0]["sort"], "[ElemXor]");
    assert_eq!(bindings[0]["term"], "#1:[ElemXor] * #2:[ElemXor]");
}

#[test]
fn no_unifier_exit_code() {
    let out = vunify(&["unify", "xor", "a =? b"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "No unifiers.\n");
}

#[test]
fn input_errors_exit_code() {
    assert_eq!(vunify(&["unify", "xor", "X =? (a"]).status.code(), Some(2));
    assert_eq!(vunify(&["unify", "no-such-theory.vt", "X =? a"]).status.code(), Some(2));
    assert_eq!(vunify(&["unify", "xor", "X =? a", "--depth-cap", "x"]).status.code(), Some(2));
}

#[test]
fn timeout_exit_code() {
    let out = vunify(&["unify", "xor", "V1 * V2 =? f2(V3 * V4, f1(V3 * V5))", "--post", "--timeout", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn custom_theory_requires_depth_cap() {
    let dir = std::env::temp_dir().join(format!("vunify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("xor-copy.vt");
    let bundled = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/theories/xor.vt")).unwrap();
    std::fs::write(&path, format!("{bundled}\n")).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(vunify(&["unify", p, "X =? U * V", "--fast"]).status.code(), Some(2));
    let out = vunify(&["unify", p, "X =? U * V", "--fast", "--depth-cap", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("Unifier #").count(), 1);
    let plain = concat!(env!("CARGO_MANIFEST_DIR"), "/theories/xor.vt");
    assert_eq!(vunify(&["unify", plain, "X =? U * V", "--fast"]).status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_writes_csv() {
    let dir = std::env::temp_dir().join(format!("vunify-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let suite = dir.join("suite.toml");
    std::fs::write(
        &suite,
        "theory = \"xor\"\n\n[[problem]]\nid = \"P1\"\nequations = \"V1 =? V2 * V3\"\nexpected = { plain = 7, fast = 1 }\n",
    )
    .unwrap();
    let csv = dir.join("out.csv");
    let out = vunify(&[
        "bench",
        suite.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
        "--modes",
        "plain,fast",
        "--timeout",
        "30",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("ok"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("P1,xor,V1 =? V2 * V3,7,"));
    assert!(row.ends_with(",ok"));
    std::fs::remove_dir_all(&dir).unwrap();
}
