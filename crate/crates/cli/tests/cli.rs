use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn corpus() -> Vec<(String, PathBuf)> {
    let mut out: Vec<_> = std::fs::read_dir(root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pd"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), p))
        .collect();
    out.sort();
    out
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khovanov")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Runs with `--format json`, checks success and validates against the schema.
fn json(schema: &str, args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let value: Value = serde_json::from_slice(&o.stdout).unwrap();
    validate(schema, &value);
    value
}

fn validate(schema: &str, value: &Value) {
    let path = root().join("schemas").join(format!("{schema}-1.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", path.display());
}

fn fixture(name: &str) -> Value {
    let path = root().join("corpus").join(format!("{name}.expected.json"));
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    validate("fixture", &value);
    value
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn unknot_table() {
    let o = run(&["homology", "--pd", "U"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("diagram: U\nn+ = 0, n- = 0\n"), "{text}");
    assert!(text.contains("  1  Z") && text.contains(" -1  Z"), "{text}");
}

#[test]
fn corpus_matches_fixtures() {
    for (name, path) in corpus() {
        let expected = fixture(&name);
        let path = path.to_str().unwrap();
        let h = json("homology", &["homology", path]);
        assert_eq!(h["groups"], expected["homology"], "{name}");
        assert_eq!(h["crossings"], expected["crossings"], "{name}");
        assert_eq!(h["n_plus"], expected["n_plus"], "{name}");
        assert_eq!(h["n_minus"], expected["n_minus"], "{name}");
        let j = json("jones", &["jones", path]);
        assert_eq!(j["jones"], expected["jones"], "{name}");
        let both = json("jones", &["jones", "--oracle", path]);
        assert_eq!(both["kauffman"], expected["jones"], "{name}");
        assert_eq!(both["difference"], serde_json::json!({}), "{name}");
    }
}

#[test]
fn right_trefoil_jones() {
    let o = run(&["jones", root().join("corpus/trefoil-right.pd").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "q^2 + q^6 - q^8\n");
}

#[test]
fn input_errors_exit_one() {
    for bad in ["X(1,2,3)", "X(1,1,2,2) X(3", "", "X(1,2,3,4)"] {
        let o = run(&["homology", "--pd", bad]);
        assert_eq!(code(&o), 1, "{bad:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error"), "{bad:?}");
    }
    assert_eq!(code(&run(&["homology", "/no/such/file.pd"])), 1);
    assert_eq!(code(&run(&["homology", "--bogus"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn stdin_is_read_when_no_input_is_given() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_khovanov"))
        .args(["--format", "json", "jones"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let pd = std::fs::read_to_string(root().join("corpus/figure-eight.pd")).unwrap();
    child.stdin.take().unwrap().write_all(pd.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["jones"], fixture("figure-eight")["jones"]);
}

#[test]
fn cube_reports() {
    let one = stdout(&run(&["cube", "1"]));
    assert!(one.contains("M(1, 0): a single point, Euler count 1"), "{one}");
    let two = stdout(&run(&["cube", "2"]));
    assert!(two.contains("M(11, 00): a closed interval: 2 endpoints, Euler count 1"), "{two}");
    let three = run(&["cube", "3"]);
    assert_eq!(code(&three), 0);
    let text = stdout(&three);
    assert!(text.starts_with("C(3): 8 objects, 12 morphisms\n"), "{text}");
    assert!(text.contains("M(111, 000): a closed hexagonal disk: 6 vertices, 6 edges, Euler count 1"), "{text}");
    assert!(text.contains("Floer complex acyclic"), "{text}");
    let v = json("cube", &["cube", "4"]);
    assert_eq!(v["acyclic"], true);
    assert_eq!(v["objects"], 16);
    assert_eq!(v["morphisms"], 32);
}

#[test]
fn resource_limits_exit_two() {
    assert_eq!(code(&run(&["cube", "11"])), 2);
    assert_eq!(code(&run(&["cube", "0"])), 1);
    let trefoil = root().join("corpus/trefoil-right.pd");
    assert_eq!(code(&run(&["--cap", "2", "homology", trefoil.to_str().unwrap()])), 2);
}

fn skeleton_of(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    validate("skeleton", &v);
    v
}

fn square() -> Value {
    serde_json::json!({
        "schema": "khovanov-skeleton/1",
        "objects": [
            {"name": "11", "index": 2},
            {"name": "01", "index": 1},
            {"name": "10", "index": 1},
            {"name": "00", "index": 0}
        ],
        "morphisms": [
            {"source": "11", "target": "01", "points": [1]},
            {"source": "11", "target": "10", "points": [1]},
            {"source": "01", "target": "00", "points": [1]},
            {"source": "10", "target": "00", "points": [-1]}
        ]
    })
}

#[test]
fn flowcheck_balanced_square() {
    let f = write_temp(&square().to_string());
    let o = run(&["flowcheck", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("all 1 index-2 pairs balanced"), "{text}");
    assert!(text.contains("Floer homology: 0"), "{text}");
    let v = json("flowcheck", &["flowcheck", f.path().to_str().unwrap()]);
    assert_eq!(v["balanced"], true);
}

#[test]
fn flowcheck_flags_a_corrupted_sign() {
    let mut s = square();
    s["morphisms"][3]["points"] = serde_json::json!([1]);
    let f = write_temp(&s.to_string());
    let o = run(&["flowcheck", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("UNBALANCED"));
    let o = run(&["--format", "json", "flowcheck", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    validate("flowcheck", &v);
    assert_eq!(v["balanced"], false);
}

#[test]
fn flowcheck_rejects_malformed_skeletons() {
    let mut s = square();
    s["morphisms"][0]["points"] = serde_json::json!([2]);
    let f = write_temp(&s.to_string());
    assert_eq!(code(&run(&["flowcheck", f.path().to_str().unwrap()])), 1);
    let f = write_temp("{not json");
    assert_eq!(code(&run(&["flowcheck", f.path().to_str().unwrap()])), 1);
}

#[test]
fn circle_skeleton_has_two_generators() {
    let circle = serde_json::json!({
        "schema": "khovanov-skeleton/1",
        "objects": [{"name": "max", "index": 1}, {"name": "min", "index": 0}],
        "morphisms": [{"source": "max", "target": "min", "points": [1, -1]}]
    });
    let f = write_temp(&circle.to_string());
    let text = stdout(&run(&["flowcheck", f.path().to_str().unwrap()]));
    assert!(text.contains("Floer homology: H_0 = Z, H_1 = Z"), "{text}");
}

#[test]
fn khovanov_skeletons_are_balanced() {
    for (name, path) in corpus() {
        let s = skeleton_of(&["export-complex", "--as", "skeleton", path.to_str().unwrap()]);
        let f = write_temp(&s.to_string());
        let o = run(&["flowcheck", f.path().to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{name}");
    }
}

#[test]
fn exported_complex_squares_to_zero() {
    for (name, path) in corpus() {
        let mut v = json("complex", &["export-complex", path.to_str().unwrap()]);
        let obj = v.as_object_mut().unwrap();
        obj.remove("schema");
        obj.remove("pd");
        let c: khovanov::BigradedComplex = serde_json::from_value(v).unwrap();
        assert!(khovanov::d_squared_check(&c), "{name}");
        let expected: usize = fixture(&name)["circles"]
            .as_array()
            .unwrap()
            .iter()
            .map(|k| 1usize << k.as_u64().unwrap())
            .sum();
        assert_eq!(c.generator_count(), expected, "{name}");
    }
}

#[test]
fn generators_are_listed() {
    let path = root().join("corpus/trefoil-right.pd");
    let v = json("generators", &["generators", path.to_str().unwrap()]);
    let rows = v["generators"].as_array().unwrap();
    let expected: usize = fixture("trefoil-right")["circles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| 1usize << k.as_u64().unwrap())
        .sum();
    assert_eq!(rows.len(), expected);
}

#[test]
fn thread_count_does_not_change_output() {
    let stevedore = root().join("corpus/stevedore.pd");
    let path = stevedore.to_str().unwrap();
    for args in [
        vec!["--format", "json", "homology", path],
        vec!["--format", "json", "export-complex", path],
        vec!["cube", "4"],
    ] {
        let mut one = vec!["--threads", "1"];
        one.extend_from_slice(&args);
        let mut four = vec!["--threads", "4"];
        four.extend_from_slice(&args);
        let (a, b) = (run(&one), run(&four));
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
