use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn opsets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opsets"))
        .args(args)
        .output()
        .expect("run opsets")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json report")
}

const KB_PVM: &str = r#"{"party":2,"elements":[[[["1","0"],["0","0"],["0","0"],["0","0"],["0","0"],["0","0"]],[["0","0"],["1","0"],["0","0"],["0","0"],["0","0"],["0","0"]],[["0","0"],["0","0"],["1","0"],["0","0"],["0","0"],["0","0"]]],[[["0","0"],["0","0"],["0","0"],["1","0"],["0","0"],["0","0"]],[["0","0"],["0","0"],["0","0"],["0","0"],["1","0"],["0","0"]],[["0","0"],["0","0"],["0","0"],["0","0"],["0","0"],["1","0"]]]]}"#;

#[test]
fn corpus_lists_and_prints_sets() {
    let out = opsets(&["corpus"]);
    assert!(out.status.success());
    let names = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        names.lines().collect::<Vec<_>>(),
        ["s1", "s2", "tiles_k1", "tiles_k2"]
    );
    let out = opsets(&["corpus", "s2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with('{') && text.ends_with("}\n"));
}

#[test]
fn analyze_reports_completeness() {
    let v = json(&opsets(&["analyze", "s2"]));
    assert_eq!(v["schema"], "opsets-report/1");
    assert_eq!(v["command"], "analyze");
    assert_eq!(v["orthogonal"], true);
    assert_eq!(v["completeness"], "INCOMPLETE_NON_SUBSPACE");
    assert_eq!(v["redundancy"][0]["redundant"], false);
}

#[test]
fn analyze_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s1.json");
    fs::write(&path, opsets(&["corpus", "s1"]).stdout).unwrap();
    let v = json(&opsets(&["analyze", path.to_str().unwrap()]));
    assert_eq!(v["completeness"], "COMPLETE");
}

#[test]
fn non_orthogonal_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(
        &path,
        r#"{"dims":[2,2],"states":[{"label":"a","factors":[[["1","0"],["0","0"]],[["1","0"],["0","0"]]]},{"label":"b","factors":[[["1","0"],["1","0"]],[["1","0"],["0","0"]]]}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = opsets(&["analyze", p]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violation"], serde_json::json!(["a", "b"]));
    assert_eq!(opsets(&["constraints", p]).status.code(), Some(2));
    assert_eq!(opsets(&["distinguish", p]).status.code(), Some(2));
}

#[test]
fn malformed_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    fs::write(
        &path,
        r#"{"dims":[2],"states":[{"label":"a","factors":[[["1","0"]]]}]}"#,
    )
    .unwrap();
    let out = opsets(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("states[0].factors[0]"));
    assert_eq!(opsets(&["analyze", "no-such-set"]).status.code(), Some(1));
    assert_eq!(
        opsets(&["strong-local", "s1", "--bipartition", "1|1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn constraints_for_one_party() {
    let v = json(&opsets(&["constraints", "s1", "--party", "1"]));
    let p = &v["parties"][0];
    assert_eq!(p["party"], 1);
    assert_eq!(p["dim_space"], 2);
    assert_eq!(p["op_pvms"].as_array().unwrap().len(), 1);
    assert_eq!(
        opsets(&["constraints", "s1", "--party", "3"]).status.code(),
        Some(1)
    );
}

#[test]
fn measure_applies_a_pvm_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kb.json");
    fs::write(&path, KB_PVM).unwrap();
    let v = json(&opsets(&["measure", "s2", "--pvm", path.to_str().unwrap()]));
    assert_eq!(v["orthogonality_preserving"], true);
    let outcomes = v["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2);
    assert_eq!(outcomes[0]["closure"], "NEW_DIRECTIONS");
    assert_eq!(
        outcomes[0]["survivors"]["states"].as_array().unwrap().len(),
        5
    );
}

#[test]
fn distinguish_and_upb() {
    let v = json(&opsets(&["distinguish", "s1", "--depth", "6"]));
    assert_eq!(v["verdict"], "DISTINGUISHABLE");
    assert_eq!(v["tree"]["type"], "measure");
    assert_eq!(v["tree"]["party"], 1);

    let v = json(&opsets(&["distinguish", "tiles_k1"]));
    assert_eq!(v["verdict"], "INDISTINGUISHABLE_PROJECTIVE");

    let v = json(&opsets(&["upb", "tiles_k2"]));
    assert_eq!(v["upb"], true);
    assert!(v["witness"].is_null());
    let v = json(&opsets(&["upb", "s2"]));
    assert_eq!(v["upb"], false);
    assert!(v["witness"].is_object());
}

#[test]
fn activate_s1_and_s2() {
    let v = json(&opsets(&["activate", "s1"]));
    assert_eq!(v["verdict"], "NOT_ACTIVABLE");
    assert_eq!(v["reason"], "CLOSURE");

    let v = json(&opsets(&["activate", "s2"]));
    assert_eq!(v["verdict"], "ACTIVABLE");
    let steps = v["witness"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["party"], 2);
    assert_eq!(v["witness"]["terminal_property"], "LOCALLY_IRREDUCIBLE");

    let v = json(&opsets(&["activate", "tiles_k1"]));
    assert_eq!(v["verdict"], "NOT_APPLICABLE");
}

#[test]
fn strong_local_on_bipartite_input() {
    let v = json(&opsets(&["strong-local", "s1"]));
    assert_eq!(v["verdict"], "STRONGLY_LOCAL");
    assert_eq!(v["bipartitions"].as_array().unwrap().len(), 1);
    assert!(v["regime_note"].is_string());
}

#[test]
fn render_ascii_and_svg() {
    let out = opsets(&["render", "s1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("tiling 3x3"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kb.json");
    fs::write(&path, KB_PVM).unwrap();
    let out = opsets(&[
        "render",
        "s2",
        "--format",
        "svg",
        "--pvm",
        path.to_str().unwrap(),
        "--element",
        "1",
    ]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("highlight: party 2 support {3,4,5}"));

    let out = opsets(&[
        "render",
        "s2",
        "--pvm",
        path.to_str().unwrap(),
        "--element",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
}
