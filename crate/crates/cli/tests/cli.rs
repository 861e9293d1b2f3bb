use std::path::PathBuf;
use std::process::{Command, Output};

fn model(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("models");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modaldoc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bundled_models_pass() {
    for m in ["kripke.modal", "temporal.modal", "quantale.modal", "presheaf.modal", "doctrine.modal"] {
        let o = run(&["check", "--all", &model(m)]);
        assert_eq!(o.status.code(), Some(0), "{m}: {}", stdout(&o));
        assert!(stdout(&o).ends_with(", 0 failed\n"));
    }
}

#[test]
fn planted_frame_fails_with_witness() {
    let o = run(&["check", &model("planted.modal")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("axiom 4: 1 at [{a,b}]"));
}

#[test]
fn check_by_name() {
    let o = run(&["check", &model("temporal.modal"), "eg", "ag"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("2 check(s), 0 failed\n"));
    let o = run(&["check", &model("temporal.modal"), "missing"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(run(&["check", "--all", &model("temporal.modal"), "eg"]).status.code() == Some(2));
}

#[test]
fn temporal_query_prints_the_fixed_point() {
    let o = run(&["temporal", &model("temporal.modal"), "--op", "EG", "--coalgebra", "M", "--alpha", "{s0,s1}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("{s0,s1}"));
    let o = run(&["temporal", &model("temporal.modal"), "--op", "AG", "--coalgebra", "M", "--alpha", "{s0,s1}", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"], "{s1}");
    assert_eq!(v["passed"], true);
}

#[test]
fn temporal_table_covers_every_subset() {
    let o = run(&["temporal", &model("temporal.modal"), "--op", "EG", "--coalgebra", "M", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tables"][0]["rows"].as_array().unwrap().len(), 8);
    let o = run(&["temporal", &model("temporal.modal"), "--op", "G", "--coalgebra", "M"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["temporal", &model("temporal.modal"), "--op", "XG", "--coalgebra", "M"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derive_modality_tables() {
    let o = run(&["derive", &model("quantale.modal"), "--from", "adjunction", "l3-adj", "--modality", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let first = &v["tables"][0];
    assert_eq!(first["name"], "□ at 1");
    assert_eq!(first["rows"][1], serde_json::json!({"from": "[½]", "to": "[0]"}));
    assert_eq!(v["verdicts"][0]["passed"], true);
}

#[test]
fn derive_other_constructions() {
    for (kind, name, flag) in [("interior", "box-fork", "--ma"), ("interior", "box-fork", "--mc")] {
        let o = run(&["derive", &model("kripke.modal"), "--from", kind, name, flag]);
        assert_eq!(o.status.code(), Some(0), "{flag}");
    }
    let o = run(&["derive", &model("quantale.modal"), "--from", "adjunction", "bool-adj", "--vertical"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["derive", &model("quantale.modal"), "--from", "comonad", "cmd-l3", "--modality"]);
    assert_eq!(o.status.code(), Some(0));
    // wrong kind for the name, and a construction that does not apply
    assert_eq!(run(&["derive", &model("quantale.modal"), "--from", "interior", "l3-adj", "--modality"]).status.code(), Some(2));
    assert_eq!(run(&["derive", &model("quantale.modal"), "--from", "adjunction", "l3-adj", "--mc"]).status.code(), Some(2));
    assert_eq!(run(&["derive", &model("quantale.modal"), "--from", "adjunction", "l3-adj"]).status.code(), Some(2));
}

#[test]
fn em_and_factor() {
    let o = run(&["em", &model("temporal.modal"), "--comonad", "mc-eg"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("coalgebra "));
    let o = run(&["em", &model("kripke.modal"), "--comonad", "mc-fork"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("note: mc-fork: uniqueness search refused"));
    let o = run(&["factor", &model("quantale.modal"), "--adjunction", "l3-adj"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS  l3-adj: composites equal the original"));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--bogus", &model("kripke.modal")]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/file.modal"]).status.code(), Some(2));

    let bad = scratch("syntax.modal", "poset P {\n  elements a b;\n}\n");
    let o = run(&["check", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: 2:"), "{}", stderr(&o));

    let dangling = scratch("dangling.modal", "query q { op: EG; coalgebra: M; alpha: {s0} }\n");
    let o = run(&["check", &dangling]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`M`"));

    let dup = scratch("dup.modal", "poset P { elements: a }\nposet P { elements: b }\n");
    let o = run(&["check", &dup]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("duplicate name `P`"));
}

#[test]
fn max_size_refuses_explicitly() {
    let o = run(&["check", &model("quantale.modal"), "--max-size", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--max-size 5"));
}

#[test]
fn empty_model_checks_nothing() {
    let empty = scratch("empty.modal", "");
    let o = run(&["check", &empty, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 0);
}

#[test]
fn check_reports_are_deterministic() {
    let a = run(&["check", &model("kripke.modal"), "--json"]);
    let b = run(&["check", &model("kripke.modal"), "--json"]);
    assert_eq!(a.stdout, b.stdout);
}
