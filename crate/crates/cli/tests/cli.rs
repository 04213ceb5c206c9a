use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use maxcode::corpus;
use maxcode::good::decide_inclusion;
use maxcode::pipeline::{run_pipeline, DEFAULT_MIDDLES};
use maxcode::word::{FiniteLanguage, Word};
use maxcode::xw::compute_xw;
use maxcode::zn::{enumerate_krasner, DEFAULT_BOUND};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_maxcode"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn language_json(x: &FiniteLanguage) -> String {
    serde_json::to_string(x).unwrap()
}

#[test]
fn check_code_reports_order() {
    let o = run(&["check-code", &fixture("order8.json")], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("code: yes, maximal: yes, order(a)=8"));
}

#[test]
fn check_code_witness_and_failure() {
    let x = r#"{"alphabet":["a","b"],"words":["a","ab","ba"]}"#;
    let o = run(&["check-code", "-"], Some(x));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: aba"));
    let o = run(&["--json", "check-code", "-"], Some(x));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["code"], false);
    assert_eq!(v["witness"]["word"], "aba");
}

#[test]
fn non_maximal_code_only() {
    let x = r#"{"alphabet":["a","b"],"words":["aa","b"]}"#;
    assert_eq!(run(&["check-code", "-"], Some(x)).status.code(), Some(1));
    assert_eq!(run(&["check-code", "--code-only", "-"], Some(x)).status.code(), Some(0));
}

#[test]
fn parse_and_usage_errors() {
    assert_eq!(run(&["check-code", "-"], Some("")).status.code(), Some(2));
    assert_eq!(run(&["check-code", "/nonexistent/file.json"], None).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(run(&["extract-xw", &fixture("order8.json"), "--w", "ab"], None).status.code(), Some(2));
    let x = r#"{"alphabet":["a","b"],"words":[""]}"#;
    assert_eq!(run(&["check-code", "-"], Some(x)).status.code(), Some(2));
}

#[test]
fn extract_xw_matches_library() {
    let x = corpus::order8().language();
    let o = run(&["--json", "extract-xw", "-", "--w", "bab"], Some(&language_json(&x)));
    assert_eq!(o.status.code(), Some(0));
    let lib = compute_xw(&x, b'a', &Word::from("bab")).unwrap();
    assert_eq!(stdout(&o).trim_end(), serde_json::to_string(&lib).unwrap());
    assert!(stdout(&o).starts_with(r#"{"w":"bab","n":8,"entries":[[0,0],"#));
}

#[test]
fn letter_flag() {
    let x = r#"{"alphabet":["a","b"],"words":["bbb","a","ba","bba"]}"#;
    let o = run(&["--json", "extract-xw", "-", "--letter", "b", "--w", "a"], Some(x));
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn pipeline_matches_library() {
    let e = corpus::order4();
    let o = run(&["--json", "pipeline", &fixture("order4.json")], None);
    assert_eq!(o.status.code(), Some(0));
    let lib = run_pipeline(&e.language(), b'a', DEFAULT_MIDDLES, DEFAULT_BOUND).unwrap();
    assert_eq!(stdout(&o).trim_end(), serde_json::to_string(&lib).unwrap());
}

#[test]
fn pipeline_text() {
    let o = run(&["pipeline", &fixture("order8.json"), "--middles", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("companion: T=[0, 4] R=[0, 1, 2, 3]"));
    assert!(s.contains("result: PASS"));
    let o = run(&["pipeline", &fixture("order5.json")], None);
    assert!(stdout(&o).contains("positive factorization: verified"));
    let bad = r#"{"alphabet":["a","b"],"words":["aa","b"]}"#;
    assert_eq!(run(&["pipeline", "-"], Some(bad)).status.code(), Some(1));
}

#[test]
fn enum_factorizations_listing() {
    let o = run(&["enum-factorizations", "4", "--krasner"], None);
    assert!(stdout(&o).contains("2 chains, 4 pairs"));
    let o = run(&["--json", "enum-factorizations", "4", "--krasner"], None);
    assert_eq!(stdout(&o).trim_end(), serde_json::to_string(&enumerate_krasner(4)).unwrap());
    let o = run(&["--json", "enum-factorizations", "5", "--hajos-check"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["R"].as_array().unwrap().len() == 1 || r["T"].as_array().unwrap().len() == 1));
    let o = run(&["--json", "enum-factorizations", "1"], None);
    assert_eq!(stdout(&o).trim_end(), r#"[{"n":1,"R":[0],"T":[0],"periodic_r":null,"periodic_t":null,"krasner":true}]"#);
    assert_eq!(run(&["enum-factorizations", "40"], None).status.code(), Some(2));
}

#[test]
fn arrange_with_given_companion() {
    let f = fixture("order8.json");
    let o = run(&["--json", "arrange", &f, "--w", "b", "--t", "0,4", "--r", "0,1,2,3"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passes"], true);
    let arr = &v["arrangements"][0]["arrangement"];
    assert_eq!(arr["grid"].as_array().unwrap().len(), 2);
    assert!(arr["column_certificates"].is_array());
    let o = run(&["arrange", &f, "--t", "0,1", "--r", "0,4"], None);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(run(&["arrange", &f, "--t", "0,1"], None).status.code(), Some(2));
}

#[test]
fn triangle_audit_counts() {
    let o = run(&["--json", "triangle-audit", &fixture("order5.json"), "--w", "b"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let counts = v[0]["counts"].as_array().unwrap();
    assert_eq!(counts[8], serde_json::json!([8, 0]));
    assert_eq!(counts[9], serde_json::json!([9, 1]));
}

#[test]
fn decide_inclusion_outputs() {
    let y = r#"{"alphabet":["a","b"],"words":["b","ab","aab","aaab"]}"#;
    let o = run(&["--json", "decide-inclusion", "--n", "4", "-"], Some(y));
    assert_eq!(o.status.code(), Some(0));
    let lang: FiniteLanguage = serde_json::from_str(y).unwrap();
    let lib = decide_inclusion(&lang, b'a', 4).unwrap();
    assert_eq!(stdout(&o).trim_end(), serde_json::to_string(&lib).unwrap());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decision"], "YES");
    assert_eq!(v["krasner"], serde_json::json!({"I": [0, 1, 2, 3], "J": [0]}));
    let no = r#"{"alphabet":["a","b"],"words":["b","aab"]}"#;
    let o = run(&["decide-inclusion", "--n", "2", "-"], Some(no));
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("decision: NO"));
    let o = run(&["decide-inclusion", "--n", "8", "-"], Some(y));
    assert_eq!(o.status.code(), Some(2));
}
