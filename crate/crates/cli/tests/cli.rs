use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bolzano(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bolzano")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = bolzano(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn text(args: &[&str]) -> String {
    let out = bolzano(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn sets() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("sets")
}

#[test]
fn classify_example_expressions() {
    let v = json(&["classify", "sum(n, n)", "sum(n, (-1)^(n+1)/2^n)", "0", "--q", "1000"]);
    let reports = v.as_array().unwrap();
    assert_eq!(reports[0]["classification"], "InfinitelyGreatPositive");
    assert_eq!(reports[0]["certificate"]["kind"], "DivergesAbove");
    assert_eq!(reports[1]["classification"], "Measurable");
    let qs: Vec<u64> = reports[1]["fractions"].as_array().unwrap().iter().map(|b| b["q"].as_u64().unwrap()).collect();
    assert_eq!(qs, vec![1, 10, 100, 1000]);
    for b in reports[1]["fractions"].as_array().unwrap() {
        // the bracket [(p-1)/q, (p+1)/q] holds 1/3: |3p - q| < 3
        let (p, q) = (b["p"].as_str().unwrap().parse::<i64>().unwrap(), b["q"].as_i64().unwrap());
        assert!((3 * p - q).abs() < 3, "{b}");
    }
    assert!(reports[2]["fractions"].as_array().unwrap().iter().all(|b| b["p"] == "0"));
}

#[test]
fn classify_reads_files_and_presets() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# the four examples\nA\n\nprod(n, 1 - 1/2^n)\n3 + 5/sum(n, 1)").unwrap();
    let path = f.path().to_str().unwrap();
    let v = json(&["classify", "B", "--file", path, "--q", "100"]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["classification"].as_str().unwrap()).collect();
    assert_eq!(names, vec!["Measurable", "InfinitelyGreatPositive", "Measurable", "Measurable"]);
    let c = &v[2]["fractions"][2];
    assert_eq!((c["q"].as_u64(), c["p"].as_str()), (Some(100), Some("29")));
}

#[test]
fn compare_examples() {
    assert_eq!(json(&["compare", "1/sum(n,1)", "0"])["verdict"], "EqualCertified");
    let v = json(&["compare", "1/2", "1/3"]);
    assert_eq!(v["verdict"], "Greater");
    assert_eq!(v["witnessQ"], 6);
    assert_eq!(json(&["compare", "sum(n,(-1)^(n+1)/2^n)", "1/3"])["verdict"], "EqualCertified");
    assert_eq!(json(&["compare", "D", "3"])["verdict"], "EqualCertified");
    assert_eq!(json(&["compare", "-1/3", "-1/4"])["verdict"], "Less");
}

#[test]
fn approx_reports_the_bracket() {
    let v = json(&["approx", "C"]);
    assert_eq!(v["value"]["decimal"], "0.288788");
    assert_eq!(v["value"]["q"], 1_000_000);
    assert!(text(&["approx", "B", "--q", "1e3"]).contains("~ 0.333"));
}

#[test]
fn ivt_and_sup_find_root_two() {
    let v = json(&["ivt", "x^2-2", "1", "2"]);
    assert_eq!(v["root"]["decimal"], "1.414214");
    assert!(v["trace"].is_null());
    let listed = json(&["ivt", "[1, 0, -2]", "1", "2"]);
    assert_eq!(listed["root"], v["root"]);
    let s = json(&["sup", "1,0,-2", "1", "2", "--trace", "--q", "1e4"]);
    assert_eq!(s["value"]["decimal"], "1.4142");
    let steps = s["trace"].as_array().unwrap();
    assert_eq!(steps.len() as u64, s["steps"].as_u64().unwrap());
    assert_eq!(json(&["sup", "3/4", "0", "1", "--less-than"])["value"]["decimal"], "0.750000");
    let cubic = json(&["ivt", "x^3 - x - 1", "1", "2", "--q", "1e3"]);
    assert_eq!(cubic["root"]["decimal"], "1.325");
    let shifted = json(&["ivt", "x^2", "-1/2", "2", "--phi", "2"]);
    assert_eq!(shifted["root"]["decimal"], "1.414214");
}

#[test]
fn between_presets() {
    assert_eq!(json(&["between", "bounded"])["result"], "InfinitelyMany");
    let v = json(&["between", "vanishing"]);
    assert_eq!(v["result"], "ExactlyOne");
    assert_eq!(v["a"]["decimal"], "0.333333");
    let v = json(&["between", "attained"]);
    assert_eq!(v["result"], "None");
    assert_eq!(v["extremum"]["decimal"], "0.333333");
    let v = json(&["between", "--neighbour", "7/5", "--q", "100"]);
    assert_eq!((v["result"].as_str(), v["a"]["decimal"].as_str()), (Some("ExactlyOne"), Some("1.40")));
    assert_eq!(json(&["between", "--neighbour", "7/5", "--attained"])["result"], "None");
}

#[test]
fn topo_files_and_presets() {
    let with_z = sets().join("pu41-with-z.json");
    let v = json(&["topo", with_z.to_str().unwrap()]);
    assert_eq!(v["verdict"], "FailsAt");
    assert_eq!(v["point"], "1");
    let samples: Vec<&str> = v["samples"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    let expected: Vec<String> = (1..=10).map(|n| format!("1/{}", 1u64 << n)).collect();
    assert_eq!(samples, expected);
    assert_eq!(json(&["topo", "pu41-with-z.json"])["point"], "1");
    assert_eq!(json(&["topo", sets().join("pu41.json").to_str().unwrap()])["verdict"], "Complete");
    assert_eq!(json(&["topo", sets().join("dyadic.json").to_str().unwrap()])["point"], "0");
    assert_eq!(json(&["topo", "unit-interval"])["verdict"], "Complete");
    let island = json(&["topo", sets().join("interval-with-island.json").to_str().unwrap()]);
    assert_eq!(island["point"], "3/2");
    let inline = json(&["topo", r#"{"pieces": [{"lo": 0, "hi": 1}]}"#]);
    assert_eq!(inline["verdict"], "Complete");
}

#[test]
fn text_and_json_agree() {
    for args in [
        vec!["compare", "B", "1/2"],
        vec!["between", "vanishing"],
        vec!["topo", "dyadic"],
        vec!["classify", "5/sum(n,1)"],
    ] {
        let v = json(&args);
        let t = text(&args);
        let verdict = v
            .get("verdict")
            .or_else(|| v.get("result"))
            .or_else(|| v.get(0).and_then(|r| r.get("classification")))
            .and_then(Value::as_str)
            .unwrap();
        assert!(t.contains(verdict), "{args:?}: {t}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| bolzano(args).status.code().unwrap();
    assert_eq!(code(&["compare", "sum(n,", "1"]), 2);
    assert_eq!(code(&["approx", "1/0"]), 2);
    assert_eq!(code(&["topo", "no-such-set"]), 2);
    assert_eq!(code(&["topo", r#"{"pieces": [], "bogus": 1}"#]), 2);
    assert_eq!(code(&["approx", "sum(n, n)"]), 3);
    assert_eq!(code(&["ivt", "x^2+1", "0", "1"]), 3);
    assert_eq!(code(&["sup", "x^2-2", "2", "1"]), 3);
    assert_eq!(code(&["approx", "sum(n, (-1)^n/n)"]), 4);
    assert_eq!(code(&["--q", "0", "approx", "1"]), 2);
}

#[test]
fn json_errors_leave_stdout_empty() {
    for args in [
        ["--format", "json", "approx", "sum(n, n)"],
        ["--format", "json", "approx", "sum(n, (-1)^n/n)"],
        ["--format", "json", "approx", "1/"],
    ] {
        let out = bolzano(&args);
        assert!(!out.status.success());
        assert!(out.stdout.is_empty(), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("error is json");
        assert_eq!(err["exitCode"].as_i64(), out.status.code().map(i64::from));
    }
}
