use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsheaf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn find<'a>(recs: &'a [Value], kind: &str) -> Vec<&'a Value> {
    recs.iter().filter(|r| r["record"] == kind).collect()
}

#[test]
fn non_transitive_category_is_rejected_with_witness() {
    let out = run(&["validate", "--input", &fixture("non_transitive.json")]);
    assert_eq!(out.status.code(), Some(1));
    let recs = records(&out);
    let report = find(&recs, "report")[0];
    assert_eq!(report["passed"], false);
    assert_eq!(report["violations"][0]["law"], "composition");
}

#[test]
fn negative_delay_reports_location() {
    let out = run(&["validate", "--input", &fixture("des_negative_delay.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("delays[1][0][1]"), "{err}");
}

#[test]
fn missing_file_is_bad_input() {
    let out = run(&["validate", "--input", "/nonexistent/qsheaf.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn two_vertex_sections() {
    let out = run(&["sections", "--input", &fixture("two_vertex_boolean.json")]);
    assert!(out.status.success());
    let recs = records(&out);
    let got: Vec<(String, String)> = find(&recs, "section")
        .iter()
        .map(|r| {
            let v = &r["values"];
            (v["v"].as_str().unwrap().into(), v["w"].as_str().unwrap().into())
        })
        .collect();
    let want = [("0", "0"), ("0", "1"), ("1", "1")].map(|(a, b)| (a.to_string(), b.to_string()));
    assert_eq!(got, want);
}

#[test]
fn k3_flow_runs_to_the_iteration_cap() {
    let out = run(&["flow", "--input", &fixture("k3.json"), "--max-iter", "30"]);
    assert!(out.status.success());
    let recs = records(&out);
    let its = find(&recs, "iteration");
    assert_eq!(its.last().unwrap()["status"], "max_iter_reached");
}

#[test]
fn dijkstra_fixture_distances() {
    let out = run(&["flow", "--input", &fixture("dijkstra.json"), "--schedule", "dijkstra"]);
    assert!(out.status.success());
    let recs = records(&out);
    let last = *find(&recs, "iteration").last().unwrap();
    let v = &last["values"];
    let got: Vec<f64> = ["s", "a", "b", "t"].iter().map(|k| v[k].as_f64().unwrap()).collect();
    assert_eq!(got, vec![0.0, 1.0, 4.0, 3.0]);
}

#[test]
fn paths_command_matches_oracle() {
    for schedule in ["unweighted", "dijkstra"] {
        let out = run(&["paths", "--input", &fixture("paths.json"), "--schedule", schedule]);
        assert!(out.status.success());
        let recs = records(&out);
        assert_eq!(find(&recs, "summary")[0]["matches_oracle"], true);
    }
}

#[test]
fn des_fixture_synchronizes() {
    let out = run(&["des", "--input", &fixture("des.json")]);
    assert!(out.status.success());
    let recs = records(&out);
    assert_eq!(find(&recs, "synchronization")[0]["ok"], true);
}

#[test]
fn prefs_updates_depend_on_confidence() {
    let count = |name: &str| {
        let out = run(&["prefs", "--input", &fixture(name)]);
        assert!(out.status.success());
        find(&records(&out), "summary")[0]["updates"].as_u64().unwrap()
    };
    assert!(count("prefs.json") > 0);
    assert_eq!(count("prefs_closed.json"), 0);
}

#[test]
fn verify_passes_on_valid_fixtures() {
    for name in ["k3.json", "diamond.json", "product.json", "des.json", "paths.json", "prefs.json"] {
        let out = run(&["verify", "--input", &fixture(name), "--seed", "7"]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}
