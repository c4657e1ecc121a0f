use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dirough::fixture::{RELATION_TEXT, TABLE2_CSV};
use serde_json::Value;

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dirough"));
    cmd.args(args).env_remove("DIROUGH_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn blobs_csv(dir: &Path) -> PathBuf {
    let mut csv = String::from("id,b1,b2,class\n");
    for (name, base) in [("p", 0.0), ("q", 100.0)] {
        for i in 0..20 {
            let v = base + 0.1 * i as f64;
            csv.push_str(&format!("{name}{i},{v:.1},{v:.1},{name}\n"));
        }
    }
    write(dir, "blobs.csv", &csv)
}

#[test]
fn cud_approximation_of_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let rel = write(dir.path(), "F.rel", RELATION_TEXT);
    let rel = rel.to_str().unwrap();
    let v = json(&["approx", "--rel", rel, "--set", "e,b,c", "--kind", "cud"]);
    assert_eq!(v["lower"], serde_json::json!(["b", "c"]));
    assert_eq!(v["upper"], serde_json::json!(["b", "c", "e", "f"]));
    let text = stdout(&run(&["approx", "--rel", rel, "--set", "e,b,c", "--kind", "cud"]));
    assert!(text.contains("lower: {b,c}\n") && text.contains("upper: {b,c,e,f}\n"));
}

#[test]
fn empty_relation_is_not_up_directed() {
    let dir = tempfile::tempdir().unwrap();
    let rel = write(dir.path(), "empty.rel", "elements: a b c\n");
    let o = run(&["relation", "check", rel.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("up_directed: false"));
    let v = json(&["relation", "check", rel.to_str().unwrap()]);
    assert_eq!(v["profile"]["up_directed"], false);
    assert_eq!(v["non_directed_witness"], serde_json::json!(["a", "a"]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.rel", "elements: a b\n");
    let bad = write(dir.path(), "bad.rel", "a b\n");
    let empty = empty.to_str().unwrap();
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["nonsense"]), Some(2));
    assert_eq!(code(&["approx", "--fixture", "--set", "a"]), Some(2));
    assert_eq!(code(&["approx", "--fixture", "--set", "a", "--kind", "cud", "--strategy", "mid"]), Some(2));
    assert_eq!(code(&["approx", "--set", "a", "--kind", "cud"]), Some(2));
    assert_eq!(code(&["regions", "--fixture", "--set", "a"]), Some(2));
    assert_eq!(code(&["approx", "--rel", empty, "--set", "a", "--kind", "pi"]), Some(1));
    assert_eq!(code(&["approx", "--rel", empty, "--set", "z", "--kind", "nbd"]), Some(1));
    assert_eq!(code(&["relation", "check", bad.to_str().unwrap()]), Some(1));
    assert_eq!(code(&["relation", "check", "/nonexistent.rel"]), Some(1));
    assert_eq!(code(&["fixture", "section6"]), Some(0));
}

#[test]
fn cap_from_flag_and_environment() {
    let args = ["granules", "cud", "--fixture"];
    assert_eq!(run(&args).status.code(), Some(0));
    let o = run_env(&args, &[("DIROUGH_CAP", "3")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap of 3"));
    let o = run_env(&["--cap", "8", "granules", "cud", "--fixture"], &[("DIROUGH_CAP", "3")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let data = blobs_csv(dir.path());
    let data = data.to_str().unwrap();
    let cluster = ["--data", data, "--eps", "0.5", "--policy", "basic"];
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("relation-check", vec!["relation", "check", "--fixture"]),
        ("relation-dot", vec!["relation", "dot", "--fixture"]),
        ("approx", vec!["approx", "--fixture", "--set", "e,b,c", "--kind", "nbd"]),
        ("approx", vec!["approx", "--fixture", "--set", "e,b,c", "--kind", "cud", "--mode", "collection"]),
        ("approx", vec!["approx", "--fixture", "--set", "e,b,c", "--kind", "pi"]),
        ("granules", vec!["granules", "cud", "--fixture"]),
        ("granules", vec!["granules", "subgroupoid", "--fixture"]),
        ("groupoid-build", vec!["groupoid", "build", "--fixture", "--strategy", "max"]),
        ("groupoid-laws", vec!["groupoid", "laws", "--fixture"]),
        ("acp-audit", vec!["acp", "audit", "--fixture"]),
        ("acp-audit", vec!["acp", "audit", "--fixture", "--mode", "realized"]),
        ("regions", vec!["regions", "--fixture", "--set", "a,b", "--set", "c,e"]),
        ("cluster-run", [&["cluster", "run"][..], &cluster[..]].concat()),
        ("cluster-validate", [&["cluster", "validate"][..], &cluster[..]].concat()),
        ("cluster-score", [&["cluster", "score"][..], &cluster[..]].concat()),
        ("fixture-section6", vec!["fixture", "section6"]),
        ("audit-claims", vec!["audit", "claims", "--fixture", "--instances", "5"]),
    ];
    for (name, args) in cases {
        let validator = jsonschema::validator_for(&schema(name)).unwrap();
        let out = json(&args);
        let errors: Vec<String> = validator.iter_errors(&out).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{name}: {errors:?}");
    }
}

#[test]
fn text_and_json_verdicts_agree() {
    let args = ["audit", "claims", "--fixture", "--instances", "3", "--seed", "5"];
    let text = stdout(&run(&args));
    let v = json(&args);
    for c in v["claims"].as_array().unwrap() {
        let line = text
            .lines()
            .find(|l| l.contains(&format!("/{} (", c["id"].as_str().unwrap())))
            .unwrap();
        let verdict = c["verdict"].as_str().unwrap();
        assert!(line.contains(&format!("): {verdict}")), "{line} vs {verdict}");
    }

    let text = stdout(&run(&["acp", "audit", "--fixture"]));
    for e in json(&["acp", "audit", "--fixture"])["entries"].as_array().unwrap() {
        let line = text.lines().find(|l| l.starts_with(&format!("{} (", e["law"].as_str().unwrap()))).unwrap();
        assert!(line.contains(&format!("): {}", e["verdict"].as_str().unwrap())), "{line}");
    }

    let text = stdout(&run(&["groupoid", "laws", "--fixture"]));
    for l in json(&["groupoid", "laws", "--fixture"])["laws"].as_array().unwrap() {
        let verdict = if l["holds"] == true { "holds" } else { "fails" };
        assert!(text.contains(&format!("{}: {verdict}", l["law"].as_str().unwrap())));
    }
}

#[test]
fn cayley_table_round_trips_through_the_table_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let built = stdout(&run(&["groupoid", "build", "--fixture", "--strategy", "seed:21"]));
    let table = write(dir.path(), "g.csv", &built);
    let strategy = format!("table:{}", table.display());
    let again = stdout(&run(&["groupoid", "build", "--fixture", "--strategy", &strategy]));
    assert_eq!(built, again);

    let printed = write(dir.path(), "table2.csv", TABLE2_CSV);
    let strategy = format!("table:{}", printed.display());
    let v = json(&["approx", "--fixture", "--set", "e,b,c", "--kind", "pi", "--strategy", &strategy]);
    assert_eq!(v["lower"], serde_json::json!(["c"]));
    assert_eq!(v["upper"], serde_json::json!(["a", "b", "c", "e", "f"]));

    let wrong = write(dir.path(), "wrong.csv", "*,a,b\na,a,a\nb,a,b\n");
    let strategy = format!("table:{}", wrong.display());
    assert_eq!(run(&["groupoid", "build", "--fixture", "--strategy", &strategy]).status.code(), Some(1));
}

#[test]
fn information_table_input() {
    let dir = tempfile::tempdir().unwrap();
    let table = write(dir.path(), "t.csv", "object,colour,size\nx,red,big|tall\ny,red,big|tall\nz,blue,big\n");
    let t = table.to_str().unwrap();
    let v = json(&["relation", "check", "--table", t]);
    assert_eq!(v["pairs"], 5);
    assert_eq!(v["profile"]["symmetric"], true);
    let v = json(&["relation", "check", "--table", t, "--attrs", "size"]);
    assert_eq!(v["pairs"], 5);
    assert_eq!(run(&["relation", "check", "--table", t, "--attrs", "weight"]).status.code(), Some(1));
}

#[test]
fn regions_table_has_one_row_per_kind() {
    let text = stdout(&run(&["regions", "--fixture", "--set", "a,b", "--set", "c,e"]));
    let rows: Vec<&str> = text.lines().skip(2).collect();
    let kinds: Vec<&str> = rows.iter().map(|r| r.split_whitespace().next().unwrap()).collect();
    assert_eq!(kinds, ["n", "o1", "o2", "i1", "i2", "o", "o_prose"]);
}

#[test]
fn cluster_run_writes_a_segmentation() {
    let dir = tempfile::tempdir().unwrap();
    let data = blobs_csv(dir.path());
    let seg = dir.path().join("seg.csv");
    let o = run(&[
        "cluster",
        "run",
        "--data",
        data.to_str().unwrap(),
        "--eps",
        "0.5",
        "--policy",
        "basic",
        "--k",
        "2",
        "--weights",
        "1,2",
        "--segmentation",
        seg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let seg = fs::read_to_string(seg).unwrap();
    assert_eq!(seg.lines().count(), 41);
    assert!(seg.contains("p3,0\n") && seg.contains("q3,1\n"));
}

#[test]
fn cluster_policies_and_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let data = blobs_csv(dir.path());
    let data = data.to_str().unwrap();
    let base = ["cluster", "run", "--data", data];
    let o = run(&[&base[..], &["--eps", "0.5"]].concat());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not up-directed"));

    let v = json(&[&base[..], &["--eps", "0.5", "--policy", "augment-top"]].concat());
    assert_eq!(v["augmented"], true);
    assert!(v["proposed"][0]["upper"].as_array().unwrap().contains(&Value::from("⊤")));

    let v = json(&[&base[..], &["--class-eps", "p=0.5,q=0.5", "--policy", "basic"]].concat());
    assert_eq!(v["selection_validity"]["valid"], true);
    assert_eq!(run(&[&base[..], &["--class-eps", "p=0.5", "--policy", "basic"]].concat()).status.code(), Some(1));
    assert_eq!(run(&[&base[..], &["--class-eps", "p:0.5"]].concat()).status.code(), Some(2));
    assert_eq!(run(&base).status.code(), Some(2));
}

#[test]
fn cluster_validate_reports_given_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let data = blobs_csv(dir.path());
    let clusters = write(dir.path(), "c.txt", "# one per line\np0,p1,p2\nq5\n");
    let v = json(&[
        "cluster",
        "validate",
        "--data",
        data.to_str().unwrap(),
        "--eps",
        "0.5",
        "--policy",
        "basic",
        "--clusters",
        clusters.to_str().unwrap(),
    ]);
    assert_eq!(v["clusters"].as_array().unwrap().len(), 2);
    assert_eq!(v["validity"]["covers"], false);
    assert_eq!(v["validity"]["valid"], false);
}

#[test]
fn fixture_audit_without_random_instances() {
    let v = json(&["audit", "claims", "--fixture", "--instances", "0", "--tier", "1"]);
    assert_eq!(v["instances"], 1);
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["verdict"] == "holds"));
    let o = run(&["audit", "claims", "--instances", "0", "--strategy", "min"]);
    assert_eq!(o.status.code(), Some(2));
}
