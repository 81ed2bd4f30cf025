use std::path::Path;
use std::process::{Command, Output};

use kgbb_core::fixtures::{BROKEN_SPECS, DEMO_SPEC};

fn kgbb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgbb"))
        .args(args)
        .env_remove("KGBB_SPEC")
        .env_remove("KGBB_STORE")
        .env_remove("KGBB_PORT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_spec_exit_status_follows_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("demo.yaml");
    std::fs::write(&good, DEMO_SPEC).unwrap();
    let out = kgbb(&["validate-spec", path(&good)]);
    assert!(out.status.success(), "{}", stdout(&out));

    let (name, code, text) = BROKEN_SPECS[8];
    let bad = dir.path().join(format!("{name}.yaml"));
    std::fs::write(&bad, text).unwrap();
    let out = kgbb(&["validate-spec", path(&bad), "--json"]);
    assert!(!out.status.success());
    let diags: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert!(diags.iter().any(|d| d["code"] == serde_json::to_value(code).unwrap()), "{diags:?}");
}

#[test]
fn export_of_an_empty_store_is_valid_empty_trig() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("empty.json");
    let out_file = dir.path().join("out.trig");
    let out = kgbb(&["export", "--store", path(&store), "--format", "trig", "--out", path(&out_file)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_file).unwrap();
    let quads: Vec<_> = oxttl::TriGParser::new().for_slice(text.as_bytes()).collect::<Result<_, _>>().unwrap();
    assert!(quads.is_empty());
}

#[test]
fn fully_bound_travel_question_on_demo_store_is_true() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("demo.json");
    assert!(kgbb(&["seed-demo", "--store", path(&store)]).status.success());
    let q = dir.path().join("q.yaml");
    std::fs::write(
        &q,
        "kgbb: demo:travel\nsubject: { exact: ex:anna }\nbindings:\n  travel:transportation: { exact: ex:train-1 }\n  travel:departureLocation: { exact: ex:berlin }\n  travel:destinationLocation: { exact: ex:rome }\n  travel:datetime: { literal: { exact: { value: '2019-08-05', datatype: date } } }\n",
    )
    .unwrap();
    let out = kgbb(&["query", "--store", path(&store), "--question", path(&q)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).trim(), "true");

    std::fs::write(&q, "kgbb: demo:travel\nsubject: { some-instance-of: ex:Person }\nbindings:\n  travel:destinationLocation: { exact: ex:rome }\n").unwrap();
    let out = kgbb(&["query", "--store", path(&store), "--question", path(&q)]);
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn import_reports_each_row_and_persists() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.json");
    let csv = dir.path().join("trips.csv");
    std::fs::write(
        &csv,
        "person,transportation,departure,destination,datetime\nBert,car,Hamburg,Munich,2020-01-02T10:00:00Z\nBert,bike,Munich,Hamburg,2020-02-03T10:00:00Z\nCleo,plane,Rome,Oslo,someday\n",
    )
    .unwrap();
    let out = kgbb(&["import", path(&csv), "--template", "travel:csv-import", "--store", path(&store), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["created"].as_array().unwrap().len(), 2, "{report}");
    assert_eq!(report["rejected"][0]["row"], 3);
    let out = kgbb(&["export", "--store", path(&store), "--format", "pg-json", "--out", "-"]);
    assert!(stdout(&out).contains("StatementUnit"));
    let tables = dir.path().join("tables");
    assert!(kgbb(&["export", "--store", path(&store), "--format", "tables", "--out", path(&tables)]).status.success());
    assert!(tables.join("manifest.json").exists());
}

#[test]
fn invalid_spec_aborts_with_json_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, text) = BROKEN_SPECS[1];
    let bad = dir.path().join("bad.yaml");
    std::fs::write(&bad, text).unwrap();
    let out = kgbb(&["serve", "--spec", path(&bad), "--json"]);
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!err["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn wizard_answers_become_a_class() {
    let dir = tempfile::tempdir().unwrap();
    let answers = dir.path().join("answers.yaml");
    std::fs::write(
        &answers,
        "namespace: 'names:'\npredicate: has first name\nposition_count: 1\nsubject_label: PERSON\nsubject_class: ex:Person\npositions:\n  - { label: FIRST_NAME, required: true, value: { type: literal, datatype: string } }\nlabel_sentence: PERSON has first name FIRST_NAME\n",
    )
    .unwrap();
    let out = kgbb(&["wizard", path(&answers), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let class: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(class["positions"].as_array().unwrap().len(), 1);
    assert_eq!(class["positions"][0]["required"], true);
}
