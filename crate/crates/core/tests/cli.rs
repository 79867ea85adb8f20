use std::process::{Command, Output};

use serde_json::Value;

use cmclass::cli::parse_field_spec;
use cmclass::fieldlat::DEFAULT_MAX_DEGREE;

fn cmclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = cmclass(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc:#}");
}

#[test]
fn hminus_json_matches_schema_and_reparses() {
    let v = validator();
    let doc = json(&["hminus", "--field", "zeta:15", "--json"]);
    assert_valid(&v, &doc);
    assert_eq!(doc["h_minus"], "1");
    assert_eq!(doc["Q"], 2);
    assert_eq!(doc["w"], 30);
    let doc = json(&["hminus", "--field", "quad:-23", "--json"]);
    assert_eq!(doc["h_minus"], "3");
    let spec = doc["field"].as_str().unwrap();
    parse_field_spec(spec).unwrap().build(DEFAULT_MAX_DEGREE).unwrap();
}

#[test]
fn unit_index_json() {
    let v = validator();
    let doc = json(&["unit-index", "--field", "quad:-4*quad:136"]);
    assert_valid(&v, &doc);
    assert_eq!((doc["Q"].as_u64(), doc["kappa"].as_u64()), (Some(2), Some(1)));
    assert_eq!(doc["rule"], "R5/(ii)2a");
    let doc = json(&["unit-index", "--field", "quad:-4*quad:40"]);
    assert_eq!((doc["Q"].as_u64(), doc["kappa"].as_u64()), (Some(1), Some(2)));
    let doc = json(&["unit-index", "--field", "zeta:12", "--override", "1"]);
    assert_valid(&v, &doc);
    assert_eq!(doc["rule"], "override");
    assert!(doc["kappa"].is_null());
}

#[test]
fn table_rows_reparse_as_field_specs() {
    let v = validator();
    for kind in ["hminus", "unitindex"] {
        let doc = json(&["table", kind, "--zeta-range", "3..30", "--spec", "quad:-4*quad:5", "--json"]);
        assert_valid(&v, &doc);
        let rows = doc.as_array().unwrap();
        assert_eq!(rows.len(), (3..=30).filter(|m| m % 4 != 2).count() + 1);
        for row in rows {
            let spec = row["field"].as_str().unwrap();
            let k = parse_field_spec(spec).unwrap().build(DEFAULT_MAX_DEGREE).unwrap();
            assert_eq!(row["conductor"].as_u64(), Some(k.conductor()));
            assert_eq!(row["degree"].as_u64(), Some(k.degree() as u64));
        }
    }
}

#[test]
fn csv_header_and_rows() {
    let out = cmclass(&["table", "hminus", "--zeta-range", "20..24", "--csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["field", "conductor", "degree", "w", "Q", "rule", "h_minus"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let fields: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(fields, ["zeta:20", "zeta:21", "zeta:23", "zeta:24"]);
    assert_eq!(&rows[2][6], "3");

    let out = cmclass(&["table", "unitindex", "--spec", "zeta:9", "--csv"]);
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().ends_with(",kappa"));
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "hminus", "--zeta-range", "3..60", "--json"];
    let a = cmclass(&args);
    let b = cmclass(&["--threads", "1", "table", "hminus", "--zeta-range", "3..60", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, cmclass(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(cmclass(&["hminus", "--field", "zeta:3*"]).status.code(), Some(2));
    assert_eq!(cmclass(&["hminus", "--field", "quad:5"]).status.code(), Some(2));
    assert_eq!(cmclass(&["unit-index", "--field", "zeta:7", "--override", "3"]).status.code(), Some(2));
    let lenient = cmclass(&["table", "hminus", "--spec", "zeta:7", "--spec", "oops", "--json"]);
    assert_eq!(lenient.status.code(), Some(0));
    let rows: Value = serde_json::from_str(&stdout(&lenient)).unwrap();
    assert_valid(&validator(), &rows);
    assert!(rows[1]["error"].is_string());
    let strict = cmclass(&["--strict", "table", "hminus", "--spec", "zeta:7", "--spec", "oops"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn verify_reports() {
    let v = validator();
    for args in [
        vec!["verify", "masley", "3", "5", "--json"],
        vec!["verify", "v4", "-3", "-4", "--json"],
        vec!["verify", "counterexample", "1", "-4", "5", "--json"],
        vec!["verify", "martinet", "17", "--json"],
        vec!["verify", "martinet", "41", "--json"],
        vec!["verify", "counterexample", "2", "5", "--json"],
        vec!["verify", "metsankyla", "zeta:4", "zeta:3", "--json"],
    ] {
        let doc = json(&args);
        assert_valid(&v, &doc);
        for r in doc.as_array().unwrap() {
            assert_ne!(r["verdict"], "fail", "{args:?}");
        }
    }
    let doc = json(&["verify", "martinet", "41", "--json"]);
    assert_eq!(doc[0]["verdict"], "vacuous");
    let out = cmclass(&["verify", "masley", "--sweep", "--max", "24"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 failed"));
}
