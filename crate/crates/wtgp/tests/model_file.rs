use std::path::Path;

use wtgp::model_file::{classification_report, ChannelFile, LoadedModel};
use wtgp::CliError;

fn load(text: &str) -> Result<LoadedModel, CliError> {
    let p = Path::new("inline.json");
    ChannelFile::parse(p, text)?.to_model(p)
}

const BINARY: &str = r#"{
  "kind": "wiretap",
  "alphabets": { "x": 2, "y1": 2, "y2": 2, "z": 2 },
  "law": [
    [[[0.5, 0.2], [0.1, 0.2]], [[0.0, 0.0], [0.0, 0.0]]],
    [[[0.0, 0.0], [0.0, 0.0]], [[0.1, 0.3], [0.4, 0.2]]]
  ]
}"#;

#[test]
fn binary_wiretap_file_reports_its_structure() {
    let m = load(BINARY).unwrap();
    let report = classification_report(&m);
    assert!(report.contains("SD: yes"), "{report}");
    assert!(report.contains("PD: no"), "{report}");
    let LoadedModel::Wiretap { model, state_dist } = m else { panic!() };
    assert_eq!(model.prob(1, 1, 1, 0), 0.4);
    assert!(state_dist.is_none());
}

#[test]
fn row_within_file_tolerance_is_accepted_and_renormalized() {
    let text = BINARY.replace("[[[0.5, 0.2]", "[[[0.499999999, 0.2]");
    let LoadedModel::Wiretap { model, .. } = load(&text).unwrap() else { panic!() };
    let total: f64 = model.law().row(0).iter().sum();
    assert!((total - 1.0).abs() < 1e-15);
}

#[test]
fn row_outside_tolerance_names_the_row() {
    let text = BINARY.replace("[[[0.5, 0.2]", "[[[0.49999, 0.2]");
    match load(&text) {
        Err(CliError::RowSum { row, .. }) => assert_eq!(row, vec![0]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn negative_probability_names_the_cell() {
    let text = BINARY.replace("[[0.1, 0.3], [0.4, 0.2]]", "[[0.1, 0.3], [0.7, -0.1]]");
    let e = load(&text).unwrap_err();
    let CliError::Negative { cell, value, .. } = &e else { panic!("{e:?}") };
    assert_eq!(cell, &vec![1, 1, 1, 1]);
    assert_eq!(*value, -0.1);
    assert_eq!(e.to_json()["error"]["cell"], serde_json::json!([1, 1, 1, 1]));
}

#[test]
fn failure_classes_have_distinct_codes() {
    let malformed = load("{ \"kind\": ").unwrap_err();
    let mismatch = load(&BINARY.replace("\"x\": 2", "\"x\": 3")).unwrap_err();
    let row = load(&BINARY.replace("[[[0.5, 0.2]", "[[[0.6, 0.2]")).unwrap_err();
    let negative = load(&BINARY.replace("[[[0.5, 0.2]", "[[[-0.5, 1.2]")).unwrap_err();
    let errors = [&malformed, &mismatch, &row, &negative];
    let codes: Vec<&str> = errors.iter().map(|e| e.code()).collect();
    assert_eq!(codes, ["malformed_json", "alphabet_mismatch", "row_sum", "negative_probability"]);
    let mut exits: Vec<i32> = errors.iter().map(|e| e.exit_code()).collect();
    exits.dedup();
    assert_eq!(exits.len(), 4);
    assert!(exits.iter().all(|&c| c != 0));
}

#[test]
fn unknown_fields_are_rejected() {
    let text = BINARY.replace("\"kind\"", "\"colour\": 1, \"kind\"");
    assert_eq!(load(&text).unwrap_err().code(), "malformed_json");
}

#[test]
fn point_to_point_files_may_omit_y2_and_label_symbols() {
    let text = r#"{
      "kind": "wiretap",
      "alphabets": { "x": ["a", "b"], "y": 2, "z": 1 },
      "law": [[[1.0], [0.0]], [[0.0], [1.0]]]
    }"#;
    let LoadedModel::Wiretap { model, .. } = load(text).unwrap() else { panic!() };
    assert!(model.is_point_to_point());
    assert_eq!(model.prob(1, 1, 0, 0), 1.0);
}

#[test]
fn gp_files_need_a_state_distribution() {
    let text = r#"{
      "kind": "gp",
      "alphabets": { "x": 2, "y": 2, "z": 2 },
      "law": [[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]]
    }"#;
    assert!(load(text).is_err());
    let with_state = text.replace("\"law\"", "\"state_dist\": [0.5, 0.5], \"law\"");
    let LoadedModel::Gp(g) = load(&with_state).unwrap() else { panic!() };
    assert_eq!(g.prob(1, 0, 1, 0), 1.0);
}

#[test]
fn models_survive_a_write_and_read() {
    let LoadedModel::Wiretap { model, .. } = load(BINARY).unwrap() else { panic!() };
    let text = serde_json::to_string(&ChannelFile::from_wiretap(&model, None)).unwrap();
    let LoadedModel::Wiretap { model: back, .. } = load(&text).unwrap() else { panic!() };
    assert_eq!(back, model);
}
