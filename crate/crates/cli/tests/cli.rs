use std::process::{Command, Output};

use a4_core::exact::{int, rat, Rational};
use a4_core::report::OutputDocument;

fn a4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_a4")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> OutputDocument {
    let mut all = vec!["--format", "json", "--reproducible"];
    all.extend_from_slice(args);
    let out = a4(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid document")
}

fn value(doc: &OutputDocument, name: &str) -> Rational {
    doc.result(name).unwrap_or_else(|| panic!("missing result {name}"))
}

#[test]
fn fan_report_fields() {
    let doc = json(&["fan", "report"]);
    assert_eq!(doc.data["ray_count"], 12);
    assert_eq!(doc.data["facet_count"], 64);
    assert_eq!(doc.data["top_cone_count"], 64);
    assert_eq!(doc.data["stabilizer_order"], 1152);
    assert_eq!(doc.data["all_basic"], true);
    assert_eq!(doc.data["cones"].as_array().unwrap().len(), 64);
    assert_eq!(doc.data["eta"].as_array().unwrap().len(), 10);
}

#[test]
fn intersection_e10_and_alias() {
    let doc = json(&["intersection", "e10"]);
    assert_eq!(value(&doc, "toric_system"), int(-1680));
    assert_eq!(value(&doc, "toric_recursive"), int(-1680));
    assert_eq!(value(&doc, "moduli"), rat(-35, 24));
    assert_eq!(doc.data["agree"], true);
    assert_eq!(doc.data["system"]["rank"], doc.data["system"]["unknowns"]);
    let alias = json(&["intersection", "E^10"]);
    assert_eq!(value(&alias, "toric_system"), int(-1680));
}

#[test]
fn transversal_point_is_one() {
    let report = json(&["fan", "report"]);
    let cone: Vec<String> = report.data["cones"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(cone.len(), 9);
    let expr = format!("E*{}", cone.join("*"));
    let doc = json(&["intersection", &expr]);
    assert_eq!(value(&doc, "toric_system"), int(1));
    assert_eq!(value(&doc, "toric_recursive"), int(1));
}

#[test]
fn monomials_outside_the_system_use_the_recursive_value() {
    let doc = json(&["intersection", "E^3*D1^2*D2^2*D3^3"]);
    assert!(doc.result("toric_system").is_none());
    assert_eq!(value(&doc, "toric_recursive"), int(2));
    assert!(doc.data["agree"].is_null());
    let doc = json(&["intersection", "E^9*D1"]);
    assert_eq!(value(&doc, "toric_system"), int(560));
    assert_eq!(doc.data["agree"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["intersection", "E^3"],
        vec!["intersection", "E*X1"],
        vec!["intersection", "D1^10"],
        vec!["intersection", "E*D13^9"],
        vec!["tables", "bogus"],
        vec!["tables", "igusa", "--genus", "3"],
        vec!["tables", "ltop", "--genus", "0"],
        vec!["--format", "yaml", "verify"],
        vec!["frobnicate"],
    ] {
        let out = a4(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn igusa_table_in_order() {
    let doc = json(&["tables", "igusa"]);
    let got: Vec<Rational> = doc.results.iter().map(|r| r.value.to_rational().unwrap()).collect();
    let expected = vec![
        rat(1, 907200),
        int(0),
        int(0),
        int(0),
        rat(-1, 3780),
        int(0),
        int(0),
        rat(-1759, 1680),
        int(0),
        rat(1636249, 1080),
        rat(101449217, 1440),
    ];
    assert_eq!(got, expected);
    assert!(!doc.notes.is_empty());
}

#[test]
fn voronoi_tables_in_both_bases() {
    let lfe = json(&["tables", "voronoi"]);
    assert_eq!(lfe.results.len(), 66);
    assert_eq!(value(&lfe, "<L^0 E^10 F^0>"), rat(-35, 24));
    assert_eq!(value(&lfe, "<L^6 E^0 F^4>"), rat(-1, 3780));
    assert_eq!(value(&lfe, "<L^3 E^5 F^2>"), int(0));
    let geo = json(&["tables", "voronoi", "--basis", "geometric"]);
    assert_eq!(value(&geo, "<L^10 D^0 E^0>"), rat(1, 907200));
    assert_eq!(value(&geo, "<L^6 D^4 E^0>"), rat(-1, 3780));
    assert_eq!(
        value(&geo, "<L^0 D^10 E^0>"),
        rat(101449217, 1440) + int(4i64.pow(10)) * rat(-35, 24)
    );
}

#[test]
fn ltop_variants() {
    assert_eq!(value(&json(&["tables", "ltop"]), "L^10"), rat(1, 907200));
    assert_eq!(value(&json(&["tables", "ltop", "--genus", "4", "--stack"]), "L^10"), rat(1, 1814400));
    assert_eq!(value(&json(&["tables", "ltop", "--genus", "1"]), "L^1"), rat(1, 12));
}

#[test]
fn text_output_and_timestamp() {
    let out = a4(&["tables", "ltop"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("L^10 = 1/907200"));
    assert!(text.contains("generated_at"));
    let out = a4(&["--reproducible", "tables", "ltop"]);
    assert!(!String::from_utf8(out.stdout).unwrap().contains("generated_at"));
}

#[test]
fn corrupted_b0_fails_verification() {
    let out = a4(&["verify", "--json", "--reproducible", "--corrupt-b0"]);
    assert_eq!(out.status.code(), Some(1));
    let doc: OutputDocument = serde_json::from_slice(&out.stdout).unwrap();
    let recurrence = doc
        .checks
        .iter()
        .find(|c| c.criterion == 3 && c.name.starts_with("b_(k-1)"))
        .unwrap();
    assert!(!recurrence.passed);
    assert_eq!(recurrence.actual, "fails at k = 1");
}
