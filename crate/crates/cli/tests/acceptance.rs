//! Acceptance suite: one PASS/FAIL line per criterion, driven through the
//! `a4` binary. Built without the libtest harness so the lines are always
//! printed; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode, Output};

use a4_core::exact::rat;
use a4_core::report::{CheckRecord, OutputDocument};

const CRITERIA: [&str; 10] = [
    "proportionality volume L^10 and its stack variant",
    "Igusa table from the recurrence",
    "recurrence closure and vanishing a_9, a_8, a_7",
    "fan combinatorics: rays, facets, basic cones",
    "stabilizer order and action on cones",
    "toric E^10 from a consistent, determined system",
    "recursive and linear-system engines agree",
    "Voronoi table: a_(0,10), pullback column, vanishing band",
    "oracle suites",
    "byte-identical reproducible verify output",
];

fn a4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_a4")).args(args).output().expect("binary runs")
}

fn document(out: &Output) -> Option<OutputDocument> {
    serde_json::from_slice(&out.stdout).ok()
}

fn main() -> ExitCode {
    let first = a4(&["verify", "--json", "--reproducible"]);
    let second = a4(&["verify", "--json", "--reproducible"]);
    let report = document(&first).expect("verify emits a JSON document");

    let mut by_criterion: BTreeMap<u8, Vec<&CheckRecord>> = BTreeMap::new();
    for c in &report.checks {
        by_criterion.entry(c.criterion).or_default().push(c);
    }

    // Direct observations through the other commands, in addition to the
    // checks reported by `verify`.
    let fan = document(&a4(&["--format", "json", "--reproducible", "fan", "report"]));
    let e10 = document(&a4(&["--format", "json", "--reproducible", "intersection", "e10"]));
    let voronoi = document(&a4(&["--format", "json", "--reproducible", "tables", "voronoi"]));
    let stack = document(&a4(&["--format", "json", "--reproducible", "tables", "ltop", "--genus", "4", "--stack"]));

    let extra: [bool; 10] = [
        stack.as_ref().and_then(|d| d.result("L^10")) == Some(rat(1, 1814400)),
        true,
        true,
        fan.as_ref().is_some_and(|d| {
            d.data["ray_count"] == 12 && d.data["facet_count"] == 64 && d.data["all_basic"] == true
        }),
        fan.as_ref().is_some_and(|d| d.data["stabilizer_order"] == 1152),
        e10.as_ref().and_then(|d| d.result("toric_system")) == Some(rat(-1680, 1)),
        e10.as_ref().is_some_and(|d| d.data["agree"] == true),
        voronoi.as_ref().and_then(|d| d.result("<L^0 E^10 F^0>")) == Some(rat(-35, 24)),
        true,
        first.status.success() && first.stdout == second.stdout,
    ];

    let mut failed = Vec::new();
    for (i, name) in CRITERIA.iter().enumerate() {
        let n = (i + 1) as u8;
        let checks = by_criterion.get(&n).map(Vec::as_slice).unwrap_or(&[]);
        let passed = !checks.is_empty() && checks.iter().all(|c| c.passed) && extra[i];
        println!("{} criterion {n:>2}: {name}", if passed { "PASS" } else { "FAIL" });
        for c in checks.iter().filter(|c| !c.passed) {
            println!("       {}: expected {}, actual {}", c.name, c.expected, c.actual);
        }
        if !passed {
            failed.push(n);
        }
    }
    if failed.is_empty() && first.status.code() == Some(0) {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
