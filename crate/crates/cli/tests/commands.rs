mod common;

use common::{fixture, LIMIT};
use gammoid_cli::commands::{self, OracleMode};
use gammoid_cli::format::{parse_bipartite, parse_digraph, parse_flats, print_digraph};
use serde_json::Value;
use strict_gammoid::OracleLimit;

fn json(report: gammoid_cli::report::Report) -> Value {
    serde_json::from_str(&report.to_json()).unwrap()
}

fn payload(v: &Value, key: &str) -> String {
    v["payloads"][key]
        .as_str()
        .unwrap_or_else(|| panic!("no payload {key}"))
        .to_string()
}

#[test]
fn deleting_from_u24() {
    let v = json(commands::delete_check(&fixture("u24.digraph"), 3, LIMIT).unwrap());
    assert_eq!(v["verdict"], "yes");
    assert_eq!(
        payload(&v, "representation"),
        "vertices 3\nsinks 1 2\narc 0 1\narc 0 2\n"
    );
    assert_eq!(v["tables"]["gamma"][0]["gamma"], 2);
}

#[test]
fn deleting_from_a_free_matroid() {
    let v = json(commands::delete_check(&fixture("free.digraph"), 0, LIMIT).unwrap());
    assert_eq!(v["verdict"], "yes");
    assert_eq!(payload(&v, "representation"), "vertices 2\nsinks 0 1\n");
}

#[test]
fn pinned_deletion_is_no_with_a_checked_witness() {
    let v = json(commands::delete_check(&fixture("pinned_no.digraph"), 3, LIMIT).unwrap());
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["witness"]["kind"], "negative_eta");
    assert_eq!(v["witness"]["eta"], -1);
    assert_eq!(v["witness"]["oracle_gamma"], -1);
    assert!(v["payloads"].get("representation").is_none());
}

#[test]
fn contracting_u24() {
    let v = json(commands::contract_check(&fixture("u24.bipartite"), 3, LIMIT).unwrap());
    assert_eq!(v["verdict"], "yes");
    let p = parse_bipartite(&payload(&v, "presentation")).unwrap();
    assert_eq!(p.system.ground_size(), 3);
    let sets: Vec<Vec<usize>> = p.system.sets().iter().map(|s| s.indices()).collect();
    assert_eq!(sets, [[0, 1, 2]]);
}

#[test]
fn contracting_a_loop_keeps_the_sets() {
    let v = json(commands::contract_check(&fixture("loop.bipartite"), 2, LIMIT).unwrap());
    assert_eq!(v["verdict"], "yes");
    assert_eq!(
        payload(&v, "presentation"),
        "elements 2\nset a 0 1\nset b 1\n"
    );
}

#[test]
fn pinned_contraction_is_no() {
    let v = json(commands::contract_check(&fixture("pinned_no_dual.bipartite"), 3, LIMIT).unwrap());
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["witness"]["oracle_gamma"], -1);
}

#[test]
fn maximalizing_adds_the_arc_to_the_loop() {
    let v = json(commands::maximalize_cmd(&fixture("loop.digraph")).unwrap());
    assert_eq!(
        payload(&v, "representation"),
        "vertices 3\nsinks 1\narc 0 1\narc 0 2\n"
    );
    assert_eq!(v["trace"]["added_arcs"], serde_json::json!([[0, 2]]));
}

#[test]
fn flats_of_u24_and_the_loop_example() {
    let v = json(commands::read_flats_cmd(&fixture("u24.digraph")).unwrap());
    assert_eq!(
        payload(&v, "flats"),
        "ground 4\nflat rank 2 gamma 2 elements 0 1 2 3\n"
    );
    let v = json(commands::read_flats_cmd(&fixture("loop.digraph")).unwrap());
    assert_eq!(
        payload(&v, "flats"),
        "ground 3\nflat rank 0 gamma 1 elements 2\nflat rank 1 gamma 1 elements 0 1 2\n"
    );
    parse_flats(&payload(&v, "flats")).unwrap();
}

#[test]
fn dualizing_both_ways() {
    let v = json(commands::dualize(&fixture("u24.bipartite"), LIMIT).unwrap());
    assert_eq!(payload(&v, "dual"), fixture("u24.digraph"));
    let v = json(commands::dualize(&fixture("u24.digraph"), LIMIT).unwrap());
    assert_eq!(
        payload(&v, "dual"),
        "elements 4\nset n0 0 1 2 3\nset n1 0 1 2 3\n"
    );
    assert!(commands::dualize(&fixture("k4.flats"), LIMIT).is_err());
}

#[test]
fn k4_is_not_transversal() {
    let v =
        json(commands::oracle(&fixture("k4.flats"), OracleMode::BetaAll, false, LIMIT).unwrap());
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["tables"]["beta"][0]["set"], serde_json::json!([]));
    assert_eq!(v["tables"]["beta"][0]["value"], -1);
    assert_eq!(v["witness"]["set"], serde_json::json!([]));
}

#[test]
fn gamma_tables_of_u24_and_free() {
    let v = json(
        commands::oracle(&fixture("u24.digraph"), OracleMode::GammaAll, false, LIMIT).unwrap(),
    );
    assert_eq!(v["verdict"], "yes");
    let rows = v["tables"]["gamma"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[15]["set"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(rows[15]["value"], 2);
    assert!(rows.iter().all(|r| r["value"].as_i64().unwrap() >= 0));
    let v = json(
        commands::oracle(&fixture("free.digraph"), OracleMode::GammaAll, false, LIMIT).unwrap(),
    );
    assert!(v["tables"]["gamma"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["value"] == 0));
}

#[test]
fn oracle_modes_agree_with_pruning() {
    for file in [
        "u24.digraph",
        "pinned_no.digraph",
        "k4.flats",
        "u24.bipartite",
        "pinned_no_dual.bipartite",
    ] {
        for mode in [OracleMode::StrictGammoid, OracleMode::Transversal] {
            let full = json(commands::oracle(&fixture(file), mode, false, LIMIT).unwrap());
            let pruned = json(commands::oracle(&fixture(file), mode, true, LIMIT).unwrap());
            assert_eq!(full["verdict"], pruned["verdict"], "{file}");
            assert_eq!(full["witness"], pruned["witness"], "{file}");
        }
    }
}

#[test]
fn cyclic_flats_mode_reprints_the_k4_family() {
    let v = json(
        commands::oracle(&fixture("k4.flats"), OracleMode::CyclicFlats, false, LIMIT).unwrap(),
    );
    assert_eq!(v["tables"]["cyclic_flats"].as_array().unwrap().len(), 6);
    let family = parse_flats(&payload(&v, "flats")).unwrap();
    assert_eq!(
        family.sets().collect::<Vec<_>>(),
        parse_flats(&fixture("k4.flats"))
            .unwrap()
            .sets()
            .collect::<Vec<_>>()
    );
}

#[test]
fn oracle_refuses_beyond_the_limit() {
    let e = commands::oracle(
        &fixture("pinned_no.digraph"),
        OracleMode::GammaAll,
        false,
        OracleLimit(8),
    )
    .unwrap_err();
    assert!(format!("{e:#}").contains("refusing"), "{e:#}");
}

#[test]
fn element_out_of_range_is_an_error() {
    assert!(commands::delete_check(&fixture("u24.digraph"), 4, LIMIT).is_err());
    assert!(commands::contract_check(&fixture("u24.bipartite"), 9, LIMIT).is_err());
}

#[test]
fn payloads_reparse_exactly() {
    let v = json(commands::delete_check(&fixture("u24.digraph"), 3, LIMIT).unwrap());
    let text = payload(&v, "representation");
    assert_eq!(print_digraph(&parse_digraph(&text).unwrap()), text);
}

#[test]
fn fuzz_reports_agreement() {
    let v = json(gammoid_cli::fuzz::fuzz(2, 30, LIMIT).unwrap());
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["tables"]["deletion"]["disagreements"], 0);
    assert_eq!(v["tables"]["contraction"]["disagreements"], 0);
    assert!(v["tables"]["deletion"]["cases"].as_u64().unwrap() > 30);
}
