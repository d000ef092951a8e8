#![allow(dead_code)]

use std::path::PathBuf;

use anyhow::Result;
use gammoid_cli::commands::{self, OracleMode};
use gammoid_cli::report::Report;
use strict_gammoid::OracleLimit;

pub const LIMIT: OracleLimit = OracleLimit(20);

pub fn fixture(name: &str) -> String {
    let path = dir("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn dir(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(name)
}

pub struct GoldenCase {
    pub name: &'static str,
    pub run: fn() -> Result<Report>,
}

/// Every worked example with a report, paired with `golden/<name>.json`.
pub const GOLDEN: &[GoldenCase] = &[
    GoldenCase {
        name: "delete_u24_3",
        run: || commands::delete_check(&fixture("u24.digraph"), 3, LIMIT),
    },
    GoldenCase {
        name: "delete_free_0",
        run: || commands::delete_check(&fixture("free.digraph"), 0, LIMIT),
    },
    GoldenCase {
        name: "delete_pinned_no_3",
        run: || commands::delete_check(&fixture("pinned_no.digraph"), 3, LIMIT),
    },
    GoldenCase {
        name: "contract_u24_3",
        run: || commands::contract_check(&fixture("u24.bipartite"), 3, LIMIT),
    },
    GoldenCase {
        name: "contract_loop_2",
        run: || commands::contract_check(&fixture("loop.bipartite"), 2, LIMIT),
    },
    GoldenCase {
        name: "contract_pinned_no_dual_3",
        run: || commands::contract_check(&fixture("pinned_no_dual.bipartite"), 3, LIMIT),
    },
    GoldenCase {
        name: "maximalize_loop",
        run: || commands::maximalize_cmd(&fixture("loop.digraph")),
    },
    GoldenCase {
        name: "read_flats_u24",
        run: || commands::read_flats_cmd(&fixture("u24.digraph")),
    },
    GoldenCase {
        name: "read_flats_loop",
        run: || commands::read_flats_cmd(&fixture("loop.digraph")),
    },
    GoldenCase {
        name: "dualize_u24_bipartite",
        run: || commands::dualize(&fixture("u24.bipartite"), LIMIT),
    },
    GoldenCase {
        name: "dualize_u24_digraph",
        run: || commands::dualize(&fixture("u24.digraph"), LIMIT),
    },
    GoldenCase {
        name: "oracle_k4_beta_all",
        run: || commands::oracle(&fixture("k4.flats"), OracleMode::BetaAll, false, LIMIT),
    },
    GoldenCase {
        name: "oracle_u24_gamma_all",
        run: || commands::oracle(&fixture("u24.digraph"), OracleMode::GammaAll, false, LIMIT),
    },
    GoldenCase {
        name: "oracle_free_gamma_all",
        run: || commands::oracle(&fixture("free.digraph"), OracleMode::GammaAll, false, LIMIT),
    },
    GoldenCase {
        name: "oracle_u24_transversal",
        run: || {
            commands::oracle(
                &fixture("u24.bipartite"),
                OracleMode::Transversal,
                false,
                LIMIT,
            )
        },
    },
    GoldenCase {
        name: "fuzz_seed_1",
        run: || gammoid_cli::fuzz::fuzz(1, 12, LIMIT),
    },
];

/// Golden cases whose report differs from the stored file.
pub fn golden_mismatches() -> Vec<&'static str> {
    GOLDEN
        .iter()
        .filter(|case| {
            let expected =
                std::fs::read_to_string(dir("golden").join(format!("{}.json", case.name)));
            let actual = (case.run)().map(|r| r.to_json());
            match (expected, actual) {
                (Ok(e), Ok(a)) => e != a,
                _ => true,
            }
        })
        .map(|case| case.name)
        .collect()
}
