//! The JSON report every command writes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use strict_gammoid::decide::{DeletionTrace, Shortcut};
use strict_gammoid::lattice::CyclicFlatFamily;
use strict_gammoid::{Element, ElementSet, Verdict, WitnessKind};

/// Fields serialize in declaration order. Nothing here depends on time or
/// paths, so equal inputs give byte-identical reports.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    /// SHA-256 of the input bytes, hex encoded.
    pub input_digest: String,
    pub parameters: Value,
    pub warnings: Vec<String>,
    pub verdict: Option<&'static str>,
    pub witness: Option<Value>,
    pub trace: Option<Value>,
    pub tables: Option<Value>,
    /// Canonical text in one of the input formats, keyed by role.
    pub payloads: BTreeMap<&'static str, String>,
}

impl Report {
    pub fn new(command: &'static str, input: &[u8], parameters: Value) -> Self {
        Report {
            command,
            input_digest: digest(input),
            parameters,
            warnings: Vec::new(),
            verdict: None,
            witness: None,
            trace: None,
            tables: None,
            payloads: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports serialize");
        text.push('\n');
        text
    }

    pub fn verdict(&self) -> Option<Verdict> {
        match self.verdict {
            Some("yes") => Some(Verdict::Yes),
            Some("no") => Some(Verdict::No),
            _ => None,
        }
    }
}

pub fn digest(input: &[u8]) -> String {
    hex::encode(Sha256::digest(input))
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
    }
}

pub fn set_json(x: ElementSet) -> Vec<usize> {
    x.indices()
}

#[derive(Serialize)]
struct RecordJson {
    set: Vec<usize>,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<i64>,
}

/// Records of a family. The attached value is emitted under `value_name`
/// when that is `gamma` or `eta`, and dropped otherwise.
pub fn family_json(family: &CyclicFlatFamily, value_name: &str) -> Value {
    let records: Vec<RecordJson> = family
        .iter()
        .map(|r| RecordJson {
            set: set_json(r.set),
            rank: r.rank,
            gamma: r.gamma.filter(|_| value_name == "gamma"),
            eta: r.gamma.filter(|_| value_name == "eta"),
        })
        .collect();
    serde_json::to_value(records).expect("records serialize")
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WitnessJson {
    NegativeEta {
        flat: Vec<usize>,
        eta: i64,
        /// γ of the flat recomputed by the subset oracle, when in range.
        oracle_gamma: Option<i64>,
    },
    BoundExceeded {
        sum: i64,
        limit: usize,
    },
    NoTransversal {
        copies: Vec<usize>,
        union: Vec<usize>,
    },
    RankMismatch {
        z0: Vec<usize>,
        z1: Vec<usize>,
        rank_m: usize,
        rank_m_prime: usize,
    },
    ClosureMismatch {
        z0: Vec<usize>,
        z1: Vec<usize>,
        closure_m: Vec<usize>,
        closure_m_prime: Vec<usize>,
    },
}

pub fn witness_json(w: &WitnessKind, oracle_gamma: Option<i64>) -> Value {
    let w = match w {
        WitnessKind::NegativeEta { flat, eta } => WitnessJson::NegativeEta {
            flat: set_json(*flat),
            eta: *eta,
            oracle_gamma,
        },
        WitnessKind::BoundExceeded { sum, limit } => WitnessJson::BoundExceeded {
            sum: *sum,
            limit: *limit,
        },
        WitnessKind::NoTransversal { indices, union } => WitnessJson::NoTransversal {
            copies: indices.clone(),
            union: set_json(*union),
        },
        WitnessKind::RankMismatch {
            z0,
            z1,
            rank_m,
            rank_m_prime,
        } => WitnessJson::RankMismatch {
            z0: set_json(*z0),
            z1: set_json(*z1),
            rank_m: *rank_m,
            rank_m_prime: *rank_m_prime,
        },
        WitnessKind::ClosureMismatch {
            z0,
            z1,
            closure_m,
            closure_m_prime,
        } => WitnessJson::ClosureMismatch {
            z0: set_json(*z0),
            z1: set_json(*z1),
            closure_m: set_json(*closure_m),
            closure_m_prime: set_json(*closure_m_prime),
        },
    };
    serde_json::to_value(w).expect("witnesses serialize")
}

/// The deletion trace without the γ and η tables, which go under `tables`.
pub fn deletion_trace_json(trace: &DeletionTrace, element_map: &[Element]) -> Value {
    let shortcut = trace.shortcut.map(|s| match s {
        Shortcut::Loop => "loop",
        Shortcut::UnreachedSink => "unreached_sink",
    });
    serde_json::json!({
        "shortcut": shortcut,
        "element_map": element_map.iter().map(|e| e.index()).collect::<Vec<_>>(),
        "first_joins": family_json(&trace.first_joins, "rank"),
        "second_joins": family_json(&trace.second_joins, "rank"),
        "positive": family_json(&trace.positive, "eta"),
    })
}

pub fn deletion_tables_json(trace: &DeletionTrace) -> Value {
    serde_json::json!({
        "gamma": family_json(&trace.flats, "gamma"),
        "eta": family_json(&trace.candidates, "eta"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_sha256_hex() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn fields_keep_their_order() {
        let mut r = Report::new("x", b"1", serde_json::json!({"b": 1, "a": 2}));
        r.verdict = Some("yes");
        let text = r.to_json();
        let order = [
            "command",
            "input_digest",
            "parameters",
            "\"b\"",
            "\"a\"",
            "warnings",
            "verdict",
            "payloads",
        ];
        let positions: Vec<usize> = order.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
        assert_eq!(r.verdict(), Some(Verdict::Yes));
    }
}
