//! Seeded differential runs of the deciders against the subset oracles.

use anyhow::Result;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use strict_gammoid::corpus::{random_digraph, random_set_system};
use strict_gammoid::lattice::{is_strict_gammoid_bruteforce, is_transversal_bruteforce, SweepMode};
use strict_gammoid::matroid::{Minor, TransversalMatroid};
use strict_gammoid::{
    decide_contraction, decide_deletion, DigraphRep, Element, ElementSet, OracleLimit, SetSystem,
};

use crate::format::{print_bipartite, print_digraph, NamedSystem};
use crate::report::Report;

/// Digraphs on 4 to 9 vertices, weighted towards 8 and 9. Sinks are drawn
/// with probability 0.55 and arcs with 0.15, 0.25 or 0.35 in rotation.
/// Deletions that leave the class are rare (a few per thousand digraphs)
/// and almost all sit on 8 or 9 vertices.
pub fn deletion_corpus(seed: u64, count: usize) -> Vec<DigraphRep> {
    const SIZES: [usize; 9] = [4, 5, 6, 7, 8, 9, 8, 9, 9];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_digraph(&mut rng, SIZES[i % 9], [0.15, 0.25, 0.35][i / 9 % 3], 0.55))
        .collect()
}

/// Set systems on 3 to 8 elements with 1 to 5 sets.
pub fn contraction_corpus(seed: u64, count: usize) -> Vec<SetSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_set_system(&mut rng, 3 + i % 6, 1 + i % 5, [0.3, 0.45, 0.6][i % 3]))
        .collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub presentations: usize,
    pub cases: usize,
    pub yes: usize,
    pub no: usize,
    pub disagreements: usize,
    /// The first disagreement, if any, with its input as canonical text.
    pub first_disagreement: Option<Value>,
}

impl Tally {
    fn record(&mut self, decided: bool, oracle: bool, input: impl FnOnce() -> Value) {
        self.cases += 1;
        if decided {
            self.yes += 1;
        } else {
            self.no += 1;
        }
        if decided != oracle {
            self.disagreements += 1;
            if self.first_disagreement.is_none() {
                let mut v = input();
                v["decided"] = json!(decided);
                v["oracle"] = json!(oracle);
                self.first_disagreement = Some(v);
            }
        }
    }
}

/// Every element of every digraph: `decide_deletion` against the γ sweep of
/// the deletion.
pub fn run_deletions(corpus: &[DigraphRep], limit: OracleLimit) -> Result<Tally> {
    let mut tally = Tally {
        presentations: corpus.len(),
        ..Tally::default()
    };
    for d in corpus {
        let n = d.ground_size();
        for e in (0..n).map(Element::new) {
            let decided = decide_deletion(d, e)?.verdict.is_yes();
            let minus = Minor::delete(d.matroid(), ElementSet::singleton(n, e));
            let oracle = is_strict_gammoid_bruteforce(&minus, limit, SweepMode::Full)?.holds();
            tally.record(
                decided,
                oracle,
                || json!({ "input": print_digraph(d), "element": e.index() }),
            );
        }
    }
    Ok(tally)
}

/// Every element of every set system: `decide_contraction` against the β
/// sweep of the contraction.
pub fn run_contractions(corpus: &[SetSystem], limit: OracleLimit) -> Result<Tally> {
    let mut tally = Tally {
        presentations: corpus.len(),
        ..Tally::default()
    };
    for system in corpus {
        let n = system.ground_size();
        let t = TransversalMatroid::new(system.clone());
        for e in (0..n).map(Element::new) {
            let decided = decide_contraction(system, e, limit)?.verdict.is_yes();
            let con = Minor::contract(&t, ElementSet::singleton(n, e));
            let oracle = is_transversal_bruteforce(&con, limit, SweepMode::Full)?.holds();
            tally.record(decided, oracle, || {
                let named = NamedSystem::numbered(system.clone(), "a");
                json!({ "input": print_bipartite(&named), "element": e.index() })
            });
        }
    }
    Ok(tally)
}

pub fn fuzz(seed: u64, count: usize, limit: OracleLimit) -> Result<Report> {
    let deletion = run_deletions(&deletion_corpus(seed, count), limit)?;
    let contraction = run_contractions(&contraction_corpus(seed, count), limit)?;
    let mut report = Report::new("fuzz", b"", json!({ "seed": seed, "count": count }));
    let agree = deletion.disagreements == 0 && contraction.disagreements == 0;
    report.verdict = Some(if agree { "yes" } else { "no" });
    report.witness = deletion
        .first_disagreement
        .clone()
        .or_else(|| contraction.first_disagreement.clone());
    report.tables = Some(json!({ "deletion": deletion, "contraction": contraction }));
    Ok(report)
}
