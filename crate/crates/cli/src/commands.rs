//! One function per subcommand, from input text to a [`Report`].

use anyhow::{bail, ensure, Context as _, Result};
use serde_json::{json, Value};
use strict_gammoid::decide::{dual_digraph_of_transversal, normalize_presentation};
use strict_gammoid::gammoid::{maximalize, neighbourhood_multiset, read_flats};
use strict_gammoid::lattice::{
    is_strict_gammoid_bruteforce, is_transversal_bruteforce, validate_axioms, FlatLattice,
    SweepMode, SweepOutcome,
};
use strict_gammoid::matroid::{matroid_from_cyclic_flats, Matroid, Minor, TransversalMatroid};
use strict_gammoid::{
    decide_contraction, decide_deletion, DigraphRep, Element, ElementSet, OracleLimit, WitnessKind,
    DEFAULT_ORACLE_LIMIT,
};

use crate::format::{
    parse_any, parse_bipartite, parse_digraph, print_bipartite, print_digraph, print_flats, Input,
    NamedSystem,
};
use crate::report::{
    deletion_tables_json, deletion_trace_json, family_json, set_json, verdict_name, witness_json,
    Report,
};

pub const LIMIT_VAR: &str = "MATROID_MAX_ORACLE_N";

/// Picks the oracle limit: an explicit flag, then the environment, then
/// the default.
pub fn oracle_limit(flag: Option<usize>) -> Result<OracleLimit> {
    if let Some(n) = flag {
        return Ok(OracleLimit(n));
    }
    match std::env::var(LIMIT_VAR) {
        Ok(v) => {
            let n = v
                .trim()
                .parse()
                .with_context(|| format!("{LIMIT_VAR}={v:?} is not a number"))?;
            Ok(OracleLimit(n))
        }
        Err(std::env::VarError::NotPresent) => Ok(OracleLimit(DEFAULT_ORACLE_LIMIT)),
        Err(e) => Err(e).context(LIMIT_VAR),
    }
}

fn element_in(n: usize, k: usize) -> Result<Element> {
    ensure!(k < n, "element {k} is outside the ground set 0..{n}");
    Ok(Element::new(k))
}

fn sink_warnings(d: &DigraphRep) -> Vec<String> {
    d.sinks_with_out_arcs()
        .iter()
        .map(|s| {
            format!(
                "sink {} has out-arcs; they do not affect the matroid",
                s.index()
            )
        })
        .collect()
}

/// γ of `flat` in `d` with `e` deleted, when the subset oracle is in range.
fn oracle_gamma(d: &DigraphRep, e: Element, flat: ElementSet, limit: OracleLimit) -> Option<i64> {
    let minus = Minor::delete(d.matroid(), ElementSet::singleton(d.ground_size(), e));
    let lattice = FlatLattice::new(&minus, limit).ok()?;
    Some(lattice.gamma(minus.compress(flat)))
}

fn witness_value(d: &DigraphRep, e: Element, w: &WitnessKind, limit: OracleLimit) -> Value {
    let check = match w {
        WitnessKind::NegativeEta { flat, .. } => oracle_gamma(d, e, *flat, limit),
        _ => None,
    };
    witness_json(w, check)
}

pub fn delete_check(input: &str, element: usize, limit: OracleLimit) -> Result<Report> {
    let d = parse_digraph(input)?;
    let e = element_in(d.ground_size(), element)?;
    let decision = decide_deletion(&d, e)?;
    let mut report = Report::new(
        "delete-check",
        input.as_bytes(),
        json!({ "element": element }),
    );
    report.warnings = sink_warnings(&d);
    report.verdict = Some(verdict_name(decision.verdict));
    report.witness = decision
        .witness
        .as_ref()
        .map(|w| witness_value(&d, e, w, limit));
    report.trace = Some(deletion_trace_json(&decision.trace, &decision.element_map));
    report.tables = Some(deletion_tables_json(&decision.trace));
    if let Some(rep) = &decision.representation {
        report.payloads.insert("representation", print_digraph(rep));
    }
    Ok(report)
}

pub fn contract_check(input: &str, element: usize, limit: OracleLimit) -> Result<Report> {
    let named = parse_bipartite(input)?;
    let n = named.system.ground_size();
    let e = element_in(n, element)?;
    let c = decide_contraction(&named.system, e, limit)?;
    let mut report = Report::new(
        "contract-check",
        input.as_bytes(),
        json!({ "element": element }),
    );
    report.verdict = Some(verdict_name(c.verdict));
    let element_map: Vec<usize> = c.element_map.iter().map(|x| x.index()).collect();
    match (&c.normalized, &c.dual_trace) {
        (Some(normalized), Some(deletion)) => {
            let dual = dual_digraph_of_transversal(normalized).expect("normalized systems dualize");
            report.witness = deletion
                .witness
                .as_ref()
                .map(|w| witness_value(&dual, e, w, limit));
            let mut trace = deletion_trace_json(&deletion.trace, &deletion.element_map);
            trace["element_map"] = json!(element_map);
            report.trace = Some(trace);
            report.tables = Some(deletion_tables_json(&deletion.trace));
            report.payloads.insert(
                "normalized",
                print_bipartite(&NamedSystem::numbered(normalized.clone(), "a")),
            );
            report.payloads.insert("dual", print_digraph(&dual));
            if let Some(p) = &c.presentation {
                report.payloads.insert(
                    "presentation",
                    print_bipartite(&NamedSystem::numbered(p.clone(), "a")),
                );
            }
        }
        _ => {
            // e is a loop and every set keeps its name.
            report.trace = Some(json!({ "shortcut": "loop", "element_map": element_map }));
            let p = c
                .presentation
                .clone()
                .expect("the loop case always answers YES");
            let kept = NamedSystem {
                system: p,
                names: named.names.clone(),
            };
            report
                .payloads
                .insert("presentation", print_bipartite(&kept));
        }
    }
    Ok(report)
}

pub fn maximalize_cmd(input: &str) -> Result<Report> {
    let d = parse_digraph(input)?;
    let max = maximalize(&d);
    let arcs = |from: &DigraphRep, to: &DigraphRep| -> Vec<[usize; 2]> {
        from.arcs()
            .filter(|&(u, v)| !to.has_arc(u, v))
            .map(|(u, v)| [u.index(), v.index()])
            .collect()
    };
    let mut report = Report::new("maximalize", input.as_bytes(), json!({}));
    report.warnings = sink_warnings(&d);
    report.trace = Some(json!({ "added_arcs": arcs(&max, &d), "removed_arcs": arcs(&d, &max) }));
    report
        .payloads
        .insert("representation", print_digraph(&max));
    Ok(report)
}

pub fn read_flats_cmd(input: &str) -> Result<Report> {
    let d = parse_digraph(input)?;
    let flats = read_flats(&maximalize(&d));
    let mut report = Report::new("read-flats", input.as_bytes(), json!({}));
    report.warnings = sink_warnings(&d);
    report.tables = Some(json!({ "gamma": family_json(&flats, "gamma") }));
    report.payloads.insert("flats", print_flats(&flats));
    Ok(report)
}

pub fn dualize(input: &str, limit: OracleLimit) -> Result<Report> {
    let mut report = Report::new("dualize", input.as_bytes(), json!({}));
    match parse_any(input)? {
        Input::Digraph(d) => {
            report.warnings = sink_warnings(&d);
            let system = neighbourhood_multiset(&d);
            let names = d
                .sinks()
                .complement()
                .iter()
                .map(|v| format!("n{}", v.index()))
                .collect();
            report
                .payloads
                .insert("dual", print_bipartite(&NamedSystem { system, names }));
        }
        Input::Bipartite(named) => {
            let normalized = normalize_presentation(&named.system, limit)?;
            let d = dual_digraph_of_transversal(&normalized).expect("normalized systems dualize");
            report.payloads.insert(
                "normalized",
                print_bipartite(&NamedSystem::numbered(normalized, "a")),
            );
            report.payloads.insert("dual", print_digraph(&d));
        }
        Input::Flats(_) => bail!("dualize takes a digraph or bipartite file"),
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleMode {
    GammaAll,
    BetaAll,
    CyclicFlats,
    StrictGammoid,
    Transversal,
}

impl OracleMode {
    fn name(self) -> &'static str {
        match self {
            OracleMode::GammaAll => "gamma-all",
            OracleMode::BetaAll => "beta-all",
            OracleMode::CyclicFlats => "cyclic-flats",
            OracleMode::StrictGammoid => "strict-gammoid",
            OracleMode::Transversal => "transversal",
        }
    }
}

fn sweep_witness(function: &str, outcome: &SweepOutcome) -> Option<Value> {
    outcome.witness.map(|(set, value)| {
        json!({ "kind": "negative_value", "function": function, "set": set_json(set), "value": value })
    })
}

fn all_values(n: usize, f: impl Fn(ElementSet) -> i64) -> Value {
    ElementSet::all_subsets(n)
        .map(|x| json!({ "set": set_json(x), "value": f(x) }))
        .collect()
}

pub fn oracle(input: &str, mode: OracleMode, pruned: bool, limit: OracleLimit) -> Result<Report> {
    let parsed = parse_any(input)?;
    let flats_matroid;
    let gammoid;
    let transversal;
    let m: &dyn Matroid = match &parsed {
        Input::Digraph(d) => {
            gammoid = d.matroid();
            &gammoid
        }
        Input::Bipartite(named) => {
            transversal = TransversalMatroid::new(named.system.clone());
            &transversal
        }
        Input::Flats(family) => {
            validate_axioms(family).context("the flats are not the cyclic flats of a matroid")?;
            flats_matroid = matroid_from_cyclic_flats(family)?;
            &flats_matroid
        }
    };
    let n = m.ground_size();
    limit
        .check(n)
        .with_context(|| format!("refusing the subset oracle; raise --max-n or {LIMIT_VAR}"))?;
    let sweep_mode = if pruned {
        SweepMode::Pruned
    } else {
        SweepMode::Full
    };
    let mut report = Report::new(
        "oracle",
        input.as_bytes(),
        json!({ "mode": mode.name(), "pruned": pruned, "max_n": limit.0 }),
    );
    let lattice = FlatLattice::new(&m, limit)?;
    match mode {
        OracleMode::GammaAll | OracleMode::StrictGammoid => {
            let outcome = is_strict_gammoid_bruteforce(&lattice, limit, sweep_mode)?;
            report.verdict = Some(if outcome.holds() { "yes" } else { "no" });
            report.witness = sweep_witness("gamma", &outcome);
            if mode == OracleMode::GammaAll {
                report.tables = Some(json!({ "gamma": all_values(n, |x| lattice.gamma(x)) }));
            }
        }
        OracleMode::BetaAll | OracleMode::Transversal => {
            let outcome = is_transversal_bruteforce(&lattice, limit, sweep_mode)?;
            report.verdict = Some(if outcome.holds() { "yes" } else { "no" });
            report.witness = sweep_witness("beta", &outcome);
            if mode == OracleMode::BetaAll {
                report.tables = Some(json!({ "beta": all_values(n, |x| lattice.beta(x)) }));
            }
        }
        OracleMode::CyclicFlats => {
            let rows: Value = lattice
                .flats()
                .iter()
                .map(|z| {
                    json!({
                        "set": set_json(z.set),
                        "rank": z.rank,
                        "gamma": z.gamma,
                        "beta": lattice.beta(z.set),
                    })
                })
                .collect();
            report.tables = Some(json!({ "cyclic_flats": rows }));
            report
                .payloads
                .insert("flats", print_flats(lattice.flats()));
        }
    }
    Ok(report)
}
