//! Deciding whether one deletion keeps a strict gammoid, and whether one
//! contraction keeps a transversal matroid.
//!
//! The deletion procedure never enumerates subsets. From the maximal
//! representation of `M+` it reads the cyclic flats with positive γ, closes
//! them twice under pairwise joins, removes `e`, and recomputes γ on the
//! survivors (the η recursion). Those values either expose a negative γ in
//! `M = M+ \ e`, or pin down the only possible maximal representation of
//! `M`, which is then checked against `M` on unions of pairs of its flats.

use std::collections::HashMap;

use crate::gammoid::{
    construct_from_flats, maximalize, neighbourhood_multiset, read_flats, ConstructError,
    DigraphRep, StrictGammoid,
};
use crate::ground::{matching_size, transversal_of, HallViolation, SetSystem};
use crate::lattice::{CyclicFlatFamily, FlatRecord};
use crate::matroid::{Matroid, RankTable, TransversalMatroid};
use crate::set::{Element, ElementSet};
use crate::{Error, OracleLimit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

/// Why the answer is NO. Sets use the labels of the input ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// A cyclic flat of `M` whose η value is negative.
    NegativeEta { flat: ElementSet, eta: i64 },
    /// The positive η values over proper flats sum past `|E(M)|`.
    BoundExceeded { sum: i64, limit: usize },
    /// The weighted flats have no transversal; `indices` point into the
    /// weighted copy list and `union` is what they cover.
    NoTransversal {
        indices: Vec<usize>,
        union: ElementSet,
    },
    RankMismatch {
        z0: ElementSet,
        z1: ElementSet,
        rank_m: usize,
        rank_m_prime: usize,
    },
    ClosureMismatch {
        z0: ElementSet,
        z1: ElementSet,
        closure_m: ElementSet,
        closure_m_prime: ElementSet,
    },
}

/// How a deletion was answered without running the main procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shortcut {
    /// `e` has rank zero.
    Loop,
    /// `e` is a sink that no arc enters.
    UnreachedSink,
}

/// Intermediate families of the deletion procedure, in input labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionTrace {
    pub shortcut: Option<Shortcut>,
    /// Cyclic flats of `M+` with positive γ, with their γ.
    pub flats: CyclicFlatFamily,
    /// Pairwise joins of `flats` in `M+`.
    pub first_joins: CyclicFlatFamily,
    /// Pairwise joins of `first_joins` in `M+`.
    pub second_joins: CyclicFlatFamily,
    /// Sets `F - e` that are cyclic flats of `M`, with ranks in `M` and
    /// their η values.
    pub candidates: CyclicFlatFamily,
    /// Candidates with positive η.
    pub positive: CyclicFlatFamily,
}

impl DeletionTrace {
    fn trivial(n: usize, shortcut: Option<Shortcut>) -> Self {
        let empty = CyclicFlatFamily::empty(n);
        DeletionTrace {
            shortcut,
            flats: empty.clone(),
            first_joins: empty.clone(),
            second_joins: empty.clone(),
            candidates: empty.clone(),
            positive: empty,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionDecision {
    pub verdict: Verdict,
    /// On YES, the maximal representation of `M+ \ e` on `n - 1` vertices.
    pub representation: Option<DigraphRep>,
    /// `element_map[i]` is the input vertex behind vertex `i` of the
    /// representation.
    pub element_map: Vec<Element>,
    pub witness: Option<WitnessKind>,
    pub trace: DeletionTrace,
}

/// Pairwise joins of a family (each member with itself included), with
/// ranks in `m`.
pub fn family_joins<M: Matroid>(m: &M, family: &CyclicFlatFamily) -> CyclicFlatFamily {
    let records = family.records();
    let mut by_union: HashMap<u64, FlatRecord> = HashMap::new();
    let mut result: HashMap<u64, FlatRecord> = HashMap::new();
    for (i, a) in records.iter().enumerate() {
        for b in &records[i..] {
            let joined = if b.set.is_subset(a.set) {
                FlatRecord::new(a.set, a.rank)
            } else if a.set.is_subset(b.set) {
                FlatRecord::new(b.set, b.rank)
            } else {
                let union = a.set | b.set;
                *by_union.entry(union.bits()).or_insert_with(|| {
                    let (rank, set) = m.rank_and_closure(union);
                    FlatRecord::new(set, rank)
                })
            };
            result.entry(joined.set.bits()).or_insert(joined);
        }
    }
    CyclicFlatFamily::new(family.ground_size(), result.into_values().collect())
        .expect("keyed by set")
}

/// The sets `F - e` over `candidates` that are cyclic flats of `M+ \ e`,
/// ranked in `M+ \ e`. Sets keep the labels of `M+`.
pub fn family_e<M: Matroid>(
    mplus: &M,
    e: Element,
    candidates: &CyclicFlatFamily,
) -> CyclicFlatFamily {
    let mut kept: HashMap<u64, FlatRecord> = HashMap::new();
    for f in candidates {
        let z = f.set.without(e);
        if kept.contains_key(&z.bits()) {
            continue;
        }
        // Both the restriction to z and closures within E - e are computed
        // in M+, since z avoids e.
        let (rank, closure) = mplus.rank_and_closure(z);
        if closure.without(e) == z && mplus.is_cyclic(z) {
            kept.insert(z.bits(), FlatRecord::new(z, rank));
        }
    }
    CyclicFlatFamily::new(candidates.ground_size(), kept.into_values().collect())
        .expect("keyed by set")
}

/// `η(Z) = n(Z) - Σ_{Y ∈ family, Y ⊊ Z} η(Y)` for every member, attached as
/// its weight.
pub fn eta_family(family: &CyclicFlatFamily) -> CyclicFlatFamily {
    let mut records: Vec<FlatRecord> = family.records().to_vec();
    for i in 0..records.len() {
        let z = records[i];
        let below: i64 = records[..i]
            .iter()
            .filter(|y| y.set.is_proper_subset(z.set))
            .map(|y| y.gamma.expect("earlier members have η"))
            .sum();
        records[i].gamma = Some(z.nullity() - below);
    }
    CyclicFlatFamily::new(family.ground_size(), records).expect("same sets as the input")
}

/// η of an arbitrary set `x` with respect to `family`.
pub fn eta<M: Matroid>(m: &M, family: &CyclicFlatFamily, x: ElementSet) -> i64 {
    let with_eta = eta_family(family);
    if let Some(r) = with_eta.get(x) {
        return r.gamma.expect("η attached");
    }
    let below: i64 = with_eta
        .iter()
        .filter(|y| y.set.is_proper_subset(x))
        .map(|y| y.gamma.expect("η attached"))
        .sum();
    m.nullity(x) as i64 - below
}

/// Maps sets on `E - e` (input labels) to the renumbered ground and back.
struct Relabel {
    n: usize,
    e: Element,
}

impl Relabel {
    fn down(&self, x: ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.n - 1,
            x.without(self.e)
                .iter()
                .map(|v| if v > self.e { v.index() - 1 } else { v.index() }),
        )
    }

    fn up(&self, x: ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.n,
            x.iter().map(|v| {
                if v.index() >= self.e.index() {
                    v.index() + 1
                } else {
                    v.index()
                }
            }),
        )
    }

    fn element_map(&self) -> Vec<Element> {
        (0..self.n)
            .filter(|&v| v != self.e.index())
            .map(Element::new)
            .collect()
    }
}

/// Decides whether `M(D, V, S) \ e` is a strict gammoid; on YES the
/// decision carries its maximal representation.
pub fn decide_deletion(d: &DigraphRep, e: Element) -> Result<DeletionDecision, Error> {
    let n = d.ground_size();
    if e.index() >= n {
        return Err(Error::ElementOutOfRange {
            element: e.index(),
            ground_size: n,
        });
    }
    let relabel = Relabel { n, e };
    let element_map = relabel.element_map();
    let original = d.matroid();

    let shortcut = if original.rank(ElementSet::singleton(n, e)) == 0 {
        Some(Shortcut::Loop)
    } else if d.sinks().contains(e) && !d.has_in_arcs(e) {
        Some(Shortcut::UnreachedSink)
    } else {
        None
    };
    if shortcut.is_some() {
        // No path from another vertex passes through e, so linkings of
        // e-free sets survive in D - e.
        return Ok(DeletionDecision {
            verdict: Verdict::Yes,
            representation: Some(maximalize(&d.without_vertex(e))),
            element_map,
            witness: None,
            trace: DeletionTrace::trivial(n, shortcut),
        });
    }

    let dmax = maximalize(d);
    let mplus = StrictGammoid::new(dmax.clone());
    let flats = read_flats(&dmax);
    let first_joins = family_joins(&mplus, &flats);
    let second_joins = family_joins(&mplus, &first_joins);
    // flats ⊆ first_joins ⊆ second_joins, so the last holds every candidate.
    let candidates = eta_family(&family_e(&mplus, e, &second_joins));
    let positive = CyclicFlatFamily::new(
        n,
        candidates
            .iter()
            .filter(|r| r.gamma.is_some_and(|g| g > 0))
            .copied()
            .collect(),
    )
    .expect("subfamily");
    let trace = DeletionTrace {
        shortcut: None,
        flats,
        first_joins,
        second_joins,
        candidates,
        positive,
    };
    let no = |witness: WitnessKind, trace: DeletionTrace| DeletionDecision {
        verdict: Verdict::No,
        representation: None,
        element_map: element_map.clone(),
        witness: Some(witness),
        trace,
    };

    if let Some(r) = trace
        .candidates
        .iter()
        .find(|r| r.gamma.is_some_and(|g| g < 0))
    {
        let witness = WitnessKind::NegativeEta {
            flat: r.set,
            eta: r.gamma.expect("η attached"),
        };
        return Ok(no(witness, trace));
    }

    let ground_m = ElementSet::full(n).without(e);
    let proper_sum: i64 = trace
        .positive
        .iter()
        .filter(|r| r.set != ground_m)
        .filter_map(|r| r.gamma)
        .sum();
    if proper_sum > (n - 1) as i64 {
        let witness = WitnessKind::BoundExceeded {
            sum: proper_sum,
            limit: n - 1,
        };
        return Ok(no(witness, trace));
    }

    let relabelled = trace
        .positive
        .map_sets(n - 1, |x| relabel.down(x))
        .expect("relabelling is injective on e-free sets");
    let candidate_rep = match construct_from_flats(&relabelled) {
        Ok(rep) => rep,
        Err(ConstructError::NoTransversal(HallViolation { indices, union })) => {
            let witness = WitnessKind::NoTransversal {
                indices,
                union: relabel.up(union),
            };
            return Ok(no(witness, trace));
        }
        Err(ConstructError::BoundExceeded { sum, limit }) => {
            return Ok(no(WitnessKind::BoundExceeded { sum, limit }, trace));
        }
        Err(ConstructError::InvalidGamma { .. }) => {
            unreachable!("only positive η values are passed on")
        }
    };

    // Ranks and closures of M are read off D directly: linkings of e-free
    // sets in D never need e as a source.
    let m_prime = StrictGammoid::new(candidate_rep.clone());
    let records = trace.positive.records();
    for (i, a) in records.iter().enumerate() {
        for b in &records[i..] {
            let union = a.set | b.set;
            let (rank_m, closure_plus) = mplus.rank_and_closure(union);
            let closure_m = closure_plus.without(e);
            let (rank_m_prime, closure_prime) = m_prime.rank_and_closure(relabel.down(union));
            if rank_m != rank_m_prime {
                let witness = WitnessKind::RankMismatch {
                    z0: a.set,
                    z1: b.set,
                    rank_m,
                    rank_m_prime,
                };
                return Ok(no(witness, trace));
            }
            let closure_m_prime = relabel.up(closure_prime);
            if closure_m != closure_m_prime {
                let witness = WitnessKind::ClosureMismatch {
                    z0: a.set,
                    z1: b.set,
                    closure_m,
                    closure_m_prime,
                };
                return Ok(no(witness, trace));
            }
        }
    }

    Ok(DeletionDecision {
        verdict: Verdict::Yes,
        representation: Some(maximalize(&candidate_rep)),
        element_map,
        witness: None,
        trace,
    })
}

/// A digraph presenting the dual of the transversal matroid of `system`.
///
/// With a transversal `T` matched by `φ`, each `t ∈ T` points at
/// `A_φ(t) - t` and the sinks are `E - T`. The system must have exactly as
/// many sets as the matroid's rank, otherwise no transversal exists.
pub fn dual_digraph_of_transversal(system: &SetSystem) -> Result<DigraphRep, HallViolation> {
    let n = system.ground_size();
    let phi = transversal_of(system)?;
    let mut out = vec![ElementSet::empty(n); n];
    let mut sinks = ElementSet::full(n);
    for (t, j) in phi.pairs() {
        out[t.index()] = system.sets()[j].without(t);
        sinks.remove(t);
    }
    Ok(DigraphRep::from_out_sets(n, out, sinks).expect("arcs come from the system"))
}

/// A presentation of the same transversal matroid with exactly `r` sets.
///
/// Sets are removed one at a time. Candidates are the sets left unmatched by
/// the canonical maximum matching, then all others in ascending order; a
/// removal is accepted only if the rank of every subset is unchanged, so
/// the ground set must be within `limit`.
pub fn normalize_presentation(system: &SetSystem, limit: OracleLimit) -> Result<SetSystem, Error> {
    let n = system.ground_size();
    let rank = matching_size(system, ElementSet::full(n));
    if system.len() == rank {
        return Ok(system.clone());
    }
    let stuck = |s: &SetSystem| Error::NormalizationFailed {
        sets: s.len(),
        rank,
    };
    if limit.check(n).is_err() {
        return Err(stuck(system));
    }
    let reference = RankTable::new(&TransversalMatroid::new(system.clone()), limit)?;
    let mut current = system.clone();
    while current.len() > rank {
        let matching = crate::ground::max_matching(&current, ElementSet::full(n));
        let matched: Vec<bool> = (0..current.len())
            .map(|j| matching.element_of(j).is_some())
            .collect();
        let order = (0..current.len())
            .filter(|&j| !matched[j])
            .chain((0..current.len()).filter(|&j| matched[j]));
        let mut removed = None;
        for j in order {
            let keep: Vec<usize> = (0..current.len()).filter(|&k| k != j).collect();
            let smaller = current.subsystem(&keep);
            let table = RankTable::new(&TransversalMatroid::new(smaller.clone()), limit)?;
            if table == reference {
                removed = Some(smaller);
                break;
            }
        }
        match removed {
            Some(smaller) => current = smaller,
            None => return Err(stuck(&current)),
        }
    }
    Ok(current)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionDecision {
    pub verdict: Verdict,
    /// On YES, a presentation of `M / e` on the renumbered ground `E - e`.
    pub presentation: Option<SetSystem>,
    pub element_map: Vec<Element>,
    pub witness: Option<WitnessKind>,
    /// The normalized presentation that was dualized, when that step ran.
    pub normalized: Option<SetSystem>,
    /// The deletion decision on the dual, when that step ran.
    pub dual_trace: Option<DeletionDecision>,
}

/// Decides whether `M[𝓐] / e` is transversal; on YES the decision carries a
/// presentation of it.
pub fn decide_contraction(
    system: &SetSystem,
    e: Element,
    limit: OracleLimit,
) -> Result<ContractionDecision, Error> {
    let n = system.ground_size();
    if e.index() >= n {
        return Err(Error::ElementOutOfRange {
            element: e.index(),
            ground_size: n,
        });
    }
    let relabel = Relabel { n, e };
    let element_map = relabel.element_map();
    if !system.support().contains(e) {
        // A loop: contracting it is deleting it.
        let sets = system.sets().iter().map(|&a| relabel.down(a)).collect();
        return Ok(ContractionDecision {
            verdict: Verdict::Yes,
            presentation: Some(SetSystem::new(n - 1, sets)?),
            element_map,
            witness: None,
            normalized: None,
            dual_trace: None,
        });
    }
    let normalized = normalize_presentation(system, limit)?;
    let dual =
        dual_digraph_of_transversal(&normalized).map_err(|_| Error::NormalizationFailed {
            sets: normalized.len(),
            rank: matching_size(&normalized, ElementSet::full(n)),
        })?;
    let deletion = decide_deletion(&dual, e)?;
    let presentation = deletion.representation.as_ref().map(neighbourhood_multiset);
    Ok(ContractionDecision {
        verdict: deletion.verdict,
        presentation,
        element_map,
        witness: deletion.witness.clone(),
        normalized: Some(normalized),
        dual_trace: Some(deletion),
    })
}
