//! Digraph presentations of strict gammoids.
//!
//! A digraph `D` on vertices `[0, n)` with sinks `S` presents the strict
//! gammoid in which `X` is independent iff it can be linked into `S` by
//! vertex-disjoint directed paths. Linking is computed as a unit-capacity
//! flow on the vertex-split network.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Mutex;

use crate::ground::{transversal_of, HallViolation, SetSystem};
use crate::lattice::{CyclicFlatFamily, FlatRecord};
use crate::matroid::{Matroid, Minor};
use crate::set::{Element, ElementSet};
use crate::Error;

/// A digraph with distinguished sinks. Vertices are the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigraphRep {
    n: usize,
    out: Vec<ElementSet>,
    sinks: ElementSet,
}

impl DigraphRep {
    /// The digraph without arcs.
    pub fn without_arcs(n: usize, sinks: ElementSet) -> Result<Self, Error> {
        Self::from_out_sets(n, vec![ElementSet::empty(n); n], sinks)
    }

    /// Builds from an arc list; self-arcs, repeated arcs and out-of-range
    /// endpoints are rejected.
    pub fn from_arcs<I>(n: usize, arcs: I, sinks: ElementSet) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out = vec![ElementSet::empty(n); n];
        for (u, v) in arcs {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::ElementOutOfRange {
                        element: x,
                        ground_size: n,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfArc(u));
            }
            if out[u].contains(Element::new(v)) {
                return Err(Error::DuplicateArc(u, v));
            }
            out[u].insert(Element::new(v));
        }
        Self::from_out_sets(n, out, sinks)
    }

    /// Builds from per-vertex out-neighbourhoods.
    pub fn from_out_sets(n: usize, out: Vec<ElementSet>, sinks: ElementSet) -> Result<Self, Error> {
        if n > crate::MAX_GROUND {
            return Err(Error::GroundTooLarge {
                size: n,
                limit: crate::MAX_GROUND,
            });
        }
        assert_eq!(out.len(), n, "one out-set per vertex");
        for set in out.iter().chain([&sinks]) {
            if set.ground_size() != n {
                return Err(Error::GroundMismatch {
                    expected: n,
                    found: set.ground_size(),
                });
            }
        }
        if let Some(v) = (0..n).find(|&v| out[v].contains(Element::new(v))) {
            return Err(Error::SelfArc(v));
        }
        Ok(DigraphRep { n, out, sinks })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn sinks(&self) -> ElementSet {
        self.sinks
    }

    pub fn out_neighbours(&self, v: Element) -> ElementSet {
        self.out[v.index()]
    }

    /// `N+[v]`: `v` together with the heads of its out-arcs.
    pub fn closed_neighbourhood(&self, v: Element) -> ElementSet {
        self.out[v.index()].with(v)
    }

    pub fn has_arc(&self, u: Element, v: Element) -> bool {
        self.out[u.index()].contains(v)
    }

    pub fn has_in_arcs(&self, v: Element) -> bool {
        self.out.iter().any(|o| o.contains(v))
    }

    /// Arcs in ascending `(tail, head)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |v| (Element::new(u), v)))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|o| o.len()).sum()
    }

    /// Sinks with out-arcs. Such arcs never change the matroid.
    pub fn sinks_with_out_arcs(&self) -> ElementSet {
        ElementSet::from_indices(
            self.n,
            self.sinks
                .iter()
                .filter(|s| !self.out[s.index()].is_empty())
                .map(Element::index),
        )
    }

    /// The digraph with `e` and its arcs removed; vertices above `e` shift
    /// down by one.
    pub fn without_vertex(&self, e: Element) -> DigraphRep {
        let m = self.n - 1;
        let shrink = |x: ElementSet| {
            ElementSet::from_indices(
                m,
                x.without(e)
                    .iter()
                    .map(|v| if v > e { v.index() - 1 } else { v.index() }),
            )
        };
        let out = (0..self.n)
            .filter(|&v| v != e.index())
            .map(|v| shrink(self.out[v]))
            .collect();
        DigraphRep {
            n: m,
            out,
            sinks: shrink(self.sinks),
        }
    }

    pub fn matroid(&self) -> StrictGammoid {
        StrictGammoid::new(self.clone())
    }
}

/// Vertex-disjoint paths, each listed from its source to its sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingCertificate {
    pub paths: Vec<Vec<Element>>,
}

impl LinkingCertificate {
    /// Paths start in `x`, end in a sink, follow arcs of `d`, and share no
    /// vertex.
    pub fn is_valid_for(&self, d: &DigraphRep, x: ElementSet) -> bool {
        let mut used = ElementSet::empty(d.ground_size());
        for path in &self.paths {
            let (Some(&first), Some(&last)) = (path.first(), path.last()) else {
                return false;
            };
            if !x.contains(first) || !d.sinks().contains(last) {
                return false;
            }
            if !path.windows(2).all(|w| d.has_arc(w[0], w[1])) {
                return false;
            }
            for &v in path {
                if used.contains(v) {
                    return false;
                }
                used.insert(v);
            }
        }
        true
    }
}

/// Unit-capacity flow network: vertex `v` becomes `2v -> 2v+1`, the source
/// feeds `2v` for `v ∈ X`, and `2s+1` drains to the target for sinks `s`.
struct LinkingNetwork {
    n: usize,
    head: Vec<usize>,
    cap: Vec<u8>,
    adj: Vec<Vec<usize>>,
}

impl LinkingNetwork {
    fn source(&self) -> usize {
        2 * self.n
    }

    fn target(&self) -> usize {
        2 * self.n + 1
    }

    fn add_edge(&mut self, from: usize, to: usize) {
        self.adj[from].push(self.head.len());
        self.head.push(to);
        self.cap.push(1);
        self.adj[to].push(self.head.len());
        self.head.push(from);
        self.cap.push(0);
    }

    fn build(d: &DigraphRep, x: ElementSet) -> Self {
        let n = d.ground_size();
        let mut net = LinkingNetwork {
            n,
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); 2 * n + 2],
        };
        for v in 0..n {
            net.add_edge(2 * v, 2 * v + 1);
        }
        for (u, v) in d.arcs() {
            net.add_edge(2 * u.index() + 1, 2 * v.index());
        }
        let (s, t) = (net.source(), net.target());
        for v in x {
            net.add_edge(s, 2 * v.index());
        }
        for v in d.sinks() {
            net.add_edge(2 * v.index() + 1, t);
        }
        net
    }

    /// Augments along shortest residual paths until none remain.
    fn max_flow(&mut self) -> usize {
        let (s, t) = (self.source(), self.target());
        let mut flow = 0;
        let mut via = vec![usize::MAX; self.adj.len()];
        loop {
            via.iter_mut().for_each(|v| *v = usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &id in &self.adj[u] {
                    let w = self.head[id];
                    if self.cap[id] > 0 && !seen[w] {
                        seen[w] = true;
                        via[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            if !seen[t] {
                return flow;
            }
            let mut w = t;
            while w != s {
                let id = via[w];
                self.cap[id] -= 1;
                self.cap[id ^ 1] += 1;
                w = self.head[id ^ 1];
            }
            flow += 1;
        }
    }

    /// Nodes with a residual path to the target.
    fn reaches_target(&self) -> Vec<bool> {
        let t = self.target();
        let mut reach = vec![false; self.adj.len()];
        reach[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(w) = queue.pop_front() {
            for &id in &self.adj[w] {
                let x = self.head[id];
                // Edge id ^ 1 runs x -> w.
                if self.cap[id ^ 1] > 0 && !reach[x] {
                    reach[x] = true;
                    queue.push_back(x);
                }
            }
        }
        reach
    }

    /// Nodes reachable from the source in the residual graph.
    fn reached_from_source(&self) -> Vec<bool> {
        let s = self.source();
        let mut reach = vec![false; self.adj.len()];
        reach[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let w = self.head[id];
                if self.cap[id] > 0 && !reach[w] {
                    reach[w] = true;
                    queue.push_back(w);
                }
            }
        }
        reach
    }

    fn carries_flow(&self, id: usize) -> bool {
        id.is_multiple_of(2) && self.cap[id] == 0
    }

    fn paths(&self) -> Vec<Vec<Element>> {
        let (s, t) = (self.source(), self.target());
        let mut paths = Vec::new();
        for &id in &self.adj[s] {
            if !self.carries_flow(id) {
                continue;
            }
            let mut path = Vec::new();
            let mut node = self.head[id];
            while node != t {
                // node is an in-copy; its only outgoing flow is to its out-copy.
                path.push(Element::new(node / 2));
                let out_copy = node + 1;
                let next = self.adj[out_copy]
                    .iter()
                    .copied()
                    .find(|&e| self.carries_flow(e))
                    .expect("flow is conserved");
                node = self.head[next];
            }
            paths.push(path);
        }
        paths
    }
}

/// Maximum number of vertex-disjoint paths from `x` into the sinks, with the
/// paths themselves.
pub fn linking_rank(d: &DigraphRep, x: ElementSet) -> (usize, LinkingCertificate) {
    let mut net = LinkingNetwork::build(d, x);
    let r = net.max_flow();
    (r, LinkingCertificate { paths: net.paths() })
}

/// The strict gammoid `M(D, V, S)` with memoized ranks.
#[derive(Debug)]
pub struct StrictGammoid {
    rep: DigraphRep,
    cache: Mutex<HashMap<u64, usize>>,
}

impl Clone for StrictGammoid {
    fn clone(&self) -> Self {
        StrictGammoid::new(self.rep.clone())
    }
}

impl StrictGammoid {
    pub fn new(rep: DigraphRep) -> Self {
        StrictGammoid {
            rep,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn representation(&self) -> &DigraphRep {
        &self.rep
    }

    fn remember(&self, x: ElementSet, r: usize) {
        self.cache
            .lock()
            .expect("rank cache poisoned")
            .insert(x.bits(), r);
    }
}

impl Matroid for StrictGammoid {
    fn ground_size(&self) -> usize {
        self.rep.ground_size()
    }

    fn rank(&self, x: ElementSet) -> usize {
        if let Some(&r) = self
            .cache
            .lock()
            .expect("rank cache poisoned")
            .get(&x.bits())
        {
            return r;
        }
        let r = LinkingNetwork::build(&self.rep, x).max_flow();
        self.remember(x, r);
        r
    }

    fn closure(&self, x: ElementSet) -> ElementSet {
        self.rank_and_closure(x).1
    }

    /// `f ∉ X` lies outside the closure exactly when its in-copy has a
    /// residual path to the target after a maximum flow from `X`.
    fn rank_and_closure(&self, x: ElementSet) -> (usize, ElementSet) {
        let mut net = LinkingNetwork::build(&self.rep, x);
        let r = net.max_flow();
        self.remember(x, r);
        let reach = net.reaches_target();
        let mut closed = x;
        for f in x.complement() {
            if !reach[2 * f.index()] {
                closed.insert(f);
            }
        }
        (r, closed)
    }

    /// `x ∈ X` is a coloop of the restriction exactly when every maximum
    /// linking of `X` uses it: it carries flow and no residual path from the
    /// source can take over its unit.
    fn coloops_of_restriction(&self, x: ElementSet) -> ElementSet {
        let mut net = LinkingNetwork::build(&self.rep, x);
        let r = net.max_flow();
        self.remember(x, r);
        let reach = net.reached_from_source();
        let s = net.source();
        let mut coloops = ElementSet::empty(self.rep.ground_size());
        for &id in &net.adj[s] {
            let v = net.head[id];
            if net.carries_flow(id) && !reach[v] {
                coloops.insert(Element::new(v / 2));
            }
        }
        coloops
    }
}

/// The gammoid `M(D, E, S)`: the strict gammoid restricted to `ground`, with
/// elements renumbered.
pub fn gammoid_matroid(d: &DigraphRep, ground: ElementSet) -> Minor<StrictGammoid> {
    Minor::restrict(d.matroid(), ground)
}

/// True when no arc can be added without changing the matroid and no sink
/// has out-arcs.
pub fn is_maximal(d: &DigraphRep) -> bool {
    let m = d.matroid();
    d.sinks_with_out_arcs().is_empty()
        && (0..d.ground_size()).map(Element::new).all(|v| {
            d.sinks().contains(v) || {
                let nb = d.closed_neighbourhood(v);
                m.closure(nb) == nb
            }
        })
}

/// The unique maximal representation of the same strict gammoid.
///
/// An arc `e -> f` can be added without changing the matroid iff
/// `f ∈ cl(N+[e])`. Since accepted arcs leave the matroid and therefore
/// every closure unchanged, one closure per non-sink vertex suffices.
pub fn maximalize(d: &DigraphRep) -> DigraphRep {
    let m = d.matroid();
    let n = d.ground_size();
    let out = (0..n)
        .map(Element::new)
        .map(|e| {
            if d.sinks().contains(e) {
                ElementSet::empty(n)
            } else {
                m.closure(d.closed_neighbourhood(e)).without(e)
            }
        })
        .collect();
    let result = DigraphRep {
        n,
        out,
        sinks: d.sinks(),
    };
    debug_assert!(is_maximal(&result), "maximalize reached a fixpoint");
    result
}

/// Groups the closed neighbourhoods of non-sink vertices. In a maximal
/// representation each distinct one is a cyclic flat whose γ is its
/// multiplicity, and these are all the cyclic flats with positive γ.
pub fn read_flats(d: &DigraphRep) -> CyclicFlatFamily {
    let m = d.matroid();
    let mut counts: BTreeMap<ElementSet, i64> = BTreeMap::new();
    for v in d.sinks().complement() {
        *counts.entry(d.closed_neighbourhood(v)).or_default() += 1;
    }
    let records = counts
        .into_iter()
        .map(|(set, g)| FlatRecord::with_gamma(set, m.rank(set), g))
        .collect();
    CyclicFlatFamily::new(d.ground_size(), records).expect("map keys are distinct")
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error("flat {set} has weight {gamma:?}; weights must be positive")]
    InvalidGamma { set: ElementSet, gamma: Option<i64> },
    #[error("weights sum to {sum}, more than the {limit} available elements")]
    BoundExceeded { sum: i64, limit: usize },
    #[error("the weighted flats have no transversal: sets {indices:?} cover only {union}", indices = .0.indices, union = .0.union)]
    NoTransversal(HallViolation),
}

/// The set system with `γ(Z)` copies of each flat, flats in canonical order
/// and copies adjacent.
pub fn weighted_copies(family: &CyclicFlatFamily) -> Result<SetSystem, ConstructError> {
    let mut sets = Vec::new();
    for r in family {
        match r.gamma {
            Some(g) if g >= 1 => sets.extend(std::iter::repeat_n(r.set, g as usize)),
            gamma => return Err(ConstructError::InvalidGamma { set: r.set, gamma }),
        }
    }
    Ok(SetSystem::new(family.ground_size(), sets).expect("family sets share the ground"))
}

/// Builds the maximal representation whose closed neighbourhoods are the
/// given flats with the given multiplicities: each element matched to a
/// copy points at the rest of that copy, and unmatched elements are sinks.
pub fn construct_from_flats(family: &CyclicFlatFamily) -> Result<DigraphRep, ConstructError> {
    let n = family.ground_size();
    let sum = family.gamma_sum();
    let system = weighted_copies(family)?;
    if sum > n as i64 {
        return Err(ConstructError::BoundExceeded { sum, limit: n });
    }
    let phi = transversal_of(&system).map_err(ConstructError::NoTransversal)?;
    Ok(from_matched_copies(&system, phi.pairs()))
}

fn from_matched_copies(
    system: &SetSystem,
    pairs: impl Iterator<Item = (Element, usize)>,
) -> DigraphRep {
    let n = system.ground_size();
    let mut out = vec![ElementSet::empty(n); n];
    let mut sinks = ElementSet::full(n);
    for (e, j) in pairs {
        out[e.index()] = system.sets()[j].without(e);
        sinks.remove(e);
    }
    DigraphRep { n, out, sinks }
}

/// `(N+[e] : e ∉ S)` in ascending `e`. It presents the dual matroid as a
/// transversal matroid.
pub fn neighbourhood_multiset(d: &DigraphRep) -> SetSystem {
    let sets = d
        .sinks()
        .complement()
        .iter()
        .map(|e| d.closed_neighbourhood(e))
        .collect();
    SetSystem::new(d.ground_size(), sets).expect("neighbourhoods share the ground")
}
