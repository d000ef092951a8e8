#![allow(dead_code)]

use proptest::prelude::*;
use strict_gammoid::matroid::Matroid;
use strict_gammoid::{DigraphRep, Element, ElementSet, SetSystem};

/// Random digraph on `min..=max` vertices; arcs and sinks drawn per pair.
pub fn digraph(min: usize, max: usize) -> impl Strategy<Value = DigraphRep> {
    (min..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::bool::weighted(0.3), n * n),
            prop::collection::vec(prop::bool::weighted(0.45), n),
        )
            .prop_map(move |(arcs, sinks)| {
                let arcs = (0..n * n)
                    .filter(|&k| arcs[k] && k / n != k % n)
                    .map(|k| (k / n, k % n));
                let sinks = ElementSet::from_indices(n, (0..n).filter(|&v| sinks[v]));
                DigraphRep::from_arcs(n, arcs, sinks).unwrap()
            })
    })
}

pub fn set_system(max_n: usize, max_sets: usize) -> impl Strategy<Value = SetSystem> {
    (1..=max_n, 0..=max_sets).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.4), n), m).prop_map(
            move |rows| {
                let sets = rows
                    .iter()
                    .map(|row| ElementSet::from_indices(n, (0..n).filter(|&i| row[i])))
                    .collect();
                SetSystem::new(n, sets).unwrap()
            },
        )
    })
}

pub fn rank_table(m: &impl Matroid) -> Vec<usize> {
    ElementSet::all_subsets(m.ground_size())
        .map(|x| m.rank(x))
        .collect()
}

/// Largest partial transversal inside `x`, by trying every injection.
pub fn brute_matching_size(system: &SetSystem, x: ElementSet) -> usize {
    fn go(elements: &[Element], system: &SetSystem, used: &mut [bool]) -> usize {
        let Some((&e, rest)) = elements.split_first() else {
            return 0;
        };
        let mut best = go(rest, system, used);
        for j in 0..system.len() {
            if !used[j] && system.sets()[j].contains(e) {
                used[j] = true;
                best = best.max(1 + go(rest, system, used));
                used[j] = false;
            }
        }
        best
    }
    let elements: Vec<Element> = x.iter().collect();
    go(&elements, system, &mut vec![false; system.len()])
}

/// Whether some `K` violates Hall, by enumerating every subfamily.
pub fn brute_hall_holds(system: &SetSystem) -> bool {
    let m = system.len();
    (0u64..1 << m).all(|mask| {
        let k: Vec<usize> = (0..m).filter(|&j| mask >> j & 1 == 1).collect();
        system.union_of(k.iter().copied()).len() >= k.len()
    })
}

/// Whether `x` can be linked into the sinks by vertex-disjoint paths,
/// searching over simple paths directly.
pub fn brute_linkable(d: &DigraphRep, x: ElementSet) -> bool {
    fn extend(d: &DigraphRep, rest: &[Element], used: ElementSet) -> bool {
        let Some((&start, others)) = rest.split_first() else {
            return true;
        };
        paths_from(d, start, used.with(start), others)
    }
    fn paths_from(d: &DigraphRep, at: Element, used: ElementSet, others: &[Element]) -> bool {
        if d.sinks().contains(at) && extend(d, others, used) {
            return true;
        }
        d.out_neighbours(at)
            .iter()
            .filter(|v| !used.contains(*v) && !others.contains(v))
            .any(|v| paths_from(d, v, used.with(v), others))
    }
    let elements: Vec<Element> = x.iter().collect();
    extend(d, &elements, ElementSet::empty(d.ground_size()))
}

pub fn brute_linking_rank(d: &DigraphRep, x: ElementSet) -> usize {
    x.subsets()
        .filter(|&y| brute_linkable(d, y))
        .map(|y| y.len())
        .max()
        .unwrap_or(0)
}

/// Bases of `m`, by filtering all subsets.
pub fn bases(m: &impl Matroid) -> Vec<ElementSet> {
    let r = m.full_rank();
    ElementSet::all_subsets(m.ground_size())
        .filter(|&b| b.len() == r && m.is_independent(b))
        .collect()
}

/// Dual rank from complements of bases: `max |X ∩ (E - B)|`.
pub fn brute_dual_rank(bases: &[ElementSet], x: ElementSet) -> usize {
    bases.iter().map(|b| (x - *b).len()).max().unwrap_or(0)
}
