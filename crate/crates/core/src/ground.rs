//! Set systems, bipartite matchings and Hall's condition.
//!
//! A [`SetSystem`] is an ordered multiset `(A_0, ..., A_{m-1})` of subsets of
//! the ground set; it is the bipartite presentation of a transversal matroid.
//! Every search here scans elements and set indices in ascending order, so the
//! matchings returned are reproducible.

use crate::set::{Element, ElementSet, MAX_GROUND};
use crate::Error;

/// An ordered multiset of subsets of a common ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetSystem {
    ground_size: usize,
    sets: Vec<ElementSet>,
}

impl SetSystem {
    pub fn new(ground_size: usize, sets: Vec<ElementSet>) -> Result<Self, Error> {
        if ground_size > MAX_GROUND {
            return Err(Error::GroundTooLarge {
                size: ground_size,
                limit: MAX_GROUND,
            });
        }
        if let Some(bad) = sets.iter().find(|s| s.ground_size() != ground_size) {
            return Err(Error::GroundMismatch {
                expected: ground_size,
                found: bad.ground_size(),
            });
        }
        Ok(SetSystem { ground_size, sets })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn union_of<I: IntoIterator<Item = usize>>(&self, indices: I) -> ElementSet {
        indices
            .into_iter()
            .fold(ElementSet::empty(self.ground_size), |acc, j| {
                acc | self.sets[j]
            })
    }

    /// Union of every set in the system.
    pub fn support(&self) -> ElementSet {
        self.union_of(0..self.sets.len())
    }

    /// The system with a subset of its sets, in the given order.
    pub fn subsystem(&self, indices: &[usize]) -> SetSystem {
        SetSystem {
            ground_size: self.ground_size,
            sets: indices.iter().map(|&j| self.sets[j]).collect(),
        }
    }

    /// Set indices containing `e`, ascending.
    fn sets_containing(&self, e: Element) -> Vec<usize> {
        (0..self.sets.len())
            .filter(|&j| self.sets[j].contains(e))
            .collect()
    }
}

/// A partial injection from elements to set indices with `e ∈ A_φ(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    of_element: Vec<Option<usize>>,
    set_count: usize,
}

impl Matching {
    fn from_owners(ground_size: usize, owner_of_set: &[Option<usize>]) -> Self {
        let mut of_element = vec![None; ground_size];
        for (j, owner) in owner_of_set.iter().enumerate() {
            if let Some(e) = owner {
                of_element[*e] = Some(j);
            }
        }
        Matching {
            of_element,
            set_count: owner_of_set.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.of_element.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn set_of(&self, e: Element) -> Option<usize> {
        self.of_element.get(e.index()).copied().flatten()
    }

    pub fn element_of(&self, set_index: usize) -> Option<Element> {
        self.of_element
            .iter()
            .position(|m| *m == Some(set_index))
            .map(Element::new)
    }

    /// Matched pairs in ascending element order.
    pub fn pairs(&self) -> impl Iterator<Item = (Element, usize)> + '_ {
        self.of_element
            .iter()
            .enumerate()
            .filter_map(|(e, m)| m.map(|j| (Element::new(e), j)))
    }

    pub fn matched_elements(&self) -> ElementSet {
        ElementSet::from_indices(self.of_element.len(), self.pairs().map(|(e, _)| e.index()))
    }

    /// True when every set of the system is matched.
    pub fn saturates_sets(&self) -> bool {
        self.len() == self.set_count
    }

    /// Each matched element lies in its set and set indices are distinct.
    pub fn is_valid_for(&self, system: &SetSystem) -> bool {
        let mut used = vec![false; system.len()];
        for (e, j) in self.pairs() {
            if j >= system.len() || used[j] || !system.sets[j].contains(e) {
                return false;
            }
            used[j] = true;
        }
        true
    }
}

/// Augmenting-path search from element `e`; `owner[j]` is the element
/// currently matched to set `j`.
fn augment(
    e: usize,
    adjacency: &[Vec<usize>],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &j in &adjacency[e] {
        if visited[j] {
            continue;
        }
        visited[j] = true;
        let free = match owner[j] {
            None => true,
            Some(other) => augment(other, adjacency, owner, visited),
        };
        if free {
            owner[j] = Some(e);
            return true;
        }
    }
    false
}

/// Maximum matching of `elements` into the allowed sets, starting from the
/// partial assignment in `owner`. Returns the number of augmentations.
fn extend_matching(
    elements: &[usize],
    adjacency: &[Vec<usize>],
    owner: &mut [Option<usize>],
) -> usize {
    let mut visited = vec![false; owner.len()];
    let mut gained = 0;
    for &e in elements {
        visited.iter_mut().for_each(|v| *v = false);
        if augment(e, adjacency, owner, &mut visited) {
            gained += 1;
        }
    }
    gained
}

/// Size of a maximum matching between `restrict_to` and the sets.
///
/// This is the transversal rank of `restrict_to`; it skips the canonical
/// tie-breaking work done by [`max_matching`].
pub fn matching_size(system: &SetSystem, restrict_to: ElementSet) -> usize {
    let adjacency: Vec<Vec<usize>> = (0..system.ground_size)
        .map(|e| system.sets_containing(Element::new(e)))
        .collect();
    let mut owner = vec![None; system.len()];
    extend_matching(&restrict_to.indices(), &adjacency, &mut owner)
}

/// The canonical maximum matching between `restrict_to` and the sets.
///
/// Among all maximum-cardinality matchings this returns the one whose
/// assignment vector `(φ(e_0), φ(e_1), ...)`, taken over `restrict_to` in
/// ascending order with "unmatched" ranked after every set index, is
/// lexicographically least.
pub fn max_matching(system: &SetSystem, restrict_to: ElementSet) -> Matching {
    let m = system.len();
    let elements = restrict_to.indices();
    let full_adjacency: Vec<Vec<usize>> = (0..system.ground_size)
        .map(|e| system.sets_containing(Element::new(e)))
        .collect();

    let mut current = vec![None; m];
    let target = extend_matching(&elements, &full_adjacency, &mut current);

    // `fixed` holds decided pairs; `current` is always a maximum matching
    // consistent with them.
    let mut fixed: Vec<Option<usize>> = vec![None; m];
    let mut fixed_count = 0;
    for (pos, &e) in elements.iter().enumerate() {
        let current_set = current.iter().position(|o| *o == Some(e));
        let rest = &elements[pos + 1..];
        let mut chosen = None;
        for &j in &full_adjacency[e] {
            if fixed[j].is_some() {
                continue;
            }
            if Some(j) == current_set {
                chosen = Some(j);
                break;
            }
            // Try fixing e -> j and re-matching the undecided elements.
            let mut trial = fixed.clone();
            trial[j] = Some(e);
            let adjacency: Vec<Vec<usize>> = full_adjacency
                .iter()
                .map(|sets| {
                    sets.iter()
                        .copied()
                        .filter(|&k| trial[k].is_none())
                        .collect()
                })
                .collect();
            let mut owner = trial.clone();
            let gained = extend_matching(rest, &adjacency, &mut owner);
            if fixed_count + 1 + gained == target {
                current = owner;
                chosen = Some(j);
                break;
            }
        }
        if let Some(j) = chosen {
            fixed[j] = Some(e);
            fixed_count += 1;
        }
        // Otherwise no maximum matching consistent with `fixed` uses e, and
        // `current` already leaves it unmatched.
    }
    debug_assert_eq!(fixed_count, target);
    Matching::from_owners(system.ground_size, &fixed)
}

/// A set of indices `K` with `|∪_{j∈K} A_j| < |K|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolation {
    /// Ascending set indices.
    pub indices: Vec<usize>,
    pub union: ElementSet,
}

impl HallViolation {
    /// Re-checks the violation against `system`.
    pub fn holds_for(&self, system: &SetSystem) -> bool {
        let union = system.union_of(self.indices.iter().copied());
        union == self.union && union.len() < self.indices.len()
    }
}

/// Matches the sets listed in `indices` into elements. Returns the set of
/// indices reachable by alternating paths from the first unmatched set, or
/// `None` when every listed set is matched.
fn deficient_component(system: &SetSystem, indices: &[usize]) -> Option<Vec<usize>> {
    let n = system.ground_size;
    // Sets play the role of the left side here.
    let adjacency: Vec<Vec<usize>> = indices.iter().map(|&j| system.sets[j].indices()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut unmatched = None;
    for local in 0..indices.len() {
        visited.iter_mut().for_each(|v| *v = false);
        if !augment(local, &adjacency, &mut owner, &mut visited) && unmatched.is_none() {
            unmatched = Some(local);
        }
    }
    let start = unmatched?;
    let mut seen_sets = vec![false; indices.len()];
    let mut seen_elements = vec![false; n];
    let mut stack = vec![start];
    seen_sets[start] = true;
    while let Some(local) = stack.pop() {
        for &x in &adjacency[local] {
            if seen_elements[x] {
                continue;
            }
            seen_elements[x] = true;
            // x must be matched, otherwise an augmenting path would exist.
            if let Some(other) = owner[x] {
                if !seen_sets[other] {
                    seen_sets[other] = true;
                    stack.push(other);
                }
            }
        }
    }
    let mut component: Vec<usize> = (0..indices.len())
        .filter(|&l| seen_sets[l])
        .map(|l| indices[l])
        .collect();
    component.sort_unstable();
    Some(component)
}

/// Checks Hall's condition. On failure returns an inclusion-minimal
/// violating set of indices.
pub fn hall_check(system: &SetSystem) -> Result<(), HallViolation> {
    let all: Vec<usize> = (0..system.len()).collect();
    let Some(mut k) = deficient_component(system, &all) else {
        return Ok(());
    };
    // Shrink until every K - j satisfies Hall; then no proper subset of K
    // violates it, since Hall's condition is inherited by subfamilies.
    'shrink: loop {
        for pos in 0..k.len() {
            let mut rest = k.clone();
            rest.remove(pos);
            if let Some(smaller) = deficient_component(system, &rest) {
                k = smaller;
                continue 'shrink;
            }
        }
        break;
    }
    let union = system.union_of(k.iter().copied());
    Err(HallViolation { indices: k, union })
}

/// A matching saturating every set of the system, or the Hall witness.
pub fn transversal_of(system: &SetSystem) -> Result<Matching, HallViolation> {
    hall_check(system)?;
    let matching = max_matching(system, ElementSet::full(system.ground_size));
    debug_assert!(matching.saturates_sets());
    Ok(matching)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(n: usize, sets: &[&[usize]]) -> SetSystem {
        SetSystem::new(
            n,
            sets.iter()
                .map(|s| ElementSet::from_indices(n, s.iter().copied()))
                .collect(),
        )
        .unwrap()
    }

    /// Maximum matching size by trying every injection.
    fn brute_force_size(system: &SetSystem, restrict: ElementSet) -> usize {
        fn go(elements: &[usize], system: &SetSystem, used: &mut Vec<bool>) -> usize {
            let Some((&e, rest)) = elements.split_first() else {
                return 0;
            };
            let mut best = go(rest, system, used);
            for j in 0..system.len() {
                if !used[j] && system.sets()[j].contains(Element::new(e)) {
                    used[j] = true;
                    best = best.max(1 + go(rest, system, used));
                    used[j] = false;
                }
            }
            best
        }
        go(&restrict.indices(), system, &mut vec![false; system.len()])
    }

    #[test]
    fn single_set_matches_one_element() {
        let s = system(2, &[&[0, 1]]);
        assert_eq!(max_matching(&s, ElementSet::full(2)).len(), 1);
    }

    #[test]
    fn shared_singleton_matches_once() {
        let s = system(1, &[&[0], &[0]]);
        assert_eq!(max_matching(&s, ElementSet::full(1)).len(), 1);
    }

    #[test]
    fn tie_break_is_lowest_index() {
        let s = system(4, &[&[0, 1, 2, 3], &[0, 1, 2, 3]]);
        let m = max_matching(&s, ElementSet::from_indices(4, [0, 1]));
        assert_eq!(
            m.len(),
            brute_force_size(&s, ElementSet::from_indices(4, [0, 1]))
        );
        let pairs: Vec<_> = m.pairs().map(|(e, j)| (e.index(), j)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn lexicographic_least_beats_greedy_reassignment() {
        // Plain Kuhn would move 0 to A1 when matching 1.
        let s = system(2, &[&[0, 1], &[0]]);
        let m = max_matching(&s, ElementSet::full(2));
        let pairs: Vec<_> = m.pairs().map(|(e, j)| (e.index(), j)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn hall_examples() {
        assert_eq!(hall_check(&system(3, &[&[0, 1], &[2]])), Ok(()));
        let v = hall_check(&system(2, &[&[0, 1], &[0, 1], &[0, 1]])).unwrap_err();
        assert_eq!(v.indices, vec![0, 1, 2]);
        let v = hall_check(&system(2, &[&[0], &[0, 1], &[1]])).unwrap_err();
        assert_eq!(v.indices, vec![0, 1, 2]);
    }

    #[test]
    fn empty_set_violates_alone() {
        let v = hall_check(&system(3, &[&[0, 1], &[], &[2]])).unwrap_err();
        assert_eq!(v.indices, vec![1]);
        assert!(v.union.is_empty());
    }

    #[test]
    fn transversal_examples() {
        let t = transversal_of(&system(2, &[&[0, 1]])).unwrap();
        assert_eq!(t.set_of(Element::new(0)), Some(0));
        assert_eq!(t.set_of(Element::new(1)), None);

        let t = transversal_of(&system(4, &[&[0, 1, 2, 3], &[0, 1, 2, 3]])).unwrap();
        let pairs: Vec<_> = t.pairs().map(|(e, j)| (e.index(), j)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);

        let err = transversal_of(&system(1, &[&[0], &[0]])).unwrap_err();
        assert_eq!(err.indices, vec![0, 1]);
    }

    #[test]
    fn minimal_witness_ignores_unrelated_surplus() {
        // {A1, A2} is the minimal violator; A0 and A3 are fine.
        let s = system(4, &[&[0, 1, 2, 3], &[2], &[2], &[1, 3]]);
        let v = hall_check(&s).unwrap_err();
        assert_eq!(v.indices, vec![1, 2]);
        assert!(v.holds_for(&s));
    }
}
