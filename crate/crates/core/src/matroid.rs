//! The rank-oracle abstraction and the matroids built directly on it.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::ground::{matching_size, SetSystem};
use crate::lattice::{validate_axioms, AxiomViolation, CyclicFlatFamily};
use crate::set::{Element, ElementSet};
use crate::{Error, OracleLimit};

/// A matroid given by its rank function on subsets of `[0, ground_size)`.
///
/// Only [`Matroid::rank`] is required. Implementations with a cheaper
/// closure (gammoids, for instance) override [`Matroid::closure`].
pub trait Matroid {
    fn ground_size(&self) -> usize;

    fn rank(&self, x: ElementSet) -> usize;

    fn ground(&self) -> ElementSet {
        ElementSet::full(self.ground_size())
    }

    fn full_rank(&self) -> usize {
        self.rank(self.ground())
    }

    fn nullity(&self, x: ElementSet) -> usize {
        x.len() - self.rank(x)
    }

    fn is_independent(&self, x: ElementSet) -> bool {
        self.rank(x) == x.len()
    }

    fn closure(&self, x: ElementSet) -> ElementSet {
        let r = self.rank(x);
        let mut closed = x;
        for f in x.complement() {
            if self.rank(x.with(f)) == r {
                closed.insert(f);
            }
        }
        closed
    }

    /// Rank and closure together; overridden where one computation yields
    /// both.
    fn rank_and_closure(&self, x: ElementSet) -> (usize, ElementSet) {
        (self.rank(x), self.closure(x))
    }

    fn is_flat(&self, x: ElementSet) -> bool {
        self.closure(x) == x
    }

    /// `{x ∈ X : r(X - x) < r(X)}`, the coloops of the restriction to `X`.
    fn coloops_of_restriction(&self, x: ElementSet) -> ElementSet {
        let r = self.rank(x);
        let mut coloops = ElementSet::empty(self.ground_size());
        for f in x {
            if self.rank(x.without(f)) < r {
                coloops.insert(f);
            }
        }
        coloops
    }

    fn is_cyclic(&self, x: ElementSet) -> bool {
        self.coloops_of_restriction(x).is_empty()
    }
}

impl<M: Matroid + ?Sized> Matroid for &M {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn rank(&self, x: ElementSet) -> usize {
        (**self).rank(x)
    }
    fn closure(&self, x: ElementSet) -> ElementSet {
        (**self).closure(x)
    }
    fn rank_and_closure(&self, x: ElementSet) -> (usize, ElementSet) {
        (**self).rank_and_closure(x)
    }
    fn coloops_of_restriction(&self, x: ElementSet) -> ElementSet {
        (**self).coloops_of_restriction(x)
    }
}

/// The dual matroid, `r*(X) = r(E - X) + |X| - r(E)`.
#[derive(Debug, Clone)]
pub struct Dual<M> {
    inner: M,
    inner_full_rank: usize,
}

impl<M: Matroid> Dual<M> {
    pub fn new(inner: M) -> Self {
        let inner_full_rank = inner.full_rank();
        Dual {
            inner,
            inner_full_rank,
        }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    pub fn into_inner(self) -> M {
        self.inner
    }
}

impl<M: Matroid> Matroid for Dual<M> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn rank(&self, x: ElementSet) -> usize {
        self.inner.rank(x.complement()) + x.len() - self.inner_full_rank
    }
}

/// The minor `M / C \ D` on the elements outside `C ∪ D`, renumbered in
/// ascending order.
#[derive(Debug, Clone)]
pub struct Minor<M> {
    inner: M,
    contracted: ElementSet,
    contracted_rank: usize,
    /// `kept[i]` is the inner element behind minor element `i`.
    kept: Vec<Element>,
    position: Vec<Option<usize>>,
}

impl<M: Matroid> Minor<M> {
    /// `M / contract \ delete`. The two sets must be disjoint.
    pub fn new(inner: M, contract: ElementSet, delete: ElementSet) -> Self {
        assert!(
            contract.is_disjoint(delete),
            "contracted and deleted sets overlap"
        );
        let n = inner.ground_size();
        let kept: Vec<Element> = (contract | delete).complement().iter().collect();
        let mut position = vec![None; n];
        for (i, e) in kept.iter().enumerate() {
            position[e.index()] = Some(i);
        }
        let contracted_rank = inner.rank(contract);
        Minor {
            inner,
            contracted: contract,
            contracted_rank,
            kept,
            position,
        }
    }

    pub fn delete(inner: M, x: ElementSet) -> Self {
        let n = inner.ground_size();
        Minor::new(inner, ElementSet::empty(n), x)
    }

    pub fn contract(inner: M, x: ElementSet) -> Self {
        let n = inner.ground_size();
        Minor::new(inner, x, ElementSet::empty(n))
    }

    pub fn restrict(inner: M, x: ElementSet) -> Self {
        let n = inner.ground_size();
        Minor::new(inner, ElementSet::empty(n), x.complement())
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    /// New index to inner element.
    pub fn element_map(&self) -> &[Element] {
        &self.kept
    }

    pub fn to_inner(&self, e: Element) -> Element {
        self.kept[e.index()]
    }

    pub fn from_inner(&self, e: Element) -> Option<Element> {
        self.position[e.index()].map(Element::new)
    }

    pub fn lift(&self, x: ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.inner.ground_size(),
            x.iter().map(|e| self.kept[e.index()].index()),
        )
    }

    /// Inner set to minor set, dropping elements that were removed.
    pub fn compress(&self, x: ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.kept.len(),
            x.iter().filter_map(|e| self.position[e.index()]),
        )
    }
}

impl<M: Matroid> Matroid for Minor<M> {
    fn ground_size(&self) -> usize {
        self.kept.len()
    }

    fn rank(&self, x: ElementSet) -> usize {
        self.inner.rank(self.lift(x) | self.contracted) - self.contracted_rank
    }

    fn closure(&self, x: ElementSet) -> ElementSet {
        self.compress(self.inner.closure(self.lift(x) | self.contracted))
    }

    fn rank_and_closure(&self, x: ElementSet) -> (usize, ElementSet) {
        let (r, cl) = self.inner.rank_and_closure(self.lift(x) | self.contracted);
        (r - self.contracted_rank, self.compress(cl))
    }
}

/// Caches rank queries by bit pattern.
#[derive(Debug)]
pub struct Memoized<M> {
    inner: M,
    cache: Mutex<HashMap<u64, usize>>,
}

impl<M: Matroid> Memoized<M> {
    pub fn new(inner: M) -> Self {
        Memoized {
            inner,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }
}

impl<M: Matroid> Matroid for Memoized<M> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
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
        let r = self.inner.rank(x);
        self.cache
            .lock()
            .expect("rank cache poisoned")
            .insert(x.bits(), r);
        r
    }

    fn closure(&self, x: ElementSet) -> ElementSet {
        self.inner.closure(x)
    }
}

/// The rank of every subset, stored densely. Only for small ground sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    ground_size: usize,
    ranks: Vec<u8>,
}

impl RankTable {
    pub fn new<M: Matroid>(m: &M, limit: OracleLimit) -> Result<Self, Error> {
        let n = m.ground_size();
        limit.check(n)?;
        let ranks = (0..1u64 << n)
            .map(|bits| m.rank(ElementSet::from_bits(n, bits)) as u8)
            .collect();
        Ok(RankTable {
            ground_size: n,
            ranks,
        })
    }
}

impl Matroid for RankTable {
    fn ground_size(&self) -> usize {
        self.ground_size
    }

    fn rank(&self, x: ElementSet) -> usize {
        self.ranks[x.bits() as usize] as usize
    }
}

/// The transversal matroid of a set system: independent sets are the
/// partial transversals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalMatroid {
    presentation: SetSystem,
}

impl TransversalMatroid {
    pub fn new(presentation: SetSystem) -> Self {
        TransversalMatroid { presentation }
    }

    pub fn presentation(&self) -> &SetSystem {
        &self.presentation
    }
}

impl Matroid for TransversalMatroid {
    fn ground_size(&self) -> usize {
        self.presentation.ground_size()
    }

    fn rank(&self, x: ElementSet) -> usize {
        matching_size(&self.presentation, x)
    }
}

/// A matroid defined by its lattice of cyclic flats and their ranks, via
/// `r(X) = min(|X|, min_Z r(Z) + |X - Z|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicFlatDefinedMatroid {
    flats: CyclicFlatFamily,
}

impl CyclicFlatDefinedMatroid {
    pub fn flats(&self) -> &CyclicFlatFamily {
        &self.flats
    }
}

impl Matroid for CyclicFlatDefinedMatroid {
    fn ground_size(&self) -> usize {
        self.flats.ground_size()
    }

    fn rank(&self, x: ElementSet) -> usize {
        self.flats
            .iter()
            .map(|z| z.rank + x.difference(z.set).len())
            .fold(x.len(), usize::min)
    }
}

pub fn matroid_from_cyclic_flats(
    family: &CyclicFlatFamily,
) -> Result<CyclicFlatDefinedMatroid, AxiomViolation> {
    validate_axioms(family)?;
    Ok(CyclicFlatDefinedMatroid {
        flats: family.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_cyclic_flats, FlatRecord};

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs.iter().copied())
    }

    fn transversal(n: usize, sets: &[&[usize]]) -> TransversalMatroid {
        TransversalMatroid::new(
            SetSystem::new(n, sets.iter().map(|s| set(n, s)).collect()).unwrap(),
        )
    }

    fn u24() -> TransversalMatroid {
        transversal(4, &[&[0, 1, 2, 3], &[0, 1, 2, 3]])
    }

    #[test]
    fn u24_basics() {
        let m = u24();
        assert_eq!(m.rank(set(4, &[0])), 1);
        assert_eq!(m.rank(ElementSet::empty(4)), 0);
        assert_eq!(m.nullity(m.ground()), 2);
        assert_eq!(m.nullity(ElementSet::empty(4)), 0);
        assert_eq!(m.closure(set(4, &[0])), set(4, &[0]));
        assert_eq!(m.closure(set(4, &[0, 1])), m.ground());
        assert!(m.is_cyclic(m.ground()));
        assert!(m.is_flat(m.ground()));
        assert_eq!(m.coloops_of_restriction(set(4, &[0])), set(4, &[0]));
    }

    #[test]
    fn path_presentation() {
        let m = transversal(3, &[&[0, 1], &[1, 2]]);
        assert_eq!(m.rank(set(3, &[0, 2])), 2);
        assert_eq!(m.rank(m.ground()), 2);
        assert_eq!(m.nullity(m.ground()), 1);
        assert_eq!(m.closure(set(3, &[1])), set(3, &[1]));
        let r = Minor::restrict(&m, set(3, &[0, 1]));
        assert_eq!(r.ground_size(), 2);
        assert_eq!(r.rank(r.ground()), 2);
    }

    #[test]
    fn coloop_in_direct_sum() {
        // U_{1,2} on {0,1} plus a coloop 2.
        let m = transversal(3, &[&[0, 1], &[2]]);
        assert_eq!(m.coloops_of_restriction(m.ground()), set(3, &[2]));
    }

    #[test]
    fn dual_ranks() {
        let m = u24();
        let d = Dual::new(&m);
        assert_eq!(d.rank(set(4, &[0, 1])), 2);
        assert_eq!(d.rank(ElementSet::empty(4)), 0);
        let free = transversal(3, &[&[0], &[1], &[2]]);
        let fd = Dual::new(&free);
        assert!(ElementSet::all_subsets(3).all(|x| fd.rank(x) == 0));
        let dd = Dual::new(Dual::new(&m));
        assert!(ElementSet::all_subsets(4).all(|x| dd.rank(x) == m.rank(x)));
    }

    #[test]
    fn minors_of_u24() {
        let m = u24();
        let del = Minor::delete(&m, set(4, &[3]));
        assert_eq!(del.ground_size(), 3);
        assert!(ElementSet::all_subsets(3).all(|x| del.rank(x) == x.len().min(2)));
        let con = Minor::contract(&m, set(4, &[3]));
        assert!(ElementSet::all_subsets(3).all(|x| con.rank(x) == x.len().min(1)));
        assert_eq!(con.closure(ElementSet::empty(3)), ElementSet::empty(3));
        assert_eq!(con.closure(set(3, &[0])), con.ground());
        assert_eq!(con.to_inner(Element::new(2)), Element::new(2));
        assert_eq!(con.from_inner(Element::new(3)), None);
    }

    #[test]
    fn minor_reindexes() {
        let m = u24();
        let del = Minor::delete(&m, set(4, &[1]));
        assert_eq!(
            del.element_map(),
            &[Element::new(0), Element::new(2), Element::new(3)]
        );
        assert_eq!(del.lift(set(3, &[1])), set(4, &[2]));
        assert_eq!(del.compress(set(4, &[1, 3])), set(3, &[2]));
    }

    #[test]
    fn memoized_and_table_agree() {
        let m = transversal(5, &[&[0, 1], &[1, 2, 3], &[3, 4]]);
        let memo = Memoized::new(&m);
        let table = RankTable::new(&m, OracleLimit::default()).unwrap();
        for x in ElementSet::all_subsets(5) {
            assert_eq!(memo.rank(x), m.rank(x));
            assert_eq!(memo.rank(x), table.rank(x));
        }
        assert!(RankTable::new(&m, OracleLimit(4)).is_err());
    }

    fn family(n: usize, flats: &[(&[usize], usize)]) -> CyclicFlatFamily {
        CyclicFlatFamily::new(
            n,
            flats
                .iter()
                .map(|(s, r)| FlatRecord::new(set(n, s), *r))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn free_and_uniform_from_flats() {
        let free = matroid_from_cyclic_flats(&family(3, &[(&[], 0)])).unwrap();
        assert!(ElementSet::all_subsets(3).all(|x| free.rank(x) == x.len()));
        let u = matroid_from_cyclic_flats(&family(4, &[(&[], 0), (&[0, 1, 2, 3], 2)])).unwrap();
        let reference = u24();
        assert!(ElementSet::all_subsets(4).all(|x| u.rank(x) == reference.rank(x)));
    }

    /// Edges of K4 labelled 0..6; vertex pairs listed so cycles can be
    /// checked directly.
    const K4_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

    fn graphic_rank(edges: ElementSet) -> usize {
        // Union-find over the four vertices.
        let mut parent = [0usize, 1, 2, 3];
        fn find(p: &mut [usize; 4], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut rank = 0;
        for e in edges {
            let (a, b) = K4_EDGES[e.index()];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn k4_from_flats_is_graphic() {
        let k4 = family(
            6,
            &[
                (&[], 0),
                (&[0, 1, 3], 2),
                (&[0, 2, 4], 2),
                (&[1, 2, 5], 2),
                (&[3, 4, 5], 2),
                (&[0, 1, 2, 3, 4, 5], 3),
            ],
        );
        let m = matroid_from_cyclic_flats(&k4).unwrap();
        for x in ElementSet::all_subsets(6) {
            assert_eq!(m.rank(x), graphic_rank(x), "rank of {x}");
        }
        let again = enumerate_cyclic_flats(&m, OracleLimit::default()).unwrap();
        assert_eq!(again, k4);
    }
}
