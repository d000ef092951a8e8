//! Cyclic flats, their lattice, and the β and γ recursions over it.
//!
//! For a matroid `M` with cyclic flats `𝓩`:
//!
//! * `γ(X) = n(X) - Σ_{Z ∈ 𝓩, Z ⊊ X} γ(Z)`; `M` is a strict gammoid iff
//!   `γ ≥ 0` on every subset.
//! * `β(X) = r(M) - r(X) - Σ_{Z ∈ 𝓩, X ⊊ Z} β(Z)`; `M` is transversal iff
//!   `β ≥ 0` on every subset.

use std::collections::HashMap;
use std::fmt;

use crate::matroid::{Matroid, Minor, RankTable};
use crate::set::{Element, ElementSet};
use crate::{Error, OracleLimit};

/// A set with its rank and, when relevant, an attached γ-like weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlatRecord {
    pub set: ElementSet,
    pub rank: usize,
    pub gamma: Option<i64>,
}

impl FlatRecord {
    pub fn new(set: ElementSet, rank: usize) -> Self {
        FlatRecord {
            set,
            rank,
            gamma: None,
        }
    }

    pub fn with_gamma(set: ElementSet, rank: usize, gamma: i64) -> Self {
        FlatRecord {
            set,
            rank,
            gamma: Some(gamma),
        }
    }

    pub fn nullity(&self) -> i64 {
        self.set.len() as i64 - self.rank as i64
    }
}

/// Distinct sets with ranks, sorted by (size, bit pattern).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicFlatFamily {
    ground_size: usize,
    records: Vec<FlatRecord>,
}

impl CyclicFlatFamily {
    pub fn new(ground_size: usize, mut records: Vec<FlatRecord>) -> Result<Self, Error> {
        if let Some(bad) = records.iter().find(|r| r.set.ground_size() != ground_size) {
            return Err(Error::GroundMismatch {
                expected: ground_size,
                found: bad.set.ground_size(),
            });
        }
        records.sort_by_key(|r| r.set);
        if let Some(w) = records.windows(2).find(|w| w[0].set == w[1].set) {
            return Err(Error::DuplicateFlat(w[0].set));
        }
        Ok(CyclicFlatFamily {
            ground_size,
            records,
        })
    }

    pub fn empty(ground_size: usize) -> Self {
        CyclicFlatFamily {
            ground_size,
            records: Vec::new(),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn records(&self) -> &[FlatRecord] {
        &self.records
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FlatRecord> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn sets(&self) -> impl Iterator<Item = ElementSet> + '_ {
        self.records.iter().map(|r| r.set)
    }

    pub fn get(&self, set: ElementSet) -> Option<&FlatRecord> {
        self.records
            .binary_search_by(|r| r.set.cmp(&set))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn contains(&self, set: ElementSet) -> bool {
        self.get(set).is_some()
    }

    /// Sum of the attached weights; records without one count as zero.
    pub fn gamma_sum(&self) -> i64 {
        self.records.iter().filter_map(|r| r.gamma).sum()
    }

    /// The same family with every set mapped through `f`. The caller must
    /// keep the sets distinct.
    pub fn map_sets(
        &self,
        ground_size: usize,
        f: impl Fn(ElementSet) -> ElementSet,
    ) -> Result<Self, Error> {
        CyclicFlatFamily::new(
            ground_size,
            self.records
                .iter()
                .map(|r| FlatRecord {
                    set: f(r.set),
                    ..*r
                })
                .collect(),
        )
    }
}

impl<'a> IntoIterator for &'a CyclicFlatFamily {
    type Item = &'a FlatRecord;
    type IntoIter = std::slice::Iter<'a, FlatRecord>;
    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

/// All cyclic flats of `m`, including the loop set.
pub fn enumerate_cyclic_flats<M: Matroid>(
    m: &M,
    limit: OracleLimit,
) -> Result<CyclicFlatFamily, Error> {
    let table = RankTable::new(m, limit)?;
    Ok(cyclic_flats_of_table(&table))
}

fn cyclic_flats_of_table(table: &RankTable) -> CyclicFlatFamily {
    let n = table.ground_size();
    let records = ElementSet::all_subsets(n)
        .filter(|&x| table.is_cyclic(x) && table.is_flat(x))
        .map(|x| FlatRecord::new(x, table.rank(x)))
        .collect();
    CyclicFlatFamily {
        ground_size: n,
        records,
    }
}

/// `X` minus the coloops of `M|X`; the largest cyclic subset of `X`.
pub fn max_cyclic_subset<M: Matroid>(m: &M, x: ElementSet) -> ElementSet {
    x.difference(m.coloops_of_restriction(x))
}

pub fn join<M: Matroid>(m: &M, z0: ElementSet, z1: ElementSet) -> FlatRecord {
    let (rank, set) = m.rank_and_closure(z0 | z1);
    FlatRecord::new(set, rank)
}

pub fn meet<M: Matroid>(m: &M, z0: ElementSet, z1: ElementSet) -> FlatRecord {
    let set = max_cyclic_subset(m, z0 & z1);
    FlatRecord::new(set, m.rank(set))
}

/// Members of `family` contained in at least one of `targets`.
pub fn downset(family: &CyclicFlatFamily, targets: &[ElementSet]) -> CyclicFlatFamily {
    CyclicFlatFamily {
        ground_size: family.ground_size,
        records: family
            .records
            .iter()
            .filter(|r| targets.iter().any(|t| r.set.is_subset(*t)))
            .copied()
            .collect(),
    }
}

/// The first axiom a family of ranked sets fails.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AxiomViolation {
    #[error("the family is empty")]
    Empty,
    #[error("Z1: {x} and {y} have no least upper bound in the family")]
    NoJoin { x: ElementSet, y: ElementSet },
    #[error("Z1: {x} and {y} have no greatest lower bound in the family")]
    NoMeet { x: ElementSet, y: ElementSet },
    #[error("Z2: the least member {bottom} has rank {rank}")]
    BottomRank { bottom: ElementSet, rank: usize },
    #[error("Z3: {x} ⊊ {y} needs 0 < r(y) - r(x) < |y - x|")]
    Gap { x: ElementSet, y: ElementSet },
    #[error("Z4: {x} and {y} break r(x) + r(y) >= r(x∨y) + r(x∧y) + |(x∩y) - (x∧y)|")]
    Submodular { x: ElementSet, y: ElementSet },
}

/// Least member of `family` containing `x`, if unique.
fn least_above(family: &CyclicFlatFamily, x: ElementSet) -> Option<&FlatRecord> {
    let above: Vec<&FlatRecord> = family.iter().filter(|r| x.is_subset(r.set)).collect();
    above
        .iter()
        .find(|c| above.iter().all(|o| c.set.is_subset(o.set)))
        .copied()
}

fn greatest_below(family: &CyclicFlatFamily, x: ElementSet) -> Option<&FlatRecord> {
    let below: Vec<&FlatRecord> = family.iter().filter(|r| r.set.is_subset(x)).collect();
    below
        .iter()
        .find(|c| below.iter().all(|o| o.set.is_subset(c.set)))
        .copied()
}

/// Checks the cyclic-flat axioms in order Z1, Z2, Z3, Z4 and reports the
/// first failure with the pair that witnesses it.
pub fn validate_axioms(family: &CyclicFlatFamily) -> Result<(), AxiomViolation> {
    let records = family.records();
    if records.is_empty() {
        return Err(AxiomViolation::Empty);
    }
    let mut joins = HashMap::new();
    let mut meets = HashMap::new();
    for (i, a) in records.iter().enumerate() {
        for b in &records[i..] {
            let key = (a.set.bits(), b.set.bits());
            let j = least_above(family, a.set | b.set)
                .ok_or(AxiomViolation::NoJoin { x: a.set, y: b.set })?;
            let m = greatest_below(family, a.set & b.set)
                .ok_or(AxiomViolation::NoMeet { x: a.set, y: b.set })?;
            joins.insert(key, *j);
            meets.insert(key, *m);
        }
    }
    // A finite lattice has a least element; it is the first record.
    let bottom = records[0];
    if bottom.rank != 0 {
        return Err(AxiomViolation::BottomRank {
            bottom: bottom.set,
            rank: bottom.rank,
        });
    }
    for x in records {
        for y in records {
            if x.set.is_proper_subset(y.set) {
                let gap = y.rank as i64 - x.rank as i64;
                if gap <= 0 || gap >= y.set.difference(x.set).len() as i64 {
                    return Err(AxiomViolation::Gap { x: x.set, y: y.set });
                }
            }
        }
    }
    for (i, a) in records.iter().enumerate() {
        for b in &records[i..] {
            let key = (a.set.bits(), b.set.bits());
            let (j, m) = (joins[&key], meets[&key]);
            let extra = (a.set & b.set).difference(m.set).len();
            if a.rank + b.rank < j.rank + m.rank + extra {
                return Err(AxiomViolation::Submodular { x: a.set, y: b.set });
            }
        }
    }
    Ok(())
}

/// γ over the cyclic flats in canonical order; each entry only depends on
/// earlier ones.
fn gamma_over_flats(flats: &mut CyclicFlatFamily) {
    for i in 0..flats.records.len() {
        let x = flats.records[i];
        let below: i64 = flats.records[..i]
            .iter()
            .filter(|z| z.set.is_proper_subset(x.set))
            .map(|z| z.gamma.expect("earlier flats have γ"))
            .sum();
        flats.records[i].gamma = Some(x.nullity() - below);
    }
}

/// β over the cyclic flats, filled from the largest down.
fn beta_over_flats(flats: &CyclicFlatFamily, full_rank: usize) -> Vec<i64> {
    let k = flats.records.len();
    let mut beta = vec![0i64; k];
    for i in (0..k).rev() {
        let x = flats.records[i];
        let above: i64 = (i + 1..k)
            .filter(|&j| x.set.is_proper_subset(flats.records[j].set))
            .map(|j| beta[j])
            .sum();
        beta[i] = full_rank as i64 - x.rank as i64 - above;
    }
    beta
}

/// A small matroid with its rank table, cyclic flats, and the γ and β values
/// of every cyclic flat.
#[derive(Clone, Debug)]
pub struct FlatLattice {
    table: RankTable,
    flats: CyclicFlatFamily,
    beta: Vec<i64>,
    full_rank: usize,
}

impl FlatLattice {
    pub fn new<M: Matroid>(m: &M, limit: OracleLimit) -> Result<Self, Error> {
        let table = RankTable::new(m, limit)?;
        let mut flats = cyclic_flats_of_table(&table);
        gamma_over_flats(&mut flats);
        let full_rank = table.full_rank();
        let beta = beta_over_flats(&flats, full_rank);
        Ok(FlatLattice {
            table,
            flats,
            beta,
            full_rank,
        })
    }

    pub fn table(&self) -> &RankTable {
        &self.table
    }

    /// The cyclic flats with their γ values attached.
    pub fn flats(&self) -> &CyclicFlatFamily {
        &self.flats
    }

    pub fn gamma(&self, x: ElementSet) -> i64 {
        if let Some(r) = self.flats.get(x) {
            return r.gamma.expect("γ is filled in");
        }
        let below: i64 = self
            .flats
            .iter()
            .filter(|z| z.set.is_proper_subset(x))
            .map(|z| z.gamma.expect("γ is filled in"))
            .sum();
        self.table.nullity(x) as i64 - below
    }

    pub fn beta(&self, x: ElementSet) -> i64 {
        let above: i64 = self
            .flats
            .iter()
            .zip(&self.beta)
            .filter(|(z, _)| x.is_proper_subset(z.set))
            .map(|(_, b)| b)
            .sum();
        self.full_rank as i64 - self.table.rank(x) as i64 - above
    }

    /// Cyclic flats with `γ > 0`, carrying their γ.
    pub fn positive_gamma_flats(&self) -> CyclicFlatFamily {
        CyclicFlatFamily {
            ground_size: self.flats.ground_size,
            records: self
                .flats
                .iter()
                .filter(|r| r.gamma.is_some_and(|g| g > 0))
                .copied()
                .collect(),
        }
    }
}

impl Matroid for FlatLattice {
    fn ground_size(&self) -> usize {
        self.table.ground_size()
    }

    fn rank(&self, x: ElementSet) -> usize {
        self.table.rank(x)
    }
}

pub fn gamma<M: Matroid>(m: &M, x: ElementSet, limit: OracleLimit) -> Result<i64, Error> {
    Ok(FlatLattice::new(m, limit)?.gamma(x))
}

pub fn beta<M: Matroid>(m: &M, x: ElementSet, limit: OracleLimit) -> Result<i64, Error> {
    Ok(FlatLattice::new(m, limit)?.beta(x))
}

pub fn positive_gamma_flats<M: Matroid>(
    m: &M,
    limit: OracleLimit,
) -> Result<CyclicFlatFamily, Error> {
    Ok(FlatLattice::new(m, limit)?.positive_gamma_flats())
}

/// Which subsets a brute-force sweep visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// Every subset of the ground set.
    #[default]
    Full,
    /// Only cyclic subsets. A set of minimum size with a negative value is
    /// always cyclic, so the witness matches [`SweepMode::Full`].
    Pruned,
}

/// Result of an all-subset sign sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOutcome {
    /// The first negative set in canonical order, hence one of minimum
    /// cardinality.
    pub witness: Option<(ElementSet, i64)>,
}

impl SweepOutcome {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for SweepOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness {
            None => f.write_str("holds"),
            Some((x, v)) => write!(f, "fails at {x} with value {v}"),
        }
    }
}

fn sweep(
    lattice: &FlatLattice,
    mode: SweepMode,
    value: impl Fn(ElementSet) -> i64,
) -> SweepOutcome {
    let n = lattice.ground_size();
    let witness = ElementSet::all_subsets(n)
        .filter(|&x| mode == SweepMode::Full || lattice.is_cyclic(x))
        .map(|x| (x, value(x)))
        .find(|&(_, v)| v < 0);
    SweepOutcome { witness }
}

/// Decides whether `m` is a strict gammoid by checking `γ ≥ 0` on subsets.
pub fn is_strict_gammoid_bruteforce<M: Matroid>(
    m: &M,
    limit: OracleLimit,
    mode: SweepMode,
) -> Result<SweepOutcome, Error> {
    let lattice = FlatLattice::new(m, limit)?;
    Ok(sweep(&lattice, mode, |x| lattice.gamma(x)))
}

/// Decides whether `m` is transversal by checking `β ≥ 0` on subsets.
pub fn is_transversal_bruteforce<M: Matroid>(
    m: &M,
    limit: OracleLimit,
    mode: SweepMode,
) -> Result<SweepOutcome, Error> {
    let lattice = FlatLattice::new(m, limit)?;
    Ok(sweep(&lattice, mode, |x| lattice.beta(x)))
}

/// `Δγ(X) = γ_{M+ \ e}(X - e) - γ_{M+}(X)` for a fixed matroid `M+` and
/// element `e`.
#[derive(Clone, Debug)]
pub struct DeltaGamma {
    plus: FlatLattice,
    minus: FlatLattice,
    kept_position: Vec<Option<usize>>,
    e: Element,
}

impl DeltaGamma {
    pub fn new<M: Matroid>(mplus: &M, e: Element, limit: OracleLimit) -> Result<Self, Error> {
        let n = mplus.ground_size();
        if e.index() >= n {
            return Err(Error::ElementOutOfRange {
                element: e.index(),
                ground_size: n,
            });
        }
        let plus = FlatLattice::new(mplus, limit)?;
        let deleted = Minor::delete(&plus, ElementSet::singleton(n, e));
        let minus = FlatLattice::new(&deleted, limit)?;
        let kept_position = (0..n)
            .map(|i| deleted.from_inner(Element::new(i)).map(Element::index))
            .collect();
        Ok(DeltaGamma {
            plus,
            minus,
            kept_position,
            e,
        })
    }

    pub fn element(&self) -> Element {
        self.e
    }

    /// The lattice of `M+`.
    pub fn plus(&self) -> &FlatLattice {
        &self.plus
    }

    /// The lattice of `M+ \ e`, on the renumbered ground set.
    pub fn minus(&self) -> &FlatLattice {
        &self.minus
    }

    /// Maps a set of `M+` to the renumbered ground of `M+ \ e`, dropping `e`.
    pub fn compress(&self, x: ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.minus.ground_size(),
            x.iter().filter_map(|f| self.kept_position[f.index()]),
        )
    }

    pub fn delta(&self, x: ElementSet) -> i64 {
        self.minus.gamma(self.compress(x)) - self.plus.gamma(x)
    }
}
