//! Elements and fixed-width subsets of a ground set of at most 64 elements.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// An element of the ground set, identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(usize);

impl Element {
    pub const fn new(index: usize) -> Self {
        Element(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for Element {
    fn from(index: usize) -> Self {
        Element(index)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of `[0, ground_size)` stored as a bit vector.
///
/// Sets remember the size of the ground set they live in so that
/// complements are exact. Mixing sets from different ground sets is a
/// logic error and is caught by debug assertions.
///
/// The ordering is the canonical one used throughout the crate: first by
/// cardinality, then by bit pattern.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: u64,
    ground: u8,
}

const fn mask(ground: usize) -> u64 {
    if ground >= 64 {
        u64::MAX
    } else {
        (1u64 << ground) - 1
    }
}

impl ElementSet {
    pub fn empty(ground_size: usize) -> Self {
        assert!(
            ground_size <= MAX_GROUND,
            "ground size {ground_size} exceeds {MAX_GROUND}"
        );
        ElementSet {
            bits: 0,
            ground: ground_size as u8,
        }
    }

    pub fn full(ground_size: usize) -> Self {
        let mut set = Self::empty(ground_size);
        set.bits = mask(ground_size);
        set
    }

    /// Panics if `bits` has a member outside the ground set.
    pub fn from_bits(ground_size: usize, bits: u64) -> Self {
        let mut set = Self::empty(ground_size);
        assert!(
            bits & !mask(ground_size) == 0,
            "bits {bits:#x} outside ground of size {ground_size}"
        );
        set.bits = bits;
        set
    }

    /// Panics on an out-of-range index; use [`ElementSet::try_from_indices`]
    /// for untrusted input.
    pub fn from_indices<I: IntoIterator<Item = usize>>(ground_size: usize, indices: I) -> Self {
        match Self::try_from_indices(ground_size, indices) {
            Some(set) => set,
            None => panic!("index outside ground of size {ground_size}"),
        }
    }

    pub fn try_from_indices<I: IntoIterator<Item = usize>>(
        ground_size: usize,
        indices: I,
    ) -> Option<Self> {
        let mut set = Self::empty(ground_size);
        for i in indices {
            if i >= ground_size {
                return None;
            }
            set.bits |= 1 << i;
        }
        Some(set)
    }

    pub fn singleton(ground_size: usize, e: Element) -> Self {
        Self::from_indices(ground_size, [e.index()])
    }

    pub fn ground_size(self) -> usize {
        self.ground as usize
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, e: Element) -> bool {
        e.index() < self.ground_size() && self.bits >> e.index() & 1 == 1
    }

    #[must_use]
    pub fn with(mut self, e: Element) -> Self {
        self.insert(e);
        self
    }

    #[must_use]
    pub fn without(mut self, e: Element) -> Self {
        self.remove(e);
        self
    }

    pub fn insert(&mut self, e: Element) {
        assert!(e.index() < self.ground_size(), "element {e} outside ground");
        self.bits |= 1 << e.index();
    }

    pub fn remove(&mut self, e: Element) {
        if e.index() < self.ground_size() {
            self.bits &= !(1 << e.index());
        }
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        debug_assert_eq!(self.ground, other.ground);
        ElementSet {
            bits: self.bits | other.bits,
            ground: self.ground,
        }
    }

    #[must_use]
    pub fn intersection(self, other: Self) -> Self {
        debug_assert_eq!(self.ground, other.ground);
        ElementSet {
            bits: self.bits & other.bits,
            ground: self.ground,
        }
    }

    #[must_use]
    pub fn difference(self, other: Self) -> Self {
        debug_assert_eq!(self.ground, other.ground);
        ElementSet {
            bits: self.bits & !other.bits,
            ground: self.ground,
        }
    }

    #[must_use]
    pub fn complement(self) -> Self {
        ElementSet {
            bits: !self.bits & mask(self.ground_size()),
            ground: self.ground,
        }
    }

    pub fn is_subset(self, other: Self) -> bool {
        debug_assert_eq!(self.ground, other.ground);
        self.bits & !other.bits == 0
    }

    pub fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self.bits != other.bits
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.bits & other.bits == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<Element> {
        (self.bits != 0).then(|| Element(self.bits.trailing_zeros() as usize))
    }

    /// Members in ascending index order.
    pub fn iter(self) -> Iter {
        Iter { bits: self.bits }
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().map(Element::index).collect()
    }

    /// Re-embeds the set in a ground set of a different size. Members must
    /// fit.
    pub fn resized(self, ground_size: usize) -> Self {
        Self::from_bits(ground_size, self.bits)
    }

    /// All subsets of this set, in the canonical (cardinality, bits) order.
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let members: Vec<Element> = self.iter().collect();
        let ground = self.ground_size();
        CanonicalSubsets::new(members.len()).map(move |local| {
            let mut set = ElementSet::empty(ground);
            for i in ElementSet::from_bits(64, local).iter() {
                set.insert(members[i.index()]);
            }
            set
        })
    }

    /// All `2^n` subsets of the ground set in canonical order.
    pub fn all_subsets(ground_size: usize) -> impl Iterator<Item = ElementSet> {
        CanonicalSubsets::new(ground_size).map(move |bits| ElementSet::from_bits(ground_size, bits))
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.bits.cmp(&other.bits))
            .then(self.ground.cmp(&other.ground))
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl BitOr for ElementSet {
    type Output = ElementSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs)
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs)
    }
}

impl Sub for ElementSet {
    type Output = ElementSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs)
    }
}

impl IntoIterator for ElementSet {
    type Item = Element;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

#[derive(Clone, Debug)]
pub struct Iter {
    bits: u64,
}

impl Iterator for Iter {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(Element(i))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Bit patterns over `n` bits ordered by popcount, then value (Gosper's hack
/// within each popcount layer).
struct CanonicalSubsets {
    n: usize,
    k: usize,
    next: Option<u64>,
}

impl CanonicalSubsets {
    fn new(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        CanonicalSubsets {
            n,
            k: 0,
            next: Some(0),
        }
    }
}

impl Iterator for CanonicalSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        let limit = mask(self.n);
        self.next = if current == limit {
            None
        } else {
            let following = if current == 0 {
                None
            } else {
                let c = current & current.wrapping_neg();
                let r = current.wrapping_add(c);
                // r == 0 means the top bit overflowed.
                if r == 0 {
                    None
                } else {
                    let v = (((r ^ current) >> 2) / c) | r;
                    (v & !limit == 0).then_some(v)
                }
            };
            match following {
                Some(v) => Some(v),
                None => {
                    self.k += 1;
                    Some(mask(self.k))
                }
            }
        };
        Some(current)
    }
}
