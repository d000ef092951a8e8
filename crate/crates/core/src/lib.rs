//! Strict gammoids, transversal matroids and their cyclic flats.
//!
//! The crate decides, in polynomial time, whether deleting one element from
//! a strict gammoid leaves a strict gammoid, and dually whether contracting
//! one element of a transversal matroid leaves a transversal matroid. It also
//! ships the exponential brute-force oracles used to check those decisions on
//! small ground sets.
//!
//! Ground sets have at most [`MAX_GROUND`] elements and are index based.

pub mod corpus;
pub mod decide;
pub mod gammoid;
pub mod ground;
pub mod lattice;
pub mod matroid;
pub mod set;

pub use decide::{
    decide_contraction, decide_deletion, ContractionDecision, DeletionDecision, Verdict,
    WitnessKind,
};
pub use gammoid::{DigraphRep, StrictGammoid};
pub use ground::{Matching, SetSystem};
pub use lattice::{CyclicFlatFamily, FlatLattice, FlatRecord};
pub use matroid::{Matroid, TransversalMatroid};
pub use set::{Element, ElementSet, MAX_GROUND};

/// Largest ground set the exponential oracles accept unless overridden.
pub const DEFAULT_ORACLE_LIMIT: usize = 20;

/// Upper bound on ground-set size for exhaustive subset enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimit(pub usize);

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit(DEFAULT_ORACLE_LIMIT)
    }
}

impl OracleLimit {
    pub fn check(self, ground_size: usize) -> Result<(), Error> {
        if ground_size > self.0 {
            Err(Error::OracleLimit {
                size: ground_size,
                limit: self.0,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ground set of size {size} exceeds the supported maximum {limit}")]
    GroundTooLarge { size: usize, limit: usize },
    #[error("set lives in a ground set of size {found}, expected {expected}")]
    GroundMismatch { expected: usize, found: usize },
    #[error("ground set of size {size} exceeds the oracle limit {limit}")]
    OracleLimit { size: usize, limit: usize },
    #[error("element {element} is outside the ground set of size {ground_size}")]
    ElementOutOfRange { element: usize, ground_size: usize },
    #[error("self-arc at vertex {0}")]
    SelfArc(usize),
    #[error("set {0} appears twice in a flat family")]
    DuplicateFlat(ElementSet),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("presentation with {sets} sets for a matroid of rank {rank} could not be reduced")]
    NormalizationFailed { sets: usize, rank: usize },
}
