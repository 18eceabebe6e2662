//! Exact computation in the rational Burnside algebras of small finite groups.
//!
//! The crate works with permutation groups whose element tables are fully
//! materialized (default order cap 400). On top of that foundation it
//! enumerates complete subgroup lattices, computes the Möbius function of the
//! subgroup poset, tables of marks and the top primitive idempotent of the
//! rational Burnside algebra, and the rational deflation numbers attached to
//! normal subgroups. Those numbers drive the B-group predicate and the
//! construction of the largest B-group quotient `beta(G)`, together with a
//! battery of consistency checks (two independent routes to every deflation
//! number, two independent constructions of `beta`).
//!
//! A small catalogue DSL (`C12`, `D8`, `A5 x C2`, `sd(C4, C2, (1 3))`)
//! constructs the groups everything is evaluated on, and the `outer` module
//! carries the outer-automorphism parameter tables for the finite simple
//! groups along with the cyclic-modulo-a-prime classification of those outer
//! automorphism groups.

pub mod bgroup;
pub mod bitset;
pub mod burnside;
pub mod cache;
pub mod catalogue;
pub mod group;
pub mod iso;
pub mod lattice;
pub mod outer;
pub mod perm;
pub mod structure;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator is not a permutation of degree {degree}: {reason}")]
    InvalidPermutation { degree: usize, reason: String },

    #[error("group closure exceeded the order cap {cap}")]
    CapExceeded { cap: usize },

    #[error("subgroup lattice exceeded the cap {cap}")]
    LatticeTooLarge { cap: usize },

    #[error("subgroup is not normal in the ambient group")]
    NotNormal,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("nonabelian simple factor of order {order} matches no catalogue group ({invariants})")]
    UnidentifiedSimpleFactor { order: usize, invariants: String },

    #[error("mark vector of the top idempotent is not the indicator of the full class")]
    MarkCheckFailed,

    #[error("deflated idempotent is not proportional to the quotient's top idempotent")]
    NotProportional,

    #[error("the two beta constructions returned non-isomorphic groups")]
    Disagreement,

    #[error("group has {found} composition factors isomorphic to {label}, expected exactly one")]
    HypothesisViolated { label: String, found: usize },

    #[error("parameters violate the family's row condition: {0}")]
    ConditionViolated(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub use bitset::ElemSet;
pub use group::{close_generators, close_generators_capped, ElemId, Group, Subgroup, DEFAULT_ORDER_CAP};
pub use lattice::{MobiusTable, SubgroupLattice};
