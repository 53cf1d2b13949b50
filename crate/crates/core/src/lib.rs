//! Qualitative temporal reasoning with S-words and S-languages.
//!
//! Temporal items are letters; a situation among items is an S-word (a
//! sequence of sets of simultaneous point events); an indefinite relation is
//! an S-language. Constraints are combined by bounded integration and join,
//! so composition tables are computed from the engine rather than stored.

pub mod algebra;
pub mod alloc;
pub mod delannoy;
pub mod error;
pub mod language;
pub mod lattice;
pub mod ops;
pub mod solver;
pub mod word;

pub use algebra::{
    atom_to_sword, compose, converse, mixed_table, sword_to_atom, transitivity_table, Algebra, RelationSet,
    TransitivityTable,
};
pub use alloc::{allocation_network, allocation_solve, AllocationInstance, AllocationOptions, AllocationSolution};
pub use delannoy::{delannoy_language, delannoy_number, delannoy_number_n, DelannoyIndex, PathStep};
pub use error::{Error, Result};
pub use language::SLanguage;
pub use lattice::{lattice_from, thue_successors, Distributivity, Lattice, Modularity, ThueSystem};
pub use ops::{
    concat, integrate_bounded, join, join_all, join_capped, project, project_language, s_shuffle,
    s_shuffle_languages, s_shuffle_many, word_shuffle, Integration, IntegrationSpec, JoinPlan,
};
pub use solver::{
    build_network, hasse_graph, join_order, Constraint, ConstraintNetwork, JoinStep, Occurrence, PrecedenceGraph,
    Solution, Solver, TemporalItem,
};
pub use word::{format_sword, parse_sword, Alphabet, Letter, ParikhVector, SLetter, SWord};

/// Exact counts (Delannoy numbers, language sizes).
pub type Count = num_bigint::BigUint;

/// Machine-word counts for callers that prefer overflow checks to bignums.
pub type SmallCount = u64;

/// Default limit on the number of words any explicit enumeration produces.
pub const DEFAULT_CAP: usize = 1_000_000;
