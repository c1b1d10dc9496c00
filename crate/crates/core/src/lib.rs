//! Kiselman's semigroup `K_n`: normal forms, endomorphisms, the level
//! ultrametric, enumeration and random partial products.

pub mod cli;
pub mod element;
pub mod enumerate;
pub mod error;
pub mod level;
pub mod morphism;
pub mod oracle;
pub mod selftest;
pub mod stochastic;
pub mod word;

/// Largest supported rank; index sets are stored as `u32` bitmasks.
pub const MAX_RANK: usize = 32;

pub use element::{idempotent, is_canonical, reduce, Element};
pub use enumerate::{cardinality_table, enumerate, CardinalityTable, ElementList};
pub use error::{Error, Result};
pub use level::{
    annihilation_depth, ball, distance, level_by_definition, level_by_recursion, level_sets,
    level_step, r_set, r_set_by_structure, sphere, upper_idempotent,
};
pub use morphism::{
    apply_endomorphism, delete, delete_prefix, deletion_matrix, dn_member, dn_product, word_delete,
    BoolMatrix, Endomorphism,
};
pub use oracle::{congruence_oracle, congruence_oracle_with_budget, CongruencePartition};
pub use word::{all_words, Generator, IndexSet, Word};
