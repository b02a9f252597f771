//! Permutations, automorphisms and the groups they form.

pub mod aut;
pub mod group;
pub mod perm;
mod search;

pub use aut::{
    automorphism_group, equivalence_maps, equivalence_search, is_transitive, preserves, rotation_group, rotations_at,
    sts_automorphisms, symmetry_group, transitivity_witnesses, AutGroup, CosetWitness, EquivalenceResult, SearchMode,
};
pub use group::{PermGroup, GROUP_ELEMENT_CAP};
pub use perm::{Automorphism, Permutation};
