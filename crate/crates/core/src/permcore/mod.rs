//! Finite permutations and the permutation-group algorithms the rest of
//! the crate is built on: orbits, Schreier-Sims stabilizer chains, point
//! stabilizers, alternating-group recognition and element orders.

pub mod cycle_types;
mod group;
mod perm;

pub use group::{
    alternating_generators, generates_alternating, PermGroup, StabChain, DEFAULT_DEGREE_CAP,
    DEFAULT_ELEMENT_CAP,
};
pub use perm::Permutation;
