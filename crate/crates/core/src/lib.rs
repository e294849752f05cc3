//! Exact computation with group cellular automata over finitely generated
//! groups, with finite-group alphabets and symbolic split algebraic-group
//! alphabets.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`]: universes, balls, Cayley ball graphs, Følner boxes
//! - [`lattice`]: big-integer matrices and Smith normal form
//! - [`alphabet`]: finite and symbolic alphabets and their homomorphisms
//! - [`ca`]: cellular automata, composition, inverse search
//! - [`shift`]: de Bruijn graphs, image automata, 1D shifts of finite type
//! - [`deciders`]: pre-injectivity, surjectivity, post-surjectivity and the
//!   two weak pre-injectivity notions
//! - [`sofic`]: labeled graphs, sofic witnesses, packings, tilings and the
//!   counting audit
//! - [`mdim`]: window dimensions, mean dimension and entropy estimates
//! - [`corpus`]: seeded random group cellular automata

pub mod alphabet;
pub mod ca;
pub mod corpus;
pub mod deciders;
pub mod error;
pub mod group;
pub mod lattice;
pub mod mdim;
pub mod shift;
pub mod sofic;

pub use alphabet::{Alphabet, FiniteGroup, FiniteHom, Hom, SymbolicAlphabet, SymbolicHom};
pub use ca::{CellularAutomaton, InverseSearch, NonInjectivityWitness, Patch, PeriodicConfig};
pub use deciders::{PropertyVerdict, VerdictStatus};
pub use error::{Error, Result};
pub use group::{GroupElement, GroupUniverse};
pub use lattice::{IntMatrix, TorsionProfile};
pub use sofic::LabeledGraph;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serializer;

/// Serialises a big integer as a JSON number when it fits in `u64` and as a
/// decimal string otherwise.
pub fn serialize_biguint<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&n.to_string()),
    }
}
