//! Variant-based equational unification over order-sorted theories
//! decomposed as rewrite rules modulo associativity and commutativity.
//!
//! Besides plain variant unification, the engine can post-filter unifiers
//! to a minimal most-general set and can prune subsumed unifiers while
//! intersecting variants ("fast" mode).

pub mod bench;
pub mod error;
pub mod oracle;
pub mod parse;
pub mod rewrite;
pub mod sort;
pub mod subst;
pub mod term;
pub mod theories;
pub mod theory;
pub mod unifier;
pub mod unify;
pub mod variant;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use sort::{Sort, SortGraph};
pub use subst::{rename_apart, FreshCounter, FreshKind, Subst};
pub use term::{Axioms, Op, OpRef, Term, Var};
pub use theory::{eq_extend, Rule, Signature, Theory};
