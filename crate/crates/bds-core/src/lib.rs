//! Combinatorial core for bandit multiclass learning experiments.
//!
//! Everything in this crate operates on finite concept classes: sets of
//! label vectors over a small instance domain. On top of that substrate it
//! provides
//!
//! - exact shattering-dimension calculators (pseudo-box peeling cores,
//!   bandit-DS search, per-list-size DS and exponential dimensions,
//!   Natarajan dimension),
//! - the one-inclusion hypergraph together with an exact min-max
//!   L-outdegree list orientation solver (binary search over a max-flow
//!   feasibility check),
//! - the transductive one-inclusion list learner, list majority voting,
//!   and exact list/leave-one-out error evaluation,
//! - the cascading bandit learner that halves list sizes epoch by epoch
//!   under bandit feedback, with its epoch schedule,
//! - generators for the pseudo-box and two-point lower-bound instances and
//!   Monte-Carlo estimation of their restricted error.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats, and the CLI
//! live in the companion `bds-lab` crate. Every operation is deterministic:
//! collections iterate in canonical (lexicographic) order and all
//! randomness flows from explicitly derived seeds.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bandit_cascade;
pub mod concept_class;
pub mod dimensions;
pub mod error;
pub mod flow;
pub mod hard_instances;
pub mod list_learning;
pub mod one_inclusion;
pub mod rat;
pub mod seeding;

pub use concept_class::{ConceptClass, InstanceSequence, ProjectedClass};
pub use error::Error;
pub use rat::Rat;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
