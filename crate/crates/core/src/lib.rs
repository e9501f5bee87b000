//! Computable symbolic dynamics for beta-shifts.
//!
//! The crate is organised bottom-up:
//!
//! * [`dd`] and [`tail`] hold the numeric and textual plumbing: double-double
//!   arithmetic for greedy orbits and the digit-tail grammar.
//! * [`beta`] constructs a base `β` either from a declared expansion of 1
//!   (symbolic mode) or from a numeric value (numeric mode).
//! * [`shift`] is the follower-state (Parry) automaton over `{0,1}`: admissibility,
//!   fullness, the digit-frequency counters and cylinder geometry.
//! * [`measure`] evaluates the random-walk cylinder measure, its shift
//!   pushforwards and Cesàro averages, and [`sim`] draws seeded digit streams.
//! * [`markov`] and [`dimension`] carry the Markov-measure synthesis, entropy
//!   rates and the level-set dimension formulas.
//!
//! Everything is `no_std` + `alloc`; IO and parallel drivers live in the
//! companion `betashift` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod beta;
pub mod dd;
pub mod dimension;
mod error;
pub mod markov;
pub mod measure;
pub mod scalar;
pub mod shift;
pub mod sim;
pub mod tail;

pub use beta::{BetaSpec, Mode, Simpleness};
pub use dd::Dd;
pub use error::{Error, Result};
pub use markov::MarkovMeasure;
pub use measure::CylWalkMeasure;
pub use scalar::{Prob, Rational, Scalar};
pub use shift::{BetaShift, CylinderInterval, Word};
pub use sim::{Law, SimStream};
pub use tail::DigitTail;

/// Largest word length accepted by exhaustive enumeration.
pub const ENUMERATION_GUARD: usize = 32;

/// Default truncation depth for numeric-mode bases.
pub const DEFAULT_DEPTH: usize = 64;
