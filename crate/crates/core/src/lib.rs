//! Randomness certification from Bell-inequality violations in the scenario
//! with two parties, two settings and two outcomes each.
//!
//! * [`correlations`]: behaviors, correlators, the local and no-signalling
//!   polytope vertices and locality tests.
//! * [`bell`]: Bell expressions in correlator form, the `I_α^β` family and
//!   local bounds.
//! * [`qubit`]: two-qubit realizations and maximal quantum values.
//! * [`randomness`]: guessing probabilities and min-entropy bounds.
//! * [`doubled`]: the four-measurement construction certifying nearly two
//!   bits from weakly entangled states.
//! * [`nspoly`]: the same question when only no-signalling is assumed.

pub mod bell;
pub mod cli;
pub mod correlations;
pub mod doubled;
pub mod error;
pub mod nspoly;
pub mod numeric;
pub mod qubit;
pub mod randomness;
pub mod repro;
pub mod simplex;

pub use error::{Error, Result};
