//! Exact computation and empirical checking for the iterated map
//! `x -> n mod x`.
//!
//! The modules follow the data flow of the toolkit:
//!
//! * [`trajectory`] computes orbits, step counts `P(a, n)` and Pierce digits.
//! * [`pmax`] computes `P(n) = max_a P(a, n)` with a linear-time table.
//! * [`dyadic`] buckets orbits by dyadic scale and checks the structural
//!   bounds that govern how long an orbit can stay at one scale.
//! * [`exponent`] does the exact rational exponent bookkeeping.
//! * [`witness`] builds and certifies the lower-bound constructions.
//!
//! [`euler`] and [`ratio`] are shared helpers: rigorous rational brackets
//! around `1/e`, and the `p/q` text form used for every exact rational.

pub mod dyadic;
pub mod error;
pub mod euler;
pub mod exponent;
pub mod pmax;
pub mod ratio;
pub mod trajectory;
pub mod witness;

pub use error::{Error, Result};
pub use trajectory::{
    mod_step, pierce_digits, reconstruct, steps_count, trajectory, PierceExpansion, Trajectory,
};

/// Largest modulus the 64-bit arithmetic paths accept.
pub const MAX_N: u64 = (1 << 63) - 1;
