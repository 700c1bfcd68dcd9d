use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A trajectory needed more steps than the configured cap allows.
    #[error("trajectory of ({a}, {n}) exceeded the step cap of {cap}")]
    CapExceeded { a: u64, n: u64, cap: usize },

    /// A Pierce digit sequence that is empty or not strictly increasing.
    #[error("invalid expansion: {0}")]
    InvalidExpansion(String),

    /// The step table could not be allocated.
    #[error("cannot allocate step table of {entries} entries ({bytes} bytes)")]
    Allocation { entries: u64, bytes: u64 },

    /// A step counter would exceed the width of the table entries.
    #[error("step counter overflow at n = {n}, a = {a}")]
    CounterOverflow { n: u64, a: u64 },

    /// A value does not fit the machine integer width in use.
    #[error("overflow: {0}; rerun in big-integer mode")]
    Overflow(String),

    /// Interval refinement hit its iteration ceiling without deciding.
    #[error("interval refinement did not decide after {terms} series terms")]
    Undecided { terms: usize },
}
