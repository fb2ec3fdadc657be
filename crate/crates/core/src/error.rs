use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Error classes surfaced by the library. The CLI maps each class to its own
/// exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent groupoid/set/measure input.
    #[error("spec error: {0}")]
    Spec(String),
    /// Arguments that do not belong together (e.g. sets over different unit spaces).
    #[error("usage error: {0}")]
    Usage(String),
    /// A value failed validation (length function axioms, negative densities, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// A configured resource cap was exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    /// An arrow is not reachable from the generating set.
    #[error("generation error: {0}")]
    Generation(String),
    /// A point was outside the domain of a partial map.
    #[error("domain error: {0}")]
    Domain(String),
    /// A heuristic estimate could not be formed.
    #[error("estimation error: {0}")]
    Estimation(String),
    /// A finite search ran off the end of its table.
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    /// The caller asked for an algorithm whose hypotheses do not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An internal invariant was violated; carries a state dump.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    /// A numerical iteration failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
}
