use thiserror::Error;

/// Errors surfaced by the public API.
///
/// Internal invariant violations (window bookkeeping, exponent parity) are
/// asserts, not errors: they indicate a bug, never bad user input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series is not invertible over the integers: lowest nonzero coefficient is {leading} at q^{exponent}")]
    NonInvertible { exponent: i64, leading: String },

    #[error("series is identically zero on its tracked window; cannot invert")]
    ZeroSeries,

    #[error("Pochhammer factors with step 0 never pass the truncation order")]
    NonTerminatingProduct,

    #[error("rule set uses a pattern window of {got}, larger than the supported maximum {max}")]
    WindowTooLarge { got: usize, max: usize },

    #[error("cannot certify finite index bounds for multi-sum evaluation: {0}")]
    UnboundedSum(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("partition {0} is not accepted by the rule set")]
    RuleViolation(String),

    #[error("malformed catalog: {0}")]
    Catalog(String),
}
