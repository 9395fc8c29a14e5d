use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient rings differ: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("leading coefficient {0} is not a unit of {1}")]
    NonUnitLeading(String, String),

    #[error("coefficient of q^{n} requested but series is only valid below q^{prec}")]
    OutOfWindow { n: i64, prec: i64 },

    #[error("operation needs validity through q^{needed} but only q^{have} is certified")]
    InsufficientPrecision { needed: i64, have: i64 },

    #[error("eta quotient has non-integral leading exponent {0}/24")]
    NonIntegralLeadingExponent(i64),

    #[error("denominator {d} does not divide level {level}")]
    BadCuspDenominator { d: u64, level: u64 },

    #[error("series is not a polynomial in the Hauptmodul: residual has a q^{0} term")]
    NonzeroResidual(i64),

    #[error("exact integer coefficients required, got ring {0}")]
    ExactRingRequired(String),

    #[error("inexact division: {0} does not divide {1}")]
    InexactDivision(String, String),

    #[error("recurrence row {row} disagrees with the q-series oracle at H^{col}: recurrence {recurrence}, oracle {oracle}")]
    OracleDisagreement {
        row: usize,
        col: usize,
        recurrence: String,
        oracle: String,
    },

    #[error("row {row} has a nonzero entry at H^{col} outside its support [{lo}, {hi}]")]
    SupportViolation {
        row: usize,
        col: usize,
        lo: usize,
        hi: usize,
    },

    #[error("iteration needs matrix rows up to {needed} but only {have} were built")]
    InsufficientMatrixRows { needed: usize, have: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
