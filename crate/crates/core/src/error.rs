//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sieve limit {limit} is below required bound {needed}")]
    SieveTooSmall { limit: u64, needed: u64 },
    #[error("character modulo {0} is not primitive")]
    NotPrimitive(u64),
    #[error("pole at s = {0}")]
    Pole(String),
    #[error("point {0} lies outside the strip of validity")]
    OutOfStrip(String),
    #[error("modulus {n} exceeds the evaluator bound {max}")]
    ModulusTooLarge { n: u64, max: u64 },
    #[error("L-function of modulus {modulus} is too close to zero near s = {s}")]
    ZeroDetected { modulus: u64, s: String },
    #[error("series or product diverges at the requested parameters: {0}")]
    Divergent(String),
    #[error("shifts are outside the validity range: {0}")]
    InvalidShifts(String),
    #[error("parameters within the pole guard: {0}")]
    PoleProximity(String),
    #[error("cache format version mismatch: expected {expected}, found {found}")]
    VersionMismatch { expected: String, found: String },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn fmt_c(s: num_complex::Complex64) -> String {
    format!("{}{:+}i", s.re, s.im)
}
