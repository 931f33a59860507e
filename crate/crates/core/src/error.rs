use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants map one-to-one onto the machine-readable `kind` strings emitted by
/// the CLI, so renaming a variant changes the wire format.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MismatchedField,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("basis elements are linearly dependent over the prime field")]
    SingularBasis,
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("{what} too large for desk-scale computation: {size} exceeds cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },
    #[error("not a conjugate pair: C2-dual is not contained in C1")]
    NotConjugate,
    #[error("not a canonical representative: {0}")]
    NotRepresentative(String),
    #[error("commutation phase mismatch: {0}")]
    PhaseMismatch(String),
    #[error("stabilizer eigenvalue mismatch: {0}")]
    EigenvalueMismatch(String),
    #[error("mixture identity violated: max deviation {0:e}")]
    MixtureMismatch(f64),
    #[error("fidelity equality violated: {0}")]
    EqualityViolation(String),
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("message is not a canonical message representative")]
    InvalidMessage,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::MismatchedField => "MismatchedField",
            Error::InvalidField(_) => "InvalidField",
            Error::SingularBasis => "SingularBasis",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TooLarge { .. } => "TooLarge",
            Error::NotConjugate => "NotConjugate",
            Error::NotRepresentative(_) => "NotRepresentative",
            Error::PhaseMismatch(_) => "PhaseMismatch",
            Error::EigenvalueMismatch(_) => "EigenvalueMismatch",
            Error::MixtureMismatch(_) => "MixtureMismatch",
            Error::EqualityViolation(_) => "EqualityViolation",
            Error::DomainError(_) => "DomainError",
            Error::InvalidMessage => "InvalidMessage",
            Error::InvalidState(_) => "InvalidState",
            Error::InvalidChannel(_) => "InvalidChannel",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
        }
    }

    pub(crate) fn too_large(what: &'static str, size: u128, cap: u128) -> Self {
        Error::TooLarge { what, size, cap }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// `base^exp` as u128, saturating; used for sizing checks before enumeration.
pub(crate) fn pow_sat(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Fails with `TooLarge` when `size > cap`.
pub(crate) fn ensure_cap(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::too_large(what, size, cap))
    } else {
        Ok(())
    }
}
