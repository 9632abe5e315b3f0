use core::fmt;

pub type Result<T> = core::result::Result<T, SqzError>;

#[derive(Debug, Clone, PartialEq)]
pub enum SqzError {
    /// Particle number not allowed for the requested operation.
    InvalidSize { n: usize, reason: &'static str },
    /// A scalar argument fell outside its domain.
    OutOfRange { name: &'static str, value: f64 },
    /// Amplitude vector has the wrong length or is not normalized.
    BadState(&'static str),
    /// Density matrix failed a validity check; names the property.
    InvalidDensity(&'static str),
    /// The mean spin vector is too short to define a direction.
    MsdUndefined,
    /// The requested quantity has a vanishing denominator.
    Singular(&'static str),
    /// Non-finite input.
    NonFinite(&'static str),
}

impl fmt::Display for SqzError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SqzError::InvalidSize { n, reason } => write!(f, "invalid particle number {n}: {reason}"),
            SqzError::OutOfRange { name, value } => write!(f, "{name} = {value} is out of range"),
            SqzError::BadState(why) => write!(f, "invalid state: {why}"),
            SqzError::InvalidDensity(prop) => write!(f, "invalid density matrix: not {prop}"),
            SqzError::MsdUndefined => write!(f, "mean spin direction undefined (|<J>| too small)"),
            SqzError::Singular(what) => write!(f, "singular quantity: {what}"),
            SqzError::NonFinite(what) => write!(f, "non-finite input: {what}"),
        }
    }
}

impl core::error::Error for SqzError {}
