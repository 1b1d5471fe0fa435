use thiserror::Error;

/// Why a bit string is not a valid encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecodeErrorKind {
    /// Starts with `01` or `11` (or is an overlong special) without being
    /// one of the special values.
    InvalidHeader,
    /// Exponent 0 stored with a negative exponent sign (`10011…`, `00100…`).
    NegativeZeroExponent,
    /// Tetrade above 9 or declet above 999.
    DigitOutOfRange,
    /// Significand outside `[1, 10)` after the optional complement.
    SignificandOutOfRange,
    /// Input ends inside a field.
    TruncatedInput,
}

impl DecodeErrorKind {
    pub fn description(self) -> &'static str {
        match self {
            DecodeErrorKind::InvalidHeader => "invalid header",
            DecodeErrorKind::NegativeZeroExponent => "negative zero exponent",
            DecodeErrorKind::DigitOutOfRange => "digit out of range",
            DecodeErrorKind::SignificandOutOfRange => "significand out of range",
            DecodeErrorKind::TruncatedInput => "truncated input",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
#[error("{} at bit {position}", kind.description())]
pub struct DecodeError {
    pub kind: DecodeErrorKind,
    /// Bit index where the offending field starts.
    pub position: usize,
}

impl DecodeError {
    pub fn new(kind: DecodeErrorKind, position: usize) -> Self {
        Self { kind, position }
    }

    pub(crate) fn truncated(position: usize) -> Self {
        Self::new(DecodeErrorKind::TruncatedInput, position)
    }
}

/// Failures when producing an encoding under non-default options.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("value needs {needed} bits for sign, exponent and leading digit but the key has {width}")]
    FixedWidthRange { needed: u64, width: u32 },
    #[error("invalid codec options: {0}")]
    InvalidOptions(&'static str),
}
