use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("jet {0} has zero value part and is not invertible")]
    NonInvertibleJet(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{op}: position {pos} out of range for a word of length {len}")]
    PositionOutOfRange {
        op: &'static str,
        pos: usize,
        len: usize,
    },

    #[error("word of length {len} exceeds the tabulated length {max_len}")]
    LengthOverflow { len: usize, max_len: usize },

    #[error("mould {mould} is singular at {word}")]
    Singular { mould: String, word: String },

    #[error("universal mould {0} needs a spectrum to be evaluated on letter words")]
    MissingSpectrum(String),

    #[error("invalid letter {letter}: {reason}")]
    InvalidLetter { letter: String, reason: String },

    #[error("letter {0} is not in the alphabet of the vector field")]
    UnknownLetter(String),

    #[error("linear part mismatch: {0}")]
    LinearPart(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
