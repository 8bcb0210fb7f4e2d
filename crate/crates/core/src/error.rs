use core::fmt;

use alloc::string::String;

/// Errors raised anywhere in the core crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed real-number literal.
    Parse(String),
    /// Radicand is not a positive non-square, or the denominator vanishes.
    InvalidQuadratic(String),
    /// A decimal input was asked for more bits than it declares.
    PrecisionExceedsInput {
        requested: u32,
        available: u32,
    },
    /// A comparison could not be decided within the precision cap.
    AmbiguousComparison {
        bits: u32,
    },
    /// The input is an integer; its minimal-vector sequence degenerates.
    IntegerInput,
    /// A decimal input ran out of certified partial quotients.
    TailUnavailable {
        index: usize,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    /// The pair does not satisfy the sign/magnitude pattern of consecutive minimal vectors.
    NotConsecutive,
    /// The last vector has a zero first coordinate; no successor exists.
    SequenceEnds,
    /// Point outside the domain of the map being applied.
    DomainError,
    /// An exact rational orbit reached the boundary `x = 0` at the given step.
    OrbitTerminates {
        step: usize,
    },
    /// Envelope computation needs at least three vectors.
    InsufficientSequence {
        len: usize,
    },
    /// A Hermite vector has no witnessing `Delta` on the (refined) grid.
    GridTooCoarse {
        index: usize,
    },
    /// Flags and sequence do not line up.
    MisalignedInput {
        flags: usize,
        vectors: usize,
    },
    InvalidArgument(&'static str),
}

impl Error {
    /// True for failures caused by insufficient precision rather than bad input.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExceedsInput { .. }
                | Error::AmbiguousComparison { .. }
                | Error::TailUnavailable { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvalidQuadratic(msg) => write!(f, "invalid quadratic irrational: {msg}"),
            Error::PrecisionExceedsInput {
                requested,
                available,
            } => write!(
                f,
                "requested {requested} bits but the input only carries {available}"
            ),
            Error::AmbiguousComparison { bits } => {
                write!(f, "comparison undecided at {bits} bits of precision")
            }
            Error::IntegerInput => write!(f, "input is an integer"),
            Error::TailUnavailable { index } => {
                write!(
                    f,
                    "tail value {index} is not certified by the input precision"
                )
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::NotConsecutive => write!(f, "vectors are not consecutive minimal vectors"),
            Error::SequenceEnds => write!(f, "minimal-vector sequence ends here"),
            Error::DomainError => write!(f, "point outside the domain of the map"),
            Error::OrbitTerminates { step } => write!(f, "orbit terminates at step {step}"),
            Error::InsufficientSequence { len } => {
                write!(f, "sequence of length {len} is too short (need at least 3)")
            }
            Error::GridTooCoarse { index } => {
                write!(f, "no grid value witnesses Hermite vector {index}")
            }
            Error::MisalignedInput { flags, vectors } => {
                write!(f, "{flags} flags do not align with {vectors} vectors")
            }
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
