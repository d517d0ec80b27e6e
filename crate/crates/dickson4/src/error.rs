use thiserror::Error;

/// Crate-wide error type.
///
/// Exit-code mapping for the CLI: internal-consistency failures (two
/// independently computed answers disagreeing) are [`Error::exit_code`] 2,
/// everything user-correctable is 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported characteristic {0}: need a prime p > 3")]
    UnsupportedCharacteristic(u64),

    #[error("modulus {coeffs:?} is reducible over F_{p}")]
    ReducibleModulus { coeffs: Vec<u64>, p: u64 },

    #[error("field too large: p^e = {q} exceeds the supported bound {bound}")]
    FieldTooLarge { q: u128, bound: u64 },

    #[error("kind {0} out of range (expected 0..=3)")]
    KindOutOfRange(u8),

    #[error("degree {n} exceeds the exact-coefficient cap {max}")]
    DegreeTooLarge { n: u64, max: u64 },

    #[error("value table has {got} entries, field has {expected}")]
    LengthMismatch { expected: u64, got: usize },

    #[error("auxiliary polynomial requires even n, got {0}")]
    OddDegree(u64),

    #[error("criterion disagreement at q={q}, n={n}: {left_name}={left} vs {right_name}={right}")]
    CriterionDisagreement {
        q: u64,
        n: u64,
        left_name: &'static str,
        left: bool,
        right_name: &'static str,
        right: bool,
    },

    #[error("recurrence index coverage violated at n={0}")]
    IndexCoverage(u64),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    /// True when the error is a downstream reader hanging up mid-stream
    /// (e.g. piping into `head`), which a CLI should treat as success.
    pub fn is_broken_pipe(&self) -> bool {
        use std::io::ErrorKind::BrokenPipe;
        match self {
            Error::Io(e) => e.kind() == BrokenPipe,
            Error::Csv(e) => {
                matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == BrokenPipe)
            }
            _ => false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CriterionDisagreement { .. }
            | Error::IndexCoverage(_)
            | Error::InternalInconsistency(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
