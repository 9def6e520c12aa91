//! Error type shared by every module.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// No gauge of the structure constants reproduces every anchor.
    #[error("no sign convention satisfies the anchor set; conflicting anchors: {conflicts:?}")]
    AnchorUnsatisfiable { conflicts: Vec<String> },

    /// The anchor fixture is malformed or names a pair that is not a root pair.
    #[error("anchor fixture: {0}")]
    Fixture(String),

    /// A claimed sl2-triple fails one of its bracket identities.
    #[error("sl2-triple violation: {0}")]
    Sl2Violation(String),

    /// A distinguished vector is not in its stated graded component.
    #[error("graded membership violation: {name} is not in {component}")]
    GradedMembership { name: String, component: String },

    /// The form (e, [x, y]) is singular on g(-1).
    #[error("degenerate pairing on g(-1): rank {rank} < {dim}")]
    DegeneratePairing { rank: usize, dim: usize },

    /// Two independent evaluation routes disagree.
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    /// The prime is not a good prime for E8.
    #[error("{0} is not a good prime for E8")]
    BadPrime(u64),

    /// The rational does not lie in Z[1/2, 1/3, 1/5] localised at the prime.
    #[error("{0} has a denominator divisible by {1}")]
    NotIntegralAt(String, u64),

    /// A table file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The checksum trailer of a table file does not match its contents.
    #[error("checksum mismatch: file says {expected:08x}, contents give {actual:08x}")]
    ChecksumMismatch { expected: u32, actual: u32 },

    /// Operator or vector shapes do not fit together.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Filesystem failure.
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
