use thiserror::Error;

/// Every failure the library can report.
///
/// Input problems (malformed files, bad graphs, unknown names) are kept
/// apart from verdicts about a well-formed input, so the command line can
/// map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} has degree {found}, expected {expected}")]
    Degree { vertex: usize, found: usize, expected: usize },
    #[error("rotation at vertex {vertex}: {reason}")]
    Rotation { vertex: usize, reason: String },
    #[error("rotation system is not spherical: V - E + F = {euler} on the component of vertex {vertex}")]
    Genus { vertex: usize, euler: i64 },
    #[error("operation needs an embedded graph (rotation system missing)")]
    Mode,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} carries two loops and cannot be smoothed")]
    DoubleLoop(usize),
    #[error("vertex {0} is a loop-anchor")]
    LoopAnchor(usize),
    #[error("edge set is not a 1-factor: {0}")]
    NotOneFactor(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("no decomposition into o-cycles exists")]
    NotOColourable,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pattern mismatch: {0}")]
    Pattern(String),
    #[error("automorphism does not preserve the rotation system")]
    Compatibility,
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("strand label {label} appears {count} times")]
    Label { label: String, count: usize },
    #[error("crossing {crossing} lists {found} strands, expected 4")]
    NonQuadrivalent { crossing: usize, found: usize },
    #[error("unknown name {0:?}")]
    UnknownName(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by a bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Pattern(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
