use thiserror::Error;

/// Errors raised by the toolkit. Every variant except `Io` and `Parse`
/// signals a violated precondition on the caller's input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("the zero polynomial has no well-defined root count")]
    ZeroPolynomial,
    #[error("cannot build a line through two equal points")]
    DegeneratePair,
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} outside the supported range 1..={max}", max = crate::geom::MAX_DIM)]
    DimensionOutOfRange(usize),
    #[error("empty input")]
    EmptyInput,
    #[error("flat does not pass through the origin")]
    NotLinearSubspace,
    #[error("line does not pass through the origin")]
    NotThroughOrigin,
    #[error("zero vector has no complex span")]
    ZeroVector,
    #[error("real dimension {0} is odd; cannot pair coordinates into complex numbers")]
    OddDimension(usize),
    #[error("line {index} is not contained in the given real subspace")]
    NotContained { index: usize },
    #[error("subspace is the whole space; no normal direction exists")]
    NotProper,
    #[error("witness vector {index} does not lie on the real image of its line")]
    WrongWitness { index: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoints(usize, usize),
    #[error("richness threshold must be at least 2, got {0}")]
    BadR(usize),
    #[error("{n} points exceeds the enumeration cap of {cap}")]
    TooManyPoints { n: usize, cap: usize },
    #[error("incidence graph has no edges")]
    EmptyGraph,
    #[error("bisection search failed after {attempts} attempts; delta may be too small for this instance")]
    SearchFailed { attempts: usize },
    #[error("need at least {needed} points, got {got}")]
    TooSmall { needed: usize, got: usize },
    #[error("{n} points in dimension {d} exceeds the exact search limits (n <= {max_n}, d <= {max_d}); use a sampled subset")]
    ScaleExceeded {
        n: usize,
        d: usize,
        max_n: usize,
        max_d: usize,
    },
    #[error("line {index} does not pass through the pencil point")]
    NotIncident { index: usize },
    #[error("r = {r} is below n^epsilon0 for n = {n}")]
    CutoffViolated { r: usize, n: usize },
    #[error("scaling sweep needs at least 3 sizes, got {0}")]
    TooFewSizes(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
