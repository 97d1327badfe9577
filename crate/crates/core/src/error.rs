use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classes used by the command-line front-end to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad parameters supplied by the caller.
    Usage,
    /// Unreadable, malformed or inconsistent input data.
    Data,
    /// The data is well-formed but an algorithmic precondition does not hold.
    Algorithm,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("IDX header truncated: need {needed} bytes, have {available}")]
    IdxTruncatedHeader { needed: usize, available: usize },

    #[error("IDX magic must start with two zero bytes, found {0:02x} {1:02x}")]
    IdxBadMagic(u8, u8),

    #[error("unknown IDX element type code 0x{0:02x}")]
    IdxUnknownType(u8),

    #[error("IDX payload length mismatch: expected {expected} bytes, found {actual}")]
    IdxPayloadMismatch { expected: usize, actual: usize },

    #[error("bad PNM magic {0:?}: expected P2 or P5")]
    PgmBadMagic(String),

    #[error("PGM maxval {0} exceeds 255")]
    PgmMaxvalTooLarge(u32),

    #[error("malformed PGM header: {0}")]
    PgmHeader(String),

    #[error("PGM payload truncated: expected {expected} samples, found {actual}")]
    PgmTruncated { expected: usize, actual: usize },

    #[error("ragged CSV row at line {line}: expected {expected} cells, found {actual}")]
    RaggedRow { line: usize, expected: usize, actual: usize },

    #[error("CSV line {line}, column {column}: cannot parse {cell:?}")]
    BadCell { line: usize, column: usize, cell: String },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("images have heterogeneous shapes: {first:?} vs {other:?} at index {index}")]
    HeterogeneousShapes { first: (usize, usize), other: (usize, usize), index: usize },

    #[error("label {wanted}: requested {requested} samples but only {available} available")]
    InsufficientMatches { wanted: u32, requested: usize, available: usize },

    #[error("neighbour graph is disconnected ({components} components, sizes {sizes:?})")]
    Disconnected { components: usize, sizes: Vec<usize> },

    #[error("points {indices:?} coincide with the reference point; angles are undefined there")]
    DegenerateReference { indices: Vec<usize> },

    #[error("eigenvalue #{index} = {value:e} is not positive; cannot take its square root")]
    SpectralDeficiency { index: usize, value: f64 },

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("angular weight mode requires a per-edge angle table covering every edge")]
    MissingAngles,

    #[error("pairs {} are unreachable from each other", pair_list(.0))]
    Unreachable(Vec<(usize, usize)>),

    #[error("duplicate points {}: stress is undefined for zero distances", pair_list(.0))]
    DuplicatePoints(Vec<(usize, usize)>),

    #[error("cosine {0} lies outside [-1, 1] beyond rounding")]
    CosineOutOfRange(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn pair_list(pairs: &[(usize, usize)]) -> String {
    const SHOWN: usize = 8;
    let head: Vec<String> = pairs.iter().take(SHOWN).map(|(a, b)| format!("({a}, {b})")).collect();
    match pairs.len().saturating_sub(SHOWN) {
        0 => head.join(", "),
        more => format!("{} and {more} more", head.join(", ")),
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidArgument(_) => ErrorClass::Usage,
            Disconnected { .. }
            | DegenerateReference { .. }
            | SpectralDeficiency { .. }
            | NoConvergence { .. }
            | Unreachable(_)
            | DuplicatePoints(_)
            | CosineOutOfRange(_) => ErrorClass::Algorithm,
            _ => ErrorClass::Data,
        }
    }
}
