use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {n} outside supported range 1..={max}")]
    Dimension { n: u32, max: u32 },

    #[error("word {word:#x} does not fit in dimension {n}")]
    WordOutOfRange { word: u64, n: u32 },

    #[error("coordinate {i} invalid for dimension {n}")]
    InvalidCoordinate { i: u32, n: u32 },

    #[error("dimension {n} too small for coradius {coradius}: need at least {needed}")]
    DimensionTooSmall { n: u32, coradius: u32, needed: u32 },

    #[error("radius mismatch: expected {expected}, code is annotated with {found:?}")]
    RadiusMismatch { expected: u32, found: Option<u32> },

    #[error("{what} = {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    #[error("inconsistent bounds at (n={n}, R={r}): lower {lower} > upper {upper}")]
    InconsistentGrid { n: u32, r: u32, lower: u64, upper: u64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
