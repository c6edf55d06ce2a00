use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into three families that the CLI maps to exit codes:
/// input-shape problems (`Domain`, `Dimension`, `Index`, `Subset`, `Graph`,
/// `Format`), mathematical preconditions (`Positivity`, `Guard`,
/// `NotMarkov`, `Inconsistent`) and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("index {value} out of range for variable {variable} with {cardinality} categories")]
    Index {
        variable: usize,
        value: usize,
        cardinality: usize,
    },

    #[error("invalid variable subset: {0}")]
    Subset(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("non-finite table entry at cell {0}")]
    NonFinite(usize),

    #[error("positivity violated at cell {cell}")]
    Positivity { cell: usize },

    #[error("probability table does not sum to one (sum = {0})")]
    Normalization(f64),

    #[error("size guard exceeded: {what} = {size} > {limit}")]
    Guard {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("function is not Markov with respect to the graph (max |second difference| = {max_violation})")]
    NotMarkov { max_violation: f64 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Whether the error comes from a mathematical precondition rather than
    /// from malformed input.
    pub fn is_math(&self) -> bool {
        matches!(
            self,
            Error::Positivity { .. }
                | Error::Normalization(_)
                | Error::Guard { .. }
                | Error::NotMarkov { .. }
                | Error::Inconsistent(_)
                | Error::NonFinite(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
