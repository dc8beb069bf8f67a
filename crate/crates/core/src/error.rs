use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the domain of a mathematical function.
    #[error("{function}: argument {value} outside domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// A `SystemConfig` field violates its invariant.
    #[error("invalid configuration: {field} = {value} ({reason})")]
    Config {
        field: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("{what} did not converge: estimated error {estimated_error:.3e} after {evaluations} evaluations")]
    Numeric {
        what: &'static str,
        estimated_error: f64,
        evaluations: usize,
    },

    #[error("degenerate channel in cell {cell}: both gains are zero")]
    DegenerateChannel { cell: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cannot schedule an empty cell")]
    EmptyCell,
}

impl Error {
    pub(crate) fn domain(function: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            function,
            value,
            expected,
        }
    }
}
