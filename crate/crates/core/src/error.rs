use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension {0} out of range (0..=24)")]
    DimensionOutOfRange(u32),
    #[error("vertex {vertex} out of range for Q_{n}")]
    VertexOutOfRange { vertex: u64, n: u32 },
    #[error("dimension mismatch: Q_{0} vs Q_{1}")]
    DimensionMismatch(u32, u32),
    #[error("color count mismatch: {0} vs {1}")]
    ColorCountMismatch(usize, usize),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("bad hex length: expected {expected} characters, got {got}")]
    HexLength { expected: usize, got: usize },
    #[error("invalid hex character {0:?}")]
    HexChar(char),
    #[error("coloring is not perfect: vertices {first} and {second} have color {color} but different neighbor profiles")]
    NotPerfect { first: u32, second: u32, color: u16 },
    #[error("matrix eigenvalues are not all of the form n - 2i")]
    Irregular,
    #[error("{what} is capped at n <= {cap} (got n = {n})")]
    CapExceeded { what: &'static str, cap: u32, n: u32 },
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no consistent antipodal matching")]
    NoAntipodalMatching,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("dataset rejected: {0}")]
    Dataset(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionOutOfRange(_) => "dimension_out_of_range",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::DimensionMismatch(..) => "dimension_mismatch",
            Error::ColorCountMismatch(..) => "color_count_mismatch",
            Error::InvalidColoring(_) => "invalid_coloring",
            Error::HexLength { .. } => "hex_length",
            Error::HexChar(_) => "hex_char",
            Error::NotPerfect { .. } => "not_perfect",
            Error::Irregular => "irregular",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NoAntipodalMatching => "no_antipodal_matching",
            Error::Precondition(_) => "precondition",
            Error::Dataset(_) => "dataset",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
