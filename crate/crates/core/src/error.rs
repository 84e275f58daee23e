use thiserror::Error;

use crate::cell::CellCode;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cell `{text}` has length {found}, expected {expected}")]
    WrongLength {
        text: String,
        found: usize,
        expected: usize,
    },

    #[error("cell `{text}` has invalid symbol {symbol:?} at position {position}")]
    BadSymbol {
        text: String,
        symbol: char,
        position: usize,
    },

    #[error("requested {k}-cells of a {dim}-dimensional cell")]
    InvalidK { k: usize, dim: usize },

    #[error("ambient dimension {0} outside supported range 1..=8")]
    InvalidDimension(usize),

    #[error("cell {0} is not a 2-cell")]
    MixedDimension(CellCode),

    #[error("cell {cell} has ambient dimension {found}, expected {expected}")]
    MixedAmbient {
        cell: CellCode,
        found: usize,
        expected: usize,
    },

    #[error("complex has no faces")]
    EmptyComplex,

    #[error("{0} is not a vertex of the complex")]
    NotAVertex(CellCode),

    #[error("complex is not a closed surface")]
    NotAClosedSurface,

    #[error(
        "exhaustive search in dimension {0} is too large; use randomized mode or the census flag"
    )]
    ExhaustiveTooLarge(usize),

    #[error("no matching surface found within {restarts} restarts")]
    BudgetExceeded { restarts: usize },

    #[error("point behind the camera (margin {margin:.3e}){}", .vertex.map(|v| format!(" at vertex {v}")).unwrap_or_default())]
    BehindCamera {
        vertex: Option<CellCode>,
        margin: f64,
    },

    #[error("projected face {0} is degenerate")]
    DegenerateFace(CellCode),

    #[error("projected edge {0} is degenerate")]
    DegenerateEdge(CellCode),

    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),

    #[error("total edge clearance is zero")]
    ZeroClearanceTotal,

    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// I/O failures are reported separately from validation failures by the CLI.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
