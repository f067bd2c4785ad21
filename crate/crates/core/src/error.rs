use thiserror::Error;

use crate::report::CheckReport;
use crate::simplicial::CellId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("simplicial identity {identity} fails at level {level} on cell {simplex}")]
    IdentityViolation {
        level: usize,
        identity: String,
        simplex: CellId,
    },
    #[error("missing table entry: {0}")]
    MissingTableEntry(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),
    #[error("maps do not share a target")]
    TargetMismatch,
    #[error("cylinder depth {depth} exceeds what truncation {truncation} supports")]
    DepthExceedsTruncation { depth: usize, truncation: usize },
    #[error("horn at ({m},{j}) has no filler")]
    NoFiller { m: usize, j: usize },
    #[error("invalid simplicial map at level {level}, cell {cell}: {detail}")]
    InvalidMap {
        level: usize,
        cell: CellId,
        detail: String,
    },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("not a 1-groupoid: {0}")]
    NotA1Groupoid(String),
    #[error("not a 2-groupoid: {0}")]
    NotA2Groupoid(String),
    #[error("invalid crossed module: {0}")]
    InvalidCrossedModule(String),
    #[error("invalid group-like groupoid: {0}")]
    InvalidGroupLike(String),
    #[error("not a transformation: {0}")]
    NotATransformation(String),
    #[error("not a strict action: {0}")]
    NotAStrictAction(String),
    #[error("coherence failure: {0}")]
    CoherenceFailure(String),
    #[error("projection is not a Kan fibration: {}", .0.summary())]
    NotAFibration(Box<CheckReport>),
    #[error("base is not the nerve of a group: {0}")]
    BaseNotA1Group(String),
    #[error("map is not a hypercover: {}", .0.summary())]
    NotAHypercover(Box<CheckReport>),
    #[error("vertex map is not bijective: {0}")]
    BaseVertexMapNotBijective(String),
    #[error("action is not free: object {object} is fixed by {element}")]
    ActionNotFree { object: usize, element: usize },
    #[error("not 2-isotropy free: vertex {vertex} has {count} totally degenerate-bounded 2-cells")]
    Not2IsotropyFree { vertex: CellId, count: usize },
    #[error("well-definedness failure: {0}")]
    WellDefinednessFailure(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// The variant name, for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::IdentityViolation { .. } => "IdentityViolation",
            Error::MissingTableEntry(_) => "MissingTableEntry",
            Error::InvalidIndex(_) => "InvalidIndex",
            Error::TruncationMismatch(_) => "TruncationMismatch",
            Error::TargetMismatch => "TargetMismatch",
            Error::DepthExceedsTruncation { .. } => "DepthExceedsTruncation",
            Error::NoFiller { .. } => "NoFiller",
            Error::InvalidMap { .. } => "InvalidMap",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::InvalidGroupoid(_) => "InvalidGroupoid",
            Error::InvalidFunctor(_) => "InvalidFunctor",
            Error::NotA1Groupoid(_) => "NotA1Groupoid",
            Error::NotA2Groupoid(_) => "NotA2Groupoid",
            Error::InvalidCrossedModule(_) => "InvalidCrossedModule",
            Error::InvalidGroupLike(_) => "InvalidGroupLike",
            Error::NotATransformation(_) => "NotATransformation",
            Error::NotAStrictAction(_) => "NotAStrictAction",
            Error::CoherenceFailure(_) => "CoherenceFailure",
            Error::NotAFibration(_) => "NotAFibration",
            Error::BaseNotA1Group(_) => "BaseNotA1Group",
            Error::NotAHypercover(_) => "NotAHypercover",
            Error::BaseVertexMapNotBijective(_) => "BaseVertexMapNotBijective",
            Error::ActionNotFree { .. } => "ActionNotFree",
            Error::Not2IsotropyFree { .. } => "Not2IsotropyFree",
            Error::WellDefinednessFailure(_) => "WellDefinednessFailure",
            Error::Internal(_) => "Internal",
        }
    }
}
