use thiserror::Error;

use crate::drag::IntervalValue;

/// Errors raised by the library. Parse failures carry a 1-based line and
/// column into the offending literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative value {0} is not an extended non-negative rational")]
    Negative(String),
    #[error("interval lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvertedInterval { lo: String, hi: String },
    #[error("empty chain")]
    EmptyChain,
    #[error("sequence is not ascending at index {index}")]
    NotAChain { index: usize },

    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("point `{0}` is not in the space")]
    PointNotInSpace(String),
    #[error("map is not monotone: {0}")]
    NotMonotone(String),
    #[error("map is not antitone: {0}")]
    NotAntitone(String),
    #[error("map is not total: missing value for `{0}`")]
    NotTotal(String),
    #[error("set is not upward closed: {0}")]
    NotUpperSet(String),
    #[error("support must contain at least one mass point")]
    EmptySupport,
    #[error("operands live on different spaces")]
    SpaceMismatch,

    #[error("an elementary valuation needs at least one term")]
    NoTerms,

    #[error("measure is zero")]
    ZeroMeasure,
    #[error("measure has infinite total mass")]
    UnboundedMeasure,

    #[error("piece {piece}: {reason}")]
    NonEvaluablePiece { piece: usize, reason: String },
    #[error("malformed piecewise function: {0}")]
    BadPiecewise(String),
    #[error("{0} is not a dyadic rational")]
    NotDyadic(String),
    #[error("{0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("refinement depth {requested} exceeds cap {cap}")]
    DepthCapExceeded {
        requested: u32,
        cap: u32,
        /// Best enclosure reached before giving up, with its depth.
        best: Option<(IntervalValue, u32)>,
    },
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
