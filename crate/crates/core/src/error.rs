use thiserror::Error;

use crate::rational::Rational;

/// Every failure the library reports. Variants carry enough context to print
/// a useful message without access to the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cells do not tile the domain: {0}")]
    NotRegular(String),
    #[error("cells overlap: {0}")]
    Overlap(String),
    #[error("segment does not end on the mesh: {0}")]
    Dangling(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("no such cell: level {level}, index {index}")]
    NoSuchCell { level: usize, index: usize },
    #[error("cell already divided: level {level}, index {index}")]
    AlreadyDivided { level: usize, index: usize },
    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("l-edge has level {found}, expected at least 1")]
    WrongLevel { found: usize },
    #[error("unsupported division {0}")]
    UnsupportedDivision(String),
    #[error("duplicate coordinate {0} on one l-edge")]
    DuplicateCoordinate(Rational),
    #[error("degenerate distances: {0}")]
    DegenerateDistances(String),
    #[error("level-0 grid too coarse: need at least {needed} lines per axis, found {found_x}x{found_y}")]
    PreconditionTooCoarse {
        needed: usize,
        found_x: usize,
        found_y: usize,
    },
    #[error("N(t) >= 2 violated by {count} l-edge(s)")]
    NConditionViolated { count: usize },
    #[error("regime not covered: {0}")]
    RegimeNotCovered(String),
    #[error("unsupported smoothness: {0}")]
    UnsupportedSmoothness(String),
    #[error("system too large: {unknowns} unknowns exceeds limit {limit}")]
    TooLarge { unknowns: usize, limit: usize },
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
