use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid diagram: {0}")]
    Invalid(String),

    #[error("state enumeration cap exceeded: {n} crossings > cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("diagram is not checkerboard colorable")]
    NotCheckerboard,

    #[error("darts do not lie on a common face")]
    NotCofacial,

    #[error("arc/crossing matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("zero polynomial has no degree")]
    ZeroPolynomial,

    #[error("inexact polynomial division")]
    InexactDivision,

    #[error("edge set is not a cycle")]
    NotACycle,

    #[error("quarter-grading violates the half-integer invariant (t-exponent {0}/4)")]
    QuarterParity(i64),

    #[error("unknown link name: {0}")]
    UnknownLink(String),

    #[error("unknown verification suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
