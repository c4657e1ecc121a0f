use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("element id {0} is outside the universe")]
    InvalidElement(usize),
    #[error("universes differ ({left} vs {right} elements)")]
    UniverseMismatch { left: usize, right: usize },
    #[error("relation is not up-directed: U_R({a}, {b}) is empty")]
    NotUpDirected { a: String, b: String },
    #[error("universe of {size} elements exceeds the exhaustive cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("set {0} is not closed under up-directedness")]
    NotCud(String),
    #[error("no CUD superset of {0} exists")]
    NoCudSuperset(String),
    #[error("pseudo-join set of ({a}, {b}) is empty")]
    EmptyPseudoJoins { a: String, b: String },
    #[error("cell ({a}, {b}) = {value} violates the groupoid construction rule")]
    InvalidChoice { a: String, b: String, value: String },
    #[error("choice is not a function of the upper-bound set: ({a}, {b}) and ({c}, {d}) share U_R but differ")]
    PiConstraint { a: String, b: String, c: String, d: String },
    #[error("map is not total on the source universe")]
    PartialMap,
    #[error("unknown law id `{0}`")]
    UnknownLaw(String),
    #[error("invalid ACP element: {0}")]
    InvalidAcpElement(String),
    #[error("groupoid is inconsistent with the relational system at ({a}, {b})")]
    InconsistentGroupoid { a: String, b: String },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("parse error at row {row}, column `{column}`: {message}")]
    Cell {
        row: usize,
        column: String,
        message: String,
    },
    #[error("tuple for cluster {0} does not reproduce from its underlying set")]
    TupleNotReproducible(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
        Error::Parse {
            line,
            message: e.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
