use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in Q(sqrt 5)")]
    DivisionByZero,

    #[error("quaternion is not a unit (norm squared = {0})")]
    NotUnit(String),

    #[error("quaternion order exceeds cap of {0}")]
    OrderCapExceeded(u32),

    #[error("polytope has no facet centers")]
    NoCenters,

    #[error("inner product {0} is not one of the nine 120-cell layer values")]
    UnexpectedLayer(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("facets {0:?} do not form a clique")]
    NotAClique(Vec<usize>),

    #[error("invalid search task: {0}")]
    InvalidTask(String),

    #[error("coloring is orientable; the Z2^5 extension is degenerate")]
    OrientableExtension,

    #[error("coloring is non-orientable")]
    NonOrientable,

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
