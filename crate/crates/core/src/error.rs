use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("root bracketing failed: {0}")]
    Bracket(String),
    #[error("singular closure: {0}")]
    SingularClosure(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("solver error: {0}")]
    Solver(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("stagnation: {0}")]
    Stagnation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
