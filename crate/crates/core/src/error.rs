use thiserror::Error;

/// Failures shared by every module of the lab.
///
/// The variants split into validation problems (bad input, outside a domain)
/// and numerical problems (a computation that could not be completed).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular radius: |z| = {r:e} below floor {floor:e}")]
    SingularRadius { r: f64, floor: f64 },
    #[error("angle lift failed at node {node}: jump {jump:.3} rad")]
    LiftFailure { node: usize, jump: f64 },
    #[error("singular endpoint: {0}")]
    SingularEndpoint(String),
    #[error("no fit: {0}")]
    NoFit(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by invalid input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::SingularEndpoint(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
