use thiserror::Error;

use crate::feasibility::Rejection;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("task rejected: {0}")]
    Rejected(Rejection),

    #[error("transformation is infeasible")]
    Infeasible,

    #[error("{requested} qubits exceeds the dense-vector ceiling of {ceiling}")]
    Resource { requested: usize, ceiling: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The access-count clauses and Schmidt-support inclusion disagree on a task.
    #[error("feasibility criteria disagree (necessary conditions: {necessary}, support inclusion: {support})")]
    Consistency { necessary: bool, support: bool },
}

impl From<Rejection> for Error {
    fn from(r: Rejection) -> Self {
        Error::Rejected(r)
    }
}
