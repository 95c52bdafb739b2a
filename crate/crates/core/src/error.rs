use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no group of order {p}*{q}: {q} is not 1 mod {p}")]
    NoSuchGroup { p: u64, q: u64 },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A multiplication table failed one of the group invariants.
    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("group is not nilpotent")]
    NotNilpotent,

    #[error("invalid extension: {0}")]
    InvalidExtension(String),

    /// A theorem-backed consistency check failed; always a bug or a corrupted table.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
