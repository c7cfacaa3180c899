use thiserror::Error;

pub type Result<T> = std::result::Result<T, TbnError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TbnError {
    #[error("invalid site name {0:?}")]
    InvalidSite(String),

    #[error("monomer has no sites")]
    EmptyMonomer,

    #[error("polymer has no monomers")]
    EmptyPolymer,

    #[error("site {0:?} must be given in its unstarred form")]
    StarredSite(String),

    #[error(
        "TBN is not star-limiting: site {site:?} has {unstarred} unstarred and {starred} starred copies"
    )]
    NotStarLimiting { site: String, unstarred: u64, starred: u64 },

    #[error("monomer totals differ: {0}")]
    MonomerMismatch(String),

    #[error("{what} budget of {limit} exceeded")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("TBN is not feed-forward")]
    NotFeedForward,

    #[error("configuration is not saturated")]
    NotSaturated,

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("set of optimal configurations is incomplete")]
    IncompleteOptima,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

impl TbnError {
    pub fn is_budget(&self) -> bool {
        matches!(self, TbnError::BudgetExceeded { .. })
    }
}
