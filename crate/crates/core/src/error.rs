use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("no nonsingular Weierstrass curve found over F_{prime} after {attempts} attempts")]
    CurveNotFound { prime: u32, attempts: usize },

    #[error("requested {requested} points but only {available} usable points exist")]
    NotEnoughPoints { requested: usize, available: usize },

    #[error("sample too small: need more than {needed} free points, have {have}")]
    SampleTooSmall { needed: usize, have: usize },

    #[error("graded piece of degree {0} is missing from the Koszul instance")]
    MissingPiece(usize),

    #[error("instance out of range: {0}")]
    InstanceOutOfRange(String),

    #[error("subsheaf {0} has no recorded data")]
    MissingSubsheaf(usize),

    #[error("compute budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("degeneration plan infeasible: {0}")]
    Infeasible(String),

    #[error("malformed document: {0}")]
    Decode(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
