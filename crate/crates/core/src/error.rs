use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank {0} is outside the supported range 2..={max}", max = crate::MAX_RANK)]
    InvalidRank(usize),

    #[error("letter {letter} is outside [1, {rank}]")]
    MalformedLetter { letter: usize, rank: usize },

    #[error("could not parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("power exponent must be at least 1")]
    ZeroExponent,

    #[error("matrix size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("matrix contains the forbidden 2x2 pattern [[0,1],[1,0]] and is not an endomorphism")]
    InvalidEndomorphism,

    #[error("radius {radius} exceeds rank {rank}")]
    InvalidRadius { radius: usize, rank: usize },

    #[error("universe of rank {0} is not a complete enumeration")]
    IncompleteUniverse(usize),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("congruence closure is not stable between slack {slack} and {next}", next = slack + 1)]
    UnstableOracle { slack: usize },

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("generator {0} has zero probability; the hitting time is not almost surely finite")]
    ZeroProbability(usize),

    #[error("sequence precondition violated: {0}")]
    Precondition(String),

    #[error("trial {trial} exceeded the step budget of {budget}")]
    StepBudgetExceeded { trial: u64, budget: u64 },

    #[error("report and distribution disagree: {0}")]
    ReportMismatch(String),

    #[error("insufficient data for binning: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
