use thiserror::Error;

/// Errors produced by the evaluation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("label {label} is not binary (expected 0 or 1)")]
    NonBinaryLabel { label: i64 },

    #[error("score {score} is not finite")]
    NonFiniteScore { score: f64 },

    #[error("degenerate classes: {n1} class-1 and {n0} class-0 subjects")]
    DegenerateClass { n1: u64, n0: u64 },

    #[error("invalid partition table: {0}")]
    InvalidTable(String),

    #[error("prevalence {pi} is outside (0, 1)")]
    InvalidPrevalence { pi: f64 },

    #[error("momentum estimate undefined: AUC is exactly 1/2")]
    RandomDenominator,

    #[error("correlation {rho} is outside [-1, 1]")]
    InvalidCorrelation { rho: f64 },

    #[error("standard error {se} is negative or not finite")]
    InvalidStandardError { se: f64 },

    #[error("invalid multinomial fit: {0}")]
    InvalidFit(String),

    #[error("bootstrap needs at least 2 replicates, got {replicates}")]
    TooFewReplicates { replicates: usize },

    #[error("could not draw a replicate with both classes after {attempts} attempts")]
    DegenerateReplicate { attempts: usize },

    #[error("model constraint violated: {0}")]
    ModelConstraint(String),

    #[error("t = {t} is outside [0, 1]")]
    DomainError { t: f64 },

    #[error("models have different prevalence ({left} vs {right})")]
    PrevalenceMismatch { left: f64, right: f64 },

    #[error("degenerate scenario: {0}")]
    DegenerateScenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
