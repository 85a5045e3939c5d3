use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum BoostError {
    #[error("structural error: {0}")]
    Structure(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("normalized margin undefined: ensemble weights sum to zero")]
    UndefinedMargin,

    #[error("all example weights are zero")]
    DegenerateWeights,

    #[error("potential undefined at t = {t}: sigma^2 = {sigma_sq} <= 0")]
    InvalidTime { t: f64, sigma_sq: f64 },

    #[error("AUC undefined: dataset contains a single class")]
    UndefinedAuc,

    #[error("cosine undefined: zero vector")]
    UndefinedCosine,

    #[error("degenerate t-test: {0}")]
    DegenerateTest(&'static str),

    #[error("{path}: row {row}: {msg}")]
    Ingestion { path: PathBuf, row: usize, msg: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, BoostError>;
