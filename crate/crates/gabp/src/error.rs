use std::path::PathBuf;

use chrono::NaiveDate;
use gabp_core::evolve::EvolveError;
use gabp_core::features::FeatureError;
use gabp_core::ingest::IngestError;
use gabp_core::metrics::MetricsError;
use gabp_core::network::NetworkError;
use gabp_core::stats::StatsError;
use gabp_core::synth::SynthError;
use thiserror::Error;

/// Exit code for bad input: files, schemas, configuration.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for numeric failure: divergence, singular or degenerate series.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io: {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("ingest: line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("ingest: line {line}: duplicate date {date}")]
    DuplicateDate { line: u64, date: NaiveDate },
    #[error("ingest: line {line}: date {date} precedes the previous row")]
    NonMonotonicDate { line: u64, date: NaiveDate },
    #[error("schema: {0}")]
    SchemaMismatch(String),
    #[error("ingest: {0}")]
    Ingest(#[from] IngestError),
    #[error("features: {0}")]
    Features(#[from] FeatureError),
    #[error("stats: {0}")]
    Stats(#[from] StatsError),
    #[error("network: {0}")]
    Network(#[from] NetworkError),
    #[error("evolve: {0}")]
    Evolve(#[from] EvolveError),
    #[error("metrics: {0}")]
    Metrics(#[from] MetricsError),
    #[error("synth: {0}")]
    Synth(#[from] SynthError),
    #[error("config: {0}")]
    Config(String),
    #[error("model: {0}")]
    ModelParse(String),
    #[error("predict: no rows left after feature construction")]
    EmptyInput,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Network(NetworkError::InvalidShape(_) | NetworkError::InvalidBounds { .. }) => EXIT_INPUT,
            Error::Stats(_) | Error::Network(_) => EXIT_NUMERIC,
            Error::Evolve(
                EvolveError::InvalidConfig(_)
                | EvolveError::InvalidCoefficient(_)
                | EvolveError::Network(NetworkError::InvalidBounds { .. }),
            ) => EXIT_INPUT,
            Error::Evolve(_) => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
