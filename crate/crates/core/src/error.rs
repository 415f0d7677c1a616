use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series too short: need {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("invalid duration: {0}")]
    InvalidDuration(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("zero variance in correlation input")]
    ZeroVariance,
    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    #[error("no histogram nodes strictly inside (0, {bound})")]
    NoNodesInRange { bound: f64 },
    #[error("incomplete surface: cell ({row}, {col}) is missing")]
    IncompleteSurface { row: usize, col: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty sample")]
    EmptySample,
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("row {row}: tick {tick} is missing")]
    GapDetected { row: usize, tick: i64 },
    #[error("row {row}: time does not increase")]
    NonMonotonicTime { row: usize },
    #[error("row {row}, column {col}: {message}")]
    Parse { row: usize, col: usize, message: String },
    #[error("row {row}: value is not finite")]
    NonFiniteValue { row: usize },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("statistic {stat}: {source}")]
    Statistic {
        stat: String,
        #[source]
        source: Box<Error>,
    },
    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::InvalidDuration(_) => "InvalidDuration",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ZeroVariance => "ZeroVariance",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::DegenerateSamples(_) => "DegenerateSamples",
            Error::NoNodesInRange { .. } => "NoNodesInRange",
            Error::IncompleteSurface { .. } => "IncompleteSurface",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::EmptySample => "EmptySample",
            Error::InvalidSeries(_) => "InvalidSeries",
            Error::GapDetected { .. } => "GapDetected",
            Error::NonMonotonicTime { .. } => "NonMonotonicTime",
            Error::Parse { .. } => "ParseError",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::Config(_) => "ConfigError",
            Error::Io { .. } => "IoError",
            Error::Run { source, .. } | Error::Statistic { source, .. } => source.kind(),
        }
    }
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
