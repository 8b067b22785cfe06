use std::fmt;

use trendskew::market_data::DataError;
use trendskew::options_lab::OptionsError;
use trendskew::stats::StatsError;
use trendskew::trend_engine::TrendError;

/// A configuration problem, anchored to a line of the config file when one can be found.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub file: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: {}", self.file, line, self.message),
            None => write!(f, "{}: {}", self.file, self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(ConfigError),
    #[error("data error: {0}")]
    Data(String),
    #[error("numerical degeneracy: {0}")]
    Numerical(String),
}

impl CliError {
    /// 2 config/validation, 3 data, 4 numerical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Data(_) => 3,
            Self::Numerical(_) => 4,
        }
    }

    pub fn data(e: impl fmt::Display) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::ZeroVariance | StatsError::DegenerateRegressor => Self::Numerical(e.to_string()),
            StatsError::TooFewObservations { .. } | StatsError::NonFinite(_) => Self::Data(e.to_string()),
        }
    }
}

impl From<TrendError> for CliError {
    fn from(e: TrendError) -> Self {
        match e {
            TrendError::ZeroVarianceAggregate => Self::Numerical(e.to_string()),
            _ => Self::Data(e.to_string()),
        }
    }
}

impl From<OptionsError> for CliError {
    fn from(e: OptionsError) -> Self {
        match e {
            OptionsError::Stats(s) => s.into(),
            OptionsError::Data(d) => d.into(),
            other => Self::Data(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Data(e.to_string())
    }
}
