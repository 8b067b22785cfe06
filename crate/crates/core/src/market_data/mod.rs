//! Price series: validation, CSV ingestion and synthetic generation.

mod csv_io;
mod generators;

use chrono::{Days, NaiveDate};
use thiserror::Error;

pub use csv_io::{infer_periods_per_year, load_csv, read_csv, write_csv};
pub use generators::{gen_gbm, gen_jump_diffusion, gen_trendy, GbmParams, JumpParams, TrendyParams};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot open {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: expected header `date,price`, found `{found}`")]
    BadHeader { line: usize, found: String },
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("line {line}: date {date} does not come after the previous row")]
    NonIncreasingDates { line: usize, date: NaiveDate },
    #[error("line {line}: price {price} is not positive")]
    NonPositivePrice { line: usize, price: f64 },
    #[error("series has no rows")]
    Empty,
    #[error("invalid series: {0}")]
    Invalid(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// Dated price levels for one contract.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    contract_id: String,
    dates: Vec<NaiveDate>,
    prices: Vec<f64>,
    periods_per_year: u32,
}

impl PriceSeries {
    pub fn new(
        contract_id: impl Into<String>,
        dates: Vec<NaiveDate>,
        prices: Vec<f64>,
        periods_per_year: u32,
    ) -> Result<Self, DataError> {
        if dates.is_empty() {
            return Err(DataError::Empty);
        }
        if dates.len() != prices.len() {
            return Err(DataError::Invalid(format!("{} dates but {} prices", dates.len(), prices.len())));
        }
        if periods_per_year == 0 {
            return Err(DataError::Invalid("periods_per_year must be positive".into()));
        }
        // Row numbers in errors are 1-based data rows; the CSV loader reports file lines itself.
        if let Some(i) = dates.windows(2).position(|w| w[1] <= w[0]) {
            return Err(DataError::NonIncreasingDates { line: i + 2, date: dates[i + 1] });
        }
        if let Some(i) = prices.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(DataError::NonPositivePrice { line: i + 1, price: prices[i] });
        }
        Ok(Self { contract_id: contract_id.into(), dates, prices, periods_per_year })
    }

    pub fn contract_id(&self) -> &str {
        &self.contract_id
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn periods_per_year(&self) -> u32 {
        self.periods_per_year
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn with_contract_id(mut self, id: impl Into<String>) -> Self {
        self.contract_id = id.into();
        self
    }

    /// Multiplies every price by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<Self, DataError> {
        Self::new(
            self.contract_id.clone(),
            self.dates.clone(),
            self.prices.iter().map(|p| p * factor).collect(),
            self.periods_per_year,
        )
    }

    /// The first `n` observations.
    pub fn truncated(&self, n: usize) -> Result<Self, DataError> {
        let n = n.min(self.len());
        Self::new(self.contract_id.clone(), self.dates[..n].to_vec(), self.prices[..n].to_vec(), self.periods_per_year)
    }
}

/// First date of every synthetic calendar.
pub const SYNTHETIC_START: NaiveDate = match NaiveDate::from_ymd_opt(1900, 1, 1) {
    Some(d) => d,
    None => panic!("invalid synthetic start date"),
};

/// Calendar-day spacing used for a synthetic series sampled `periods_per_year` times a year.
pub fn synthetic_step_days(periods_per_year: u32) -> u64 {
    match periods_per_year {
        p if p >= 250 => 1,
        52 => 7,
        12 => 30,
        p => ((365.25 / f64::from(p.max(1))).round() as u64).max(1),
    }
}

/// `n` equally spaced dates starting at [`SYNTHETIC_START`].
pub fn synthetic_calendar(n: usize, periods_per_year: u32) -> Vec<NaiveDate> {
    let step = synthetic_step_days(periods_per_year);
    (0..n as u64).map(|i| SYNTHETIC_START.checked_add_days(Days::new(i * step)).expect("synthetic calendar overflow")).collect()
}
