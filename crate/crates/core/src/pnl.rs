use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PnlError {
    #[error("pnl has {values} increments but {dates} dates")]
    LengthMismatch { dates: usize, values: usize },
    #[error("non-finite pnl increment at index {0}")]
    NonFinite(usize),
    #[error("periods_per_year must be positive")]
    ZeroFrequency,
}

/// Dated strategy profit-and-loss increments in risk units.
#[derive(Debug, Clone, PartialEq)]
pub struct PnlSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
    periods_per_year: u32,
}

impl PnlSeries {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>, periods_per_year: u32) -> Result<Self, PnlError> {
        if dates.len() != values.len() {
            return Err(PnlError::LengthMismatch { dates: dates.len(), values: values.len() });
        }
        if periods_per_year == 0 {
            return Err(PnlError::ZeroFrequency);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(PnlError::NonFinite(i));
        }
        Ok(Self { dates, values, periods_per_year })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn periods_per_year(&self) -> u32 {
        self.periods_per_year
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Running sum of the increments.
    pub fn cumulative(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    /// Drops the first `n` increments.
    pub fn skip(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self { dates: self.dates[n..].to_vec(), values: self.values[n..].to_vec(), periods_per_year: self.periods_per_year }
    }

    /// Same dates and frequency, increments replaced by `f(x)`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self, PnlError> {
        Self::new(self.dates.clone(), self.values.iter().map(|v| f(*v)).collect(), self.periods_per_year)
    }

    /// Writes `date,pnl,cum_pnl` rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["date", "pnl", "cum_pnl"])?;
        for ((d, v), c) in self.dates.iter().zip(&self.values).zip(self.cumulative()) {
            w.write_record([d.format("%Y-%m-%d").to_string(), v.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
