//! Volatility-targeted trend following.
//!
//! The signal is the sign of the previous close against its own
//! exponential moving average with a five-month half-life. Positions are
//! sized by an exponentially weighted estimate of price-change volatility so
//! every contract runs at the same ex-ante risk, and contracts are summed into
//! a portfolio that can be rescaled to unit realized volatility.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market_data::PriceSeries;
use crate::pnl::{PnlError, PnlSeries};

#[derive(Debug, Error, PartialEq)]
pub enum TrendError {
    #[error("input series is empty")]
    EmptyInput,
    #[error("series has {len} periods, needs more than {needed}")]
    SeriesTooShort { len: usize, needed: usize },
    #[error("invalid trend config: {0}")]
    InvalidConfig(String),
    #[error("invalid halflife {0}")]
    InvalidHalflife(f64),
    #[error("no pnl series to aggregate")]
    NothingToAggregate,
    #[error("series frequencies differ ({0} vs {1} periods per year)")]
    MixedFrequency(u32, u32),
    #[error("aggregate pnl has zero variance; cannot renormalize")]
    ZeroVarianceAggregate,
    #[error(transparent)]
    Pnl(#[from] PnlError),
}

/// How the raw trend deviation is turned into a signal in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalClip {
    #[default]
    Sign,
    /// `raw / (2 sigma)` clipped to `[-1, 1]`.
    LinearClipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrendConfig {
    pub signal_timescale_months: f64,
    pub vol_halflife_periods: u32,
    pub target_vol_annual: f64,
    pub warmup_periods: usize,
    pub signal_clip: SignalClip,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self {
            signal_timescale_months: 5.0,
            vol_halflife_periods: 21,
            target_vol_annual: 1.0,
            warmup_periods: 126,
            signal_clip: SignalClip::Sign,
        }
    }
}

impl TrendConfig {
    pub fn validate(&self) -> Result<(), TrendError> {
        if !(self.signal_timescale_months.is_finite() && self.signal_timescale_months > 0.0) {
            return Err(TrendError::InvalidConfig("signal_timescale_months must be > 0".into()));
        }
        if self.vol_halflife_periods < 2 {
            return Err(TrendError::InvalidConfig("vol_halflife_periods must be >= 2".into()));
        }
        if !(self.target_vol_annual.is_finite() && self.target_vol_annual > 0.0) {
            return Err(TrendError::InvalidConfig("target_vol_annual must be > 0".into()));
        }
        Ok(())
    }

    /// Signal half-life in periods: months converted at `periods_per_year / 12`, rounded.
    pub fn signal_halflife_periods(&self, periods_per_year: u32) -> f64 {
        (self.signal_timescale_months * f64::from(periods_per_year) / 12.0).round().max(1.0)
    }
}

/// Trend signal aligned with its price series.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalSeries {
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

/// Slope factor of the linear-clipped signal.
const LINEAR_SIGNAL_KAPPA: f64 = 2.0;
/// Volatility floor relative to the last observed price.
const VOL_FLOOR_RELATIVE: f64 = 1e-12;

/// Exponential moving average, `out[t] = l out[t-1] + (1 - l) x[t]` with `l = 2^(-1/halflife)`,
/// seeded with the first observation.
pub fn ema(series: &[f64], halflife_periods: f64) -> Result<Vec<f64>, TrendError> {
    if !(halflife_periods.is_finite() && halflife_periods > 0.0) {
        return Err(TrendError::InvalidHalflife(halflife_periods));
    }
    let (&first, rest) = series.split_first().ok_or(TrendError::EmptyInput)?;
    let lambda = 0.5f64.powf(1.0 / halflife_periods);
    let mut out = Vec::with_capacity(series.len());
    out.push(first);
    let mut acc = first;
    for x in rest {
        acc = lambda * acc + (1.0 - lambda) * x;
        out.push(acc);
    }
    Ok(out)
}

/// Causal price-change volatility: `sigma[t]` uses differences up to `t - 1` only.
///
/// The estimate is floored at `1e-12` times the last observed price `p[t - 1]`;
/// periods with no observed difference yet (`t < 2`) sit on the floor.
pub fn vol_estimate(prices: &PriceSeries, halflife_periods: u32) -> Result<Vec<f64>, TrendError> {
    let p = prices.prices();
    if p.len() < 2 {
        return Err(TrendError::SeriesTooShort { len: p.len(), needed: 1 });
    }
    let floor = |t: usize| VOL_FLOOR_RELATIVE * p[t.saturating_sub(1)];
    let sq_diffs: Vec<f64> = p.windows(2).map(|w| (w[1] - w[0]).powi(2)).collect();
    let var = ema(&sq_diffs, f64::from(halflife_periods))?;
    // var[k] covers differences 1..=k+1, i.e. information up to price index k+1.
    Ok((0..p.len()).map(|t| if t < 2 { floor(t) } else { var[t - 2].sqrt().max(floor(t)) }).collect())
}

fn sign_with_zero(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Five-month (by default) trend signal. `signal[t]` uses prices up to `t - 1`.
pub fn trend_signal(prices: &PriceSeries, cfg: &TrendConfig) -> Result<SignalSeries, TrendError> {
    cfg.validate()?;
    let p = prices.prices();
    if p.len() <= cfg.warmup_periods {
        return Err(TrendError::SeriesTooShort { len: p.len(), needed: cfg.warmup_periods });
    }
    let trend = ema(p, cfg.signal_halflife_periods(prices.periods_per_year()))?;
    let sigma = match cfg.signal_clip {
        SignalClip::LinearClipped if p.len() >= 2 => Some(vol_estimate(prices, cfg.vol_halflife_periods)?),
        _ => None,
    };
    let values = (0..p.len())
        .map(|t| {
            if t == 0 || t < cfg.warmup_periods {
                return 0.0;
            }
            let raw = p[t - 1] - trend[t - 1];
            match (&sigma, cfg.signal_clip) {
                (Some(s), SignalClip::LinearClipped) => (raw / (LINEAR_SIGNAL_KAPPA * s[t])).clamp(-1.0, 1.0),
                _ => sign_with_zero(raw),
            }
        })
        .collect();
    Ok(SignalSeries { dates: prices.dates().to_vec(), values })
}

/// Volatility-targeted positions, `signal[t] * target_per_period / sigma[t]`.
pub fn positions(prices: &PriceSeries, cfg: &TrendConfig) -> Result<Vec<f64>, TrendError> {
    let signal = trend_signal(prices, cfg)?;
    if prices.len() < 2 {
        return Ok(vec![0.0; prices.len()]);
    }
    let sigma = vol_estimate(prices, cfg.vol_halflife_periods)?;
    let target = cfg.target_vol_annual / f64::from(prices.periods_per_year()).sqrt();
    Ok(signal.values.iter().zip(&sigma).map(|(s, v)| if *s == 0.0 { 0.0 } else { s * target / v }).collect())
}

/// Per-contract P&L: `position[t] * (p[t] - p[t-1])`, zero during warmup.
pub fn contract_pnl(prices: &PriceSeries, cfg: &TrendConfig) -> Result<PnlSeries, TrendError> {
    let pos = positions(prices, cfg)?;
    let p = prices.prices();
    let pnl = (0..p.len()).map(|t| if t == 0 { 0.0 } else { pos[t] * (p[t] - p[t - 1]) }).collect();
    Ok(PnlSeries::new(prices.dates().to_vec(), pnl, prices.periods_per_year())?)
}

/// Sums P&L streams on the union of their calendars; a series contributes
/// zero on dates it lacks. With `renormalize`, the sum is rescaled by its
/// full-sample standard deviation to exactly unit annualized volatility.
pub fn aggregate(pnls: &[PnlSeries], renormalize: bool) -> Result<PnlSeries, TrendError> {
    let first = pnls.first().ok_or(TrendError::NothingToAggregate)?;
    let ppy = first.periods_per_year();
    if let Some(other) = pnls.iter().find(|s| s.periods_per_year() != ppy) {
        return Err(TrendError::MixedFrequency(ppy, other.periods_per_year()));
    }
    let mut calendar: BTreeMap<NaiveDate, f64> = BTreeMap::new();
    for series in pnls {
        for (d, v) in series.dates().iter().zip(series.values()) {
            *calendar.entry(*d).or_insert(0.0) += v;
        }
    }
    let (dates, mut values): (Vec<NaiveDate>, Vec<f64>) = calendar.into_iter().unzip();
    if renormalize {
        let sd = sample_std(&values);
        if !(sd > 0.0) {
            return Err(TrendError::ZeroVarianceAggregate);
        }
        let k = 1.0 / (sd * f64::from(ppy).sqrt());
        values.iter_mut().for_each(|v| *v *= k);
    }
    Ok(PnlSeries::new(dates, values, ppy)?)
}

fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
