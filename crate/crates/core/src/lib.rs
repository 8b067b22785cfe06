//! Backtesting and strategy statistics for trend-following and short-volatility
//! risk-premium strategies.
//!
//! The crate is organised around two experiments:
//!
//! * a volatility-targeted trend-following portfolio ([`trend_engine`]) run on
//!   loaded or synthetic price series ([`market_data`]);
//! * short, delta-hedged, strike-uniform option strangles ([`options_lab`])
//!   whose Sharpe ratio and skewness ([`stats`]) are regressed against each
//!   other as `SR = a - b * skew`.
//!
//! Every strategy produces a [`PnlSeries`] of per-period increments in risk
//! units; every statistic consumes one.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod market_data;
pub mod options_lab;
pub mod pnl;
pub mod rng;
pub mod stats;
pub mod trend_engine;

pub use market_data::{DataError, GbmParams, JumpParams, PriceSeries, TrendyParams};
pub use options_lab::{HedgedPnl, MarketModel, OptionKind, OptionQuote, OptionsError, StrangleSpec};
pub use pnl::PnlSeries;
pub use stats::{RegressionFit, SkewEstimator, StatsError, StrategyStats};
pub use trend_engine::{SignalClip, SignalSeries, TrendConfig, TrendError};
