//! Strategy statistics: annualized Sharpe ratio, skewness estimators,
//! drawdown, and the pooled Sharpe-versus-skewness regression.

mod ols;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pnl::PnlSeries;

pub use ols::{fit_sr_vs_skew, RegressionFit};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("sample has zero variance")]
    ZeroVariance,
    #[error("all skewness values are equal; the regression line is vertical")]
    DegenerateRegressor,
    #[error("non-finite input at index {0}")]
    NonFinite(usize),
}

/// Which estimator fills the low-moment skewness slot of [`StrategyStats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkewEstimator {
    /// `3 (mean - median) / std`.
    #[default]
    Pearson,
    /// L-skewness `lambda_3 / lambda_2`.
    LMoment,
    /// Bias-corrected standardized third central moment.
    ThirdMoment,
}

impl std::str::FromStr for SkewEstimator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pearson" => Ok(Self::Pearson),
            "l-moment" => Ok(Self::LMoment),
            "third-moment" => Ok(Self::ThirdMoment),
            other => Err(format!("unknown skew estimator `{other}` (pearson|l-moment|third-moment)")),
        }
    }
}

/// Summary statistics of one P&L stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyStats {
    pub sharpe_annual: f64,
    pub vol_annual: f64,
    #[serde(rename = "skew_low")]
    pub skew_low_moment: f64,
    #[serde(rename = "skew_third")]
    pub skew_third_moment: f64,
    #[serde(rename = "max_dd")]
    pub max_drawdown: f64,
    pub n_periods: usize,
}

fn check(xs: &[f64], needed: usize) -> Result<(), StatsError> {
    if xs.len() < needed {
        return Err(StatsError::TooFewObservations { needed, got: xs.len() });
    }
    if let Some(i) = xs.iter().position(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite(i));
    }
    // Exact check: rounding in a two-pass variance can leave a tiny positive
    // value for a constant sample.
    if xs.iter().all(|x| *x == xs[0]) {
        return Err(StatsError::ZeroVariance);
    }
    Ok(())
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased (n - 1) sample standard deviation, two-pass.
pub fn sample_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt()
}

/// Median with the midpoint convention for even lengths.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `(mean / std) * sqrt(periods_per_year)` of the per-period increments. No risk-free rate.
pub fn sharpe_annualized(pnl: &PnlSeries) -> Result<f64, StatsError> {
    let xs = pnl.values();
    check(xs, 2)?;
    Ok(mean(xs) / sample_std(xs) * f64::from(pnl.periods_per_year()).sqrt())
}

/// `n^2 / ((n-1)(n-2)) * m3 / s^3` with `m3` the (1/n) third central moment
/// and `s` the (n-1) standard deviation.
pub fn skew_third_moment(xs: &[f64]) -> Result<f64, StatsError> {
    check(xs, 3)?;
    let n = xs.len() as f64;
    let m = mean(xs);
    let s = sample_std(xs);
    let m3 = xs.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n;
    Ok(n * n / ((n - 1.0) * (n - 2.0)) * m3 / s.powi(3))
}

/// Pearson median skewness `3 (mean - median) / s`.
pub fn skew_pearson_median(xs: &[f64]) -> Result<f64, StatsError> {
    check(xs, 3)?;
    Ok(3.0 * (mean(xs) - median(xs)) / sample_std(xs))
}

/// L-skewness `tau_3 = lambda_3 / lambda_2` from unbiased probability-weighted moments.
pub fn skew_l_moment(xs: &[f64]) -> Result<f64, StatsError> {
    check(xs, 3)?;
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let (mut b0, mut b1, mut b2) = (0.0, 0.0, 0.0);
    for (i, x) in v.iter().enumerate() {
        let i = i as f64;
        b0 += x;
        b1 += x * i / (n - 1.0);
        b2 += x * i * (i - 1.0) / ((n - 1.0) * (n - 2.0));
    }
    b0 /= n;
    b1 /= n;
    b2 /= n;
    let l2 = 2.0 * b1 - b0;
    let l3 = 6.0 * b2 - 6.0 * b1 + b0;
    if l2 <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok(l3 / l2)
}

/// Low-moment skewness with the chosen estimator.
pub fn skew_low_moment(xs: &[f64], estimator: SkewEstimator) -> Result<f64, StatsError> {
    match estimator {
        SkewEstimator::Pearson => skew_pearson_median(xs),
        SkewEstimator::LMoment => skew_l_moment(xs),
        SkewEstimator::ThirdMoment => skew_third_moment(xs),
    }
}

/// Largest peak-to-trough fall of the cumulative P&L, starting from zero.
pub fn max_drawdown(xs: &[f64]) -> f64 {
    let mut cum = 0.0f64;
    let mut peak = 0.0f64;
    let mut worst = 0.0f64;
    for x in xs {
        cum += x;
        peak = peak.max(cum);
        worst = worst.max(peak - cum);
    }
    worst
}

pub fn stats_of(pnl: &PnlSeries, skew_estimator: SkewEstimator) -> Result<StrategyStats, StatsError> {
    let xs = pnl.values();
    check(xs, 3)?;
    let ppy = f64::from(pnl.periods_per_year());
    Ok(StrategyStats {
        sharpe_annual: sharpe_annualized(pnl)?,
        vol_annual: sample_std(xs) * ppy.sqrt(),
        skew_low_moment: skew_low_moment(xs, skew_estimator)?,
        skew_third_moment: skew_third_moment(xs)?,
        max_drawdown: max_drawdown(xs),
        n_periods: xs.len(),
    })
}
