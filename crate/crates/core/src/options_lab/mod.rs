//! Short, delta-hedged, strike-uniform option strangles on synthetic markets.
//!
//! A strategy sells a fresh strangle of fixed maturity every period, hedges
//! its delta in the underlying, and buys it back one period later. Options
//! are marked with a flat implied volatility equal to the market's expected
//! realized volatility times `1 + vol_premium`.

mod pricing;
mod strangle;

use rayon::prelude::*;
use thiserror::Error;

use crate::market_data::{gen_gbm, gen_jump_diffusion, synthetic_calendar, DataError, GbmParams, JumpParams, PriceSeries};
use crate::pnl::{PnlError, PnlSeries};
use crate::rng::{derive_indexed_seed, derive_seed};
use crate::stats::{self, SkewEstimator, StatsError, StrategyStats};

pub use pricing::{bs_delta, bs_price, bs_vega, OptionKind, OptionQuote};
pub use strangle::{build_strangle, short_strangle_path_pnl, strangle_delta, strangle_payoff, strangle_value, Hedging};

#[derive(Debug, Error)]
pub enum OptionsError {
    #[error("invalid option quote: {0}")]
    InvalidQuote(String),
    #[error("invalid strangle spec: {0}")]
    InvalidSpec(String),
    #[error("strike grid reaches a non-positive strike ({lowest})")]
    NonPositiveStrike { lowest: f64 },
    #[error("simulation size overflows: {n_paths} paths x {n_periods} periods")]
    SizeOverflow { n_paths: usize, n_periods: usize },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Pnl(#[from] PnlError),
}

/// Shortest and longest supported effective maturity, in years.
pub const MIN_TAU_YEARS: f64 = 1.0 / 12.0;
pub const MAX_TAU_YEARS: f64 = 1.0;
const TAU_SLACK: f64 = 1e-9;

/// The underlying's dynamics.
#[derive(Debug, Clone, PartialEq)]
pub enum MarketModel {
    Gbm(GbmParams),
    JumpDiffusion(JumpParams),
}

impl MarketModel {
    pub fn base(&self) -> &GbmParams {
        match self {
            Self::Gbm(p) => p,
            Self::JumpDiffusion(p) => &p.base,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut m = self.clone();
        match &mut m {
            Self::Gbm(p) => p.seed = seed,
            Self::JumpDiffusion(p) => p.base.seed = seed,
        }
        m
    }

    pub fn generate(&self) -> Result<PriceSeries, DataError> {
        match self {
            Self::Gbm(p) => gen_gbm(p),
            Self::JumpDiffusion(p) => gen_jump_diffusion(p),
        }
    }

    /// Expected annualized volatility of log returns, diffusion plus jumps.
    pub fn expected_vol_annual(&self) -> f64 {
        match self {
            Self::Gbm(p) => p.vol_annual,
            Self::JumpDiffusion(p) => (p.base.vol_annual.powi(2) + p.jump_variance_annual()).sqrt(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Gbm(_) => "gbm",
            Self::JumpDiffusion(_) => "jump",
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        match self {
            Self::Gbm(p) => p.validate(),
            Self::JumpDiffusion(p) => p.validate(),
        }
    }
}

/// A constant-maturity short strangle strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct StrangleSpec {
    /// Effective maturity, within `[1/12, 1]` years.
    pub tau_years: f64,
    /// Odd, at least 3.
    pub n_strikes: usize,
    /// Grid half-width in units of `vol * sqrt(tau)`.
    pub strike_width_sigmas: f64,
    pub hedge_every_periods: usize,
    /// Implied vol is `expected realized vol * (1 + vol_premium)`.
    pub vol_premium: f64,
    /// Path parameters; the `seed` inside is replaced per path.
    pub market: MarketModel,
}

impl StrangleSpec {
    pub(crate) fn validate_shape(&self) -> Result<(), OptionsError> {
        let bad = |m: String| Err(OptionsError::InvalidSpec(m));
        if !(self.tau_years.is_finite()
            && self.tau_years >= MIN_TAU_YEARS - TAU_SLACK
            && self.tau_years <= MAX_TAU_YEARS + TAU_SLACK)
        {
            return bad(format!("tau_years {} outside [1/12, 1]", self.tau_years));
        }
        if self.n_strikes < 3 || self.n_strikes.is_multiple_of(2) {
            return bad(format!("n_strikes {} must be odd and >= 3", self.n_strikes));
        }
        if !(self.strike_width_sigmas.is_finite() && self.strike_width_sigmas > 0.0) {
            return bad("strike_width_sigmas must be > 0".into());
        }
        if self.hedge_every_periods == 0 {
            return bad("hedge_every_periods must be >= 1".into());
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), OptionsError> {
        self.validate_shape()?;
        self.market.validate()?;
        if !(self.vol_premium.is_finite() && self.vol_premium > -1.0) {
            return Err(OptionsError::InvalidSpec(format!("vol_premium {} must be > -1", self.vol_premium)));
        }
        if !(self.implied_vol() > 0.0) {
            return Err(OptionsError::InvalidSpec("implied volatility must be positive".into()));
        }
        Ok(())
    }

    pub fn implied_vol(&self) -> f64 {
        self.market.expected_vol_annual() * (1.0 + self.vol_premium)
    }

    pub fn tau_months(&self) -> f64 {
        self.tau_years * 12.0
    }
}

/// Normalized P&L of one short-strangle strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct HedgedPnl {
    pub pnl: PnlSeries,
    pub spec: StrangleSpec,
    pub label: String,
}

fn format_months(tau_years: f64) -> String {
    let m = tau_years * 12.0;
    if (m - m.round()).abs() < 1e-9 {
        format!("{}", m.round() as i64)
    } else {
        format!("{m:.2}")
    }
}

/// Pooled, un-normalized P&L over `n_paths` independent paths, in path order.
pub fn simulate_short_strangle_raw(
    spec: &StrangleSpec,
    n_paths: usize,
    seed: u64,
    hedging: Hedging,
) -> Result<PnlSeries, OptionsError> {
    spec.validate()?;
    if n_paths == 0 {
        return Err(OptionsError::InvalidSpec("n_paths must be >= 1".into()));
    }
    let n_periods = spec.market.base().n_periods;
    let ppy = spec.market.base().periods_per_year;
    let per_path = n_periods.saturating_sub(1);
    let total = n_paths.checked_mul(per_path).ok_or(OptionsError::SizeOverflow { n_paths, n_periods })?;
    if per_path < 1 {
        return Err(OptionsError::InvalidSpec("market paths need at least 2 periods".into()));
    }
    let vol_implied = spec.implied_vol();
    let paths: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let path = spec.market.with_seed(derive_indexed_seed(seed, "path", i as u64)).generate()?;
            short_strangle_path_pnl(path.prices(), ppy, spec, vol_implied, hedging)
        })
        .collect::<Result<_, OptionsError>>()?;
    let mut values = Vec::with_capacity(total);
    for p in paths {
        values.extend(p);
    }
    Ok(PnlSeries::new(synthetic_calendar(total, ppy), values, ppy)?)
}

/// Short hedged strangle strategy, normalized to unit annualized volatility.
pub fn simulate_short_hedged(spec: &StrangleSpec, n_paths: usize, seed: u64) -> Result<HedgedPnl, OptionsError> {
    let raw = simulate_short_strangle_raw(spec, n_paths, seed, Hedging::Delta)?;
    Ok(HedgedPnl {
        pnl: constant_risk_normalize(&raw)?,
        spec: spec.clone(),
        label: format!("{}_{}m", spec.market.kind_name(), format_months(spec.tau_years)),
    })
}

/// Rescales increments so the full-sample annualized volatility is exactly 1.
pub fn constant_risk_normalize(pnl: &PnlSeries) -> Result<PnlSeries, OptionsError> {
    let xs = pnl.values();
    if xs.len() < 2 {
        return Err(StatsError::TooFewObservations { needed: 2, got: xs.len() }.into());
    }
    if xs.iter().all(|x| *x == xs[0]) {
        return Err(StatsError::ZeroVariance.into());
    }
    let k = 1.0 / (stats::sample_std(xs) * f64::from(pnl.periods_per_year()).sqrt());
    Ok(pnl.map_values(|v| v * k)?)
}

/// One scatter point of a maturity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: String,
    pub market: String,
    pub tau_years: f64,
    pub stats: StrategyStats,
}

/// Seed used for every maturity of one market in a sweep.
pub fn market_seed(seed: u64, market_label: &str) -> u64 {
    derive_seed(seed, market_label)
}

/// One strategy per `(market, tau)` pair, markets outermost. All maturities
/// of a market share its paths (seed [`market_seed`]).
pub fn sweep_maturities(
    base: &StrangleSpec,
    taus: &[f64],
    markets: &[(String, MarketModel)],
    n_paths: usize,
    seed: u64,
    skew_estimator: SkewEstimator,
) -> Result<Vec<SweepPoint>, OptionsError> {
    let jobs: Vec<(&String, &MarketModel, f64)> =
        markets.iter().flat_map(|(label, m)| taus.iter().map(move |tau| (label, m, *tau))).collect();
    jobs.into_par_iter()
        .map(|(label, market, tau)| {
            let spec = StrangleSpec { tau_years: tau, market: market.clone(), ..base.clone() };
            let hedged = simulate_short_hedged(&spec, n_paths, market_seed(seed, label))?;
            Ok(SweepPoint {
                label: format!("{label}_{}m", format_months(tau)),
                market: label.clone(),
                tau_years: tau,
                stats: stats::stats_of(&hedged.pnl, skew_estimator)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gbm(vol: f64, n: usize) -> GbmParams {
        GbmParams { drift_annual: 0.0, vol_annual: vol, s0: 100.0, n_periods: n, periods_per_year: 252, seed: 0 }
    }

    fn spec(tau: f64) -> StrangleSpec {
        StrangleSpec {
            tau_years: tau,
            n_strikes: 5,
            strike_width_sigmas: 2.0,
            hedge_every_periods: 1,
            vol_premium: 0.1,
            market: MarketModel::Gbm(gbm(0.2, 300)),
        }
    }

    #[test]
    fn tau_range_enforced() {
        assert!(spec(2.0).validate().is_err());
        assert!(spec(0.05).validate().is_err());
        assert!(spec(1.0 / 12.0).validate().is_ok());
        assert!(spec(1.0).validate().is_ok());
    }

    #[test]
    fn even_or_small_grids_rejected() {
        assert!(StrangleSpec { n_strikes: 4, ..spec(0.5) }.validate().is_err());
        assert!(StrangleSpec { n_strikes: 1, ..spec(0.5) }.validate().is_err());
        assert!(StrangleSpec { hedge_every_periods: 0, ..spec(0.5) }.validate().is_err());
    }

    #[test]
    fn zero_vol_market_needs_positive_implied() {
        let s = StrangleSpec { market: MarketModel::Gbm(gbm(0.0, 50)), ..spec(0.5) };
        assert!(matches!(s.validate(), Err(OptionsError::InvalidSpec(_))));
    }

    #[test]
    fn normalized_output_has_unit_vol() {
        let h = simulate_short_hedged(&spec(0.25), 3, 9).unwrap();
        let sd = stats::sample_std(h.pnl.values()) * 252f64.sqrt();
        assert!((sd - 1.0).abs() < 1e-10);
        assert_eq!(h.pnl.len(), 3 * 299);
        assert_eq!(h.label, "gbm_3m");
    }

    #[test]
    fn deterministic_under_seed() {
        let a = simulate_short_hedged(&spec(0.5), 4, 1).unwrap();
        let b = simulate_short_hedged(&spec(0.5), 4, 1).unwrap();
        assert_eq!(a, b);
        let c = simulate_short_hedged(&spec(0.5), 4, 2).unwrap();
        assert_ne!(a.pnl.values(), c.pnl.values());
    }

    #[test]
    fn constant_pnl_cannot_be_normalized() {
        let p = PnlSeries::new(synthetic_calendar(5, 252), vec![0.3; 5], 252).unwrap();
        assert!(matches!(constant_risk_normalize(&p), Err(OptionsError::Stats(StatsError::ZeroVariance))));
    }

    #[test]
    fn sweep_cardinality_and_labels() {
        let markets = vec![("a".to_string(), MarketModel::Gbm(gbm(0.2, 80))), ("b".to_string(), MarketModel::Gbm(gbm(0.3, 80)))];
        let pts = sweep_maturities(&spec(0.5), &[1.0 / 12.0, 0.5, 1.0], &markets, 2, 3, SkewEstimator::Pearson).unwrap();
        assert_eq!(pts.len(), 6);
        let labels: Vec<&str> = pts.iter().map(|p| p.label.as_str()).collect();
        assert_eq!(labels, ["a_1m", "a_6m", "a_12m", "b_1m", "b_6m", "b_12m"]);
    }
}
