//! Synthetic price paths. All generators work in log space, so prices stay
//! positive, and all are pure functions of their parameter record.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{synthetic_calendar, DataError, PriceSeries};
use crate::rng::{derive_seed, rng_from_seed};

/// Geometric Brownian motion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbmParams {
    pub drift_annual: f64,
    pub vol_annual: f64,
    pub s0: f64,
    /// Number of observations in the generated series.
    pub n_periods: usize,
    pub periods_per_year: u32,
    pub seed: u64,
}

impl GbmParams {
    pub fn validate(&self) -> Result<(), DataError> {
        let bad = |m: &str| Err(DataError::InvalidParams(m.to_string()));
        if !self.drift_annual.is_finite() {
            return bad("drift_annual must be finite");
        }
        if !(self.vol_annual.is_finite() && self.vol_annual >= 0.0) {
            return bad("vol_annual must be finite and >= 0");
        }
        if !(self.s0.is_finite() && self.s0 > 0.0) {
            return bad("s0 must be finite and > 0");
        }
        if self.n_periods == 0 {
            return bad("n_periods must be >= 1");
        }
        if self.periods_per_year == 0 {
            return bad("periods_per_year must be >= 1");
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        1.0 / f64::from(self.periods_per_year)
    }
}

/// GBM plus compound-Poisson log-normal jumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpParams {
    pub base: GbmParams,
    /// Expected number of jumps per year.
    pub jump_intensity_annual: f64,
    pub jump_mean_log: f64,
    pub jump_std_log: f64,
}

impl JumpParams {
    pub fn validate(&self) -> Result<(), DataError> {
        self.base.validate()?;
        if !(self.jump_intensity_annual.is_finite() && self.jump_intensity_annual >= 0.0) {
            return Err(DataError::InvalidParams("jump_intensity_annual must be finite and >= 0".into()));
        }
        if self.jump_intensity_annual * self.base.dt() > 1.0 {
            return Err(DataError::InvalidParams("jump_intensity_annual exceeds one jump per period".into()));
        }
        if !self.jump_mean_log.is_finite() {
            return Err(DataError::InvalidParams("jump_mean_log must be finite".into()));
        }
        if !(self.jump_std_log.is_finite() && self.jump_std_log >= 0.0) {
            return Err(DataError::InvalidParams("jump_std_log must be finite and >= 0".into()));
        }
        Ok(())
    }

    /// Annualized variance contributed by the jumps.
    pub fn jump_variance_annual(&self) -> f64 {
        self.jump_intensity_annual * (self.jump_mean_log.powi(2) + self.jump_std_log.powi(2))
    }
}

/// GBM whose drift follows a mean-reverting AR(1) latent process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendyParams {
    pub base: GbmParams,
    /// Stationary standard deviation of the latent annual drift.
    pub drift_state_vol_annual: f64,
    /// Half-life of the latent drift, in periods.
    pub drift_persistence_halflife_days: f64,
}

impl TrendyParams {
    pub fn validate(&self) -> Result<(), DataError> {
        self.base.validate()?;
        if !(self.drift_state_vol_annual.is_finite() && self.drift_state_vol_annual >= 0.0) {
            return Err(DataError::InvalidParams("drift_state_vol_annual must be finite and >= 0".into()));
        }
        if !(self.drift_persistence_halflife_days.is_finite() && self.drift_persistence_halflife_days > 0.0) {
            return Err(DataError::InvalidParams("drift_persistence_halflife_days must be > 0".into()));
        }
        Ok(())
    }
}

/// Shared log-space stepper. `extra_drift(t)` adds to the annual drift of the
/// step ending at `t`; `jump(t)` adds a log jump to it.
fn simulate_log_path(
    p: &GbmParams,
    id: &str,
    mut extra_drift: impl FnMut(usize) -> f64,
    mut jump: impl FnMut(usize) -> f64,
) -> Result<PriceSeries, DataError> {
    let dt = p.dt();
    let sqrt_dt = dt.sqrt();
    let half_var = 0.5 * p.vol_annual * p.vol_annual;
    let mut rng = rng_from_seed(p.seed);
    let mut prices = Vec::with_capacity(p.n_periods);
    prices.push(p.s0);
    let mut log_level = 0.0;
    for t in 1..p.n_periods {
        let z: f64 = rng.sample(StandardNormal);
        log_level += ((p.drift_annual + extra_drift(t)) - half_var) * dt + p.vol_annual * sqrt_dt * z + jump(t);
        prices.push(p.s0 * log_level.exp());
    }
    PriceSeries::new(id, synthetic_calendar(p.n_periods, p.periods_per_year), prices, p.periods_per_year)
}

/// `price(t+1) = price(t) * exp((drift - vol^2/2) dt + vol sqrt(dt) z)`.
pub fn gen_gbm(p: &GbmParams) -> Result<PriceSeries, DataError> {
    p.validate()?;
    simulate_log_path(p, "gbm", |_| 0.0, |_| 0.0)
}

/// GBM plus, with probability `intensity * dt` per period, a normal log jump.
///
/// Jump arrivals and sizes come from a sub-stream of the seed, so the
/// diffusion part is the same path `gen_gbm` produces for the base params.
pub fn gen_jump_diffusion(p: &JumpParams) -> Result<PriceSeries, DataError> {
    p.validate()?;
    let prob = p.jump_intensity_annual * p.base.dt();
    let mut jump_rng = rng_from_seed(derive_seed(p.base.seed, "jumps"));
    let (mean, std) = (p.jump_mean_log, p.jump_std_log);
    simulate_log_path(
        &p.base,
        "jump",
        |_| 0.0,
        |_| {
            if prob <= 0.0 {
                return 0.0;
            }
            let u: f64 = jump_rng.random();
            let z: f64 = jump_rng.sample(StandardNormal);
            if u < prob {
                mean + std * z
            } else {
                0.0
            }
        },
    )
}

/// Persistent-drift market: the annual drift is `base.drift + mu_t` with
/// `mu_t = phi mu_{t-1} + s sqrt(1 - phi^2) eta_t`, `phi = 2^(-1/halflife)`,
/// started from its stationary law `N(0, s^2)`.
pub fn gen_trendy(p: &TrendyParams) -> Result<PriceSeries, DataError> {
    p.validate()?;
    let s = p.drift_state_vol_annual;
    let phi = 0.5f64.powf(1.0 / p.drift_persistence_halflife_days);
    let innovation = s * (1.0 - phi * phi).sqrt();
    let mut drift_rng = rng_from_seed(derive_seed(p.base.seed, "latent_drift"));
    let z0: f64 = drift_rng.sample(StandardNormal);
    let mut mu = s * z0;
    simulate_log_path(
        &p.base,
        "trendy",
        |_| {
            let eta: f64 = drift_rng.sample(StandardNormal);
            mu = phi * mu + innovation * eta;
            mu
        },
        |_| 0.0,
    )
}
