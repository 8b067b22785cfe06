use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::OptionsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptionKind {
    Call,
    Put,
}

/// A European option under Black-Scholes with a flat implied volatility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionQuote {
    pub spot: f64,
    pub strike: f64,
    pub vol_implied_annual: f64,
    pub tau_years: f64,
    pub rate_annual: f64,
    pub kind: OptionKind,
}

impl OptionQuote {
    pub fn new(
        spot: f64,
        strike: f64,
        vol_implied_annual: f64,
        tau_years: f64,
        rate_annual: f64,
        kind: OptionKind,
    ) -> Result<Self, OptionsError> {
        let q = Self { spot, strike, vol_implied_annual, tau_years, rate_annual, kind };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<(), OptionsError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.spot)
            && positive(self.strike)
            && positive(self.vol_implied_annual)
            && positive(self.tau_years)
            && self.rate_annual.is_finite())
        {
            return Err(OptionsError::InvalidQuote(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn with_spot(self, spot: f64) -> Self {
        Self { spot, ..self }
    }

    pub fn with_tau(self, tau_years: f64) -> Self {
        Self { tau_years, ..self }
    }

    pub fn intrinsic(&self) -> f64 {
        match self.kind {
            OptionKind::Call => (self.spot - self.strike).max(0.0),
            OptionKind::Put => (self.strike - self.spot).max(0.0),
        }
    }

    fn d1_d2(&self) -> (f64, f64) {
        let sd = self.vol_implied_annual * self.tau_years.sqrt();
        let d1 =
            ((self.spot / self.strike).ln() + (self.rate_annual + 0.5 * self.vol_implied_annual.powi(2)) * self.tau_years) / sd;
        (d1, d1 - sd)
    }
}

pub(crate) fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub(crate) fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Black-Scholes price. An expired quote (`tau <= 0`) is worth its intrinsic value.
pub fn bs_price(q: &OptionQuote) -> f64 {
    if q.tau_years <= 0.0 {
        return q.intrinsic();
    }
    let (d1, d2) = q.d1_d2();
    let df = (-q.rate_annual * q.tau_years).exp();
    let price = match q.kind {
        OptionKind::Call => q.spot * norm_cdf(d1) - q.strike * df * norm_cdf(d2),
        OptionKind::Put => q.strike * df * norm_cdf(-d2) - q.spot * norm_cdf(-d1),
    };
    price.max(0.0)
}

/// Spot delta. An expired quote has the delta of its payoff (0 at the money).
pub fn bs_delta(q: &OptionQuote) -> f64 {
    if q.tau_years <= 0.0 {
        return match q.kind {
            OptionKind::Call if q.spot > q.strike => 1.0,
            OptionKind::Put if q.spot < q.strike => -1.0,
            _ => 0.0,
        };
    }
    let (d1, _) = q.d1_d2();
    match q.kind {
        OptionKind::Call => norm_cdf(d1),
        OptionKind::Put => norm_cdf(d1) - 1.0,
    }
}

/// Sensitivity to the implied volatility (per unit of vol).
pub fn bs_vega(q: &OptionQuote) -> f64 {
    if q.tau_years <= 0.0 {
        return 0.0;
    }
    let (d1, _) = q.d1_d2();
    q.spot * norm_pdf(d1) * q.tau_years.sqrt()
}
