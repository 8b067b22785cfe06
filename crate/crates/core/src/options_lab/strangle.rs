use super::pricing::{bs_delta, bs_price, bs_vega, OptionKind, OptionQuote};
use super::{OptionsError, StrangleSpec};

/// Uniform strangle: `n_strikes` equally spaced strikes over
/// `spot * (1 +/- width * vol * sqrt(tau))`, puts below spot, calls above,
/// and half a put plus half a call at the centre strike. Every strike carries
/// the same weight, scaled so the position's total vega is 1.
pub fn build_strangle(spot: f64, spec: &StrangleSpec, vol_implied: f64) -> Result<Vec<(OptionQuote, f64)>, OptionsError> {
    spec.validate_shape()?;
    if !(spot.is_finite() && spot > 0.0) {
        return Err(OptionsError::InvalidQuote(format!("spot {spot}")));
    }
    if !(vol_implied.is_finite() && vol_implied > 0.0) {
        return Err(OptionsError::InvalidQuote(format!("implied vol {vol_implied}")));
    }
    let half_span = spec.strike_width_sigmas * vol_implied * spec.tau_years.sqrt();
    if half_span >= 1.0 {
        return Err(OptionsError::NonPositiveStrike { lowest: spot * (1.0 - half_span) });
    }
    let n = spec.n_strikes;
    let centre = n / 2;
    let step = 2.0 * half_span / (n - 1) as f64;
    let quote = |strike: f64, kind| OptionQuote::new(spot, strike, vol_implied, spec.tau_years, 0.0, kind);

    let mut legs = Vec::with_capacity(n + 1);
    for i in 0..n {
        let strike = spot * (1.0 - half_span + step * i as f64);
        if i < centre {
            legs.push((quote(strike, OptionKind::Put)?, 1.0));
        } else if i > centre {
            legs.push((quote(strike, OptionKind::Call)?, 1.0));
        } else {
            legs.push((quote(spot, OptionKind::Put)?, 0.5));
            legs.push((quote(spot, OptionKind::Call)?, 0.5));
        }
    }
    let vega: f64 = legs.iter().map(|(q, w)| w * bs_vega(q)).sum();
    if !(vega > 0.0) {
        return Err(OptionsError::InvalidSpec("strangle has zero vega".into()));
    }
    for (_, w) in legs.iter_mut() {
        *w /= vega;
    }
    Ok(legs)
}

/// Weighted value of a strangle, each leg repriced at `spot` with `tau` remaining.
pub fn strangle_value(legs: &[(OptionQuote, f64)], spot: f64, tau_years: f64) -> f64 {
    legs.iter().map(|(q, w)| w * bs_price(&q.with_spot(spot).with_tau(tau_years))).sum()
}

pub fn strangle_delta(legs: &[(OptionQuote, f64)]) -> f64 {
    legs.iter().map(|(q, w)| w * bs_delta(q)).sum()
}

/// Weighted payoff at expiry.
pub fn strangle_payoff(legs: &[(OptionQuote, f64)], terminal_spot: f64) -> f64 {
    legs.iter().map(|(q, w)| w * q.with_spot(terminal_spot).intrinsic()).sum()
}

/// How the short strangle is hedged on a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hedging {
    /// Hold the strangle's delta in the underlying, refreshed every `hedge_every_periods`.
    Delta,
    None,
}

/// Per-period P&L of a short constant-maturity strangle on one price path.
///
/// Each period a fresh strangle is struck at the current spot with maturity
/// `tau`, sold at model value, marked one period later with `tau - dt`
/// remaining and bought back. Returns `prices.len() - 1` increments.
pub fn short_strangle_path_pnl(
    prices: &[f64],
    periods_per_year: u32,
    spec: &StrangleSpec,
    vol_implied: f64,
    hedging: Hedging,
) -> Result<Vec<f64>, OptionsError> {
    let dt = 1.0 / f64::from(periods_per_year);
    let tau_next = spec.tau_years - dt;
    let mut hedge = 0.0;
    let mut out = Vec::with_capacity(prices.len().saturating_sub(1));
    for (t, w) in prices.windows(2).enumerate() {
        let (s0, s1) = (w[0], w[1]);
        let legs = build_strangle(s0, spec, vol_implied)?;
        let v0 = strangle_value(&legs, s0, spec.tau_years);
        let v1 = strangle_value(&legs, s1, tau_next);
        if hedging == Hedging::Delta && t % spec.hedge_every_periods == 0 {
            hedge = strangle_delta(&legs);
        }
        out.push(-(v1 - v0) + hedge * (s1 - s0));
    }
    Ok(out)
}
