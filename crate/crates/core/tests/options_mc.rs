//! Monte Carlo properties of short hedged strangles.

use trendskew::market_data::{GbmParams, JumpParams};
use trendskew::options_lab::{
    market_seed, simulate_short_hedged, simulate_short_strangle_raw, sweep_maturities, Hedging, MarketModel, StrangleSpec,
};
use trendskew::stats::{sample_std, skew_third_moment, stats_of, SkewEstimator};

fn gbm(vol: f64, n: usize) -> GbmParams {
    GbmParams { drift_annual: 0.0, vol_annual: vol, s0: 100.0, n_periods: n, periods_per_year: 252, seed: 0 }
}

fn crash_market(n: usize) -> MarketModel {
    MarketModel::JumpDiffusion(JumpParams {
        base: gbm(0.15, n),
        jump_intensity_annual: 0.5,
        jump_mean_log: -0.15,
        jump_std_log: 0.05,
    })
}

fn spec(tau: f64, premium: f64, market: MarketModel) -> StrangleSpec {
    StrangleSpec { tau_years: tau, n_strikes: 7, strike_width_sigmas: 2.0, hedge_every_periods: 1, vol_premium: premium, market }
}

fn percentile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v[((v.len() - 1) as f64 * q).round() as usize]
}

#[test]
fn hedging_reduces_variance_across_maturities() {
    for months in [1.0, 3.0, 6.0, 12.0] {
        let s = spec(months / 12.0, 0.05, MarketModel::Gbm(gbm(0.2, 1000)));
        let hedged = simulate_short_strangle_raw(&s, 4, 21, Hedging::Delta).unwrap();
        let naked = simulate_short_strangle_raw(&s, 4, 21, Hedging::None).unwrap();
        assert!(sample_std(hedged.values()) < sample_std(naked.values()), "tau {months}m");
    }
}

#[test]
fn crash_markets_produce_left_tails() {
    let h = simulate_short_hedged(&spec(0.25, 0.05, crash_market(2521)), 20, 3).unwrap();
    let xs = h.pnl.values();
    assert!(skew_third_moment(xs).unwrap() < 0.0);
    assert!(percentile(xs, 0.05).abs() > percentile(xs, 0.95).abs());

    // A larger premium shifts the whole distribution right; the left tail is
    // still the heavier one about the median.
    let h = simulate_short_hedged(&spec(0.25, 0.2, crash_market(2521)), 20, 3).unwrap();
    let xs = h.pnl.values();
    let mid = percentile(xs, 0.5);
    assert!(skew_third_moment(xs).unwrap() < 0.0);
    assert!(mid - percentile(xs, 0.05) > percentile(xs, 0.95) - mid);
}

#[test]
fn sweep_point_matches_direct_simulation() {
    let market = MarketModel::Gbm(gbm(0.2, 400));
    let base = spec(0.5, 0.1, market.clone());
    let pts = sweep_maturities(&base, &[0.25], &[("idx".to_string(), market)], 3, 11, SkewEstimator::Pearson).unwrap();
    assert_eq!(pts.len(), 1);
    let direct = simulate_short_hedged(&spec(0.25, 0.1, base.market.clone()), 3, market_seed(11, "idx")).unwrap();
    assert_eq!(pts[0].stats, stats_of(&direct.pnl, SkewEstimator::Pearson).unwrap());
    assert_eq!(pts[0].label, "idx_3m");
}
