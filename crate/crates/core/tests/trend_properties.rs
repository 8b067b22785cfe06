use trendskew::market_data::{gen_gbm, gen_trendy, GbmParams, TrendyParams};
use trendskew::stats::{sample_std, sharpe_annualized};
use trendskew::trend_engine::{aggregate, contract_pnl, positions, trend_signal, SignalClip, TrendConfig};

fn gbm(n: usize, seed: u64) -> GbmParams {
    GbmParams { drift_annual: 0.0, vol_annual: 0.2, s0: 100.0, n_periods: n, periods_per_year: 252, seed }
}

fn trendy(n: usize, seed: u64) -> TrendyParams {
    TrendyParams { base: gbm(n, seed), drift_state_vol_annual: 0.1, drift_persistence_halflife_days: 100.0 }
}

#[test]
fn no_look_ahead_in_signals_or_positions() {
    let prices = gen_trendy(&trendy(3000, 12)).unwrap();
    for clip in [SignalClip::Sign, SignalClip::LinearClipped] {
        let cfg = TrendConfig { signal_clip: clip, ..TrendConfig::default() };
        let full_sig = trend_signal(&prices, &cfg).unwrap();
        let full_pos = positions(&prices, &cfg).unwrap();
        for t in [127, 500, 1499, 2999] {
            let head = prices.truncated(t).unwrap();
            assert_eq!(trend_signal(&head, &cfg).unwrap().values[..], full_sig.values[..t]);
            assert_eq!(positions(&head, &cfg).unwrap()[..], full_pos[..t]);
        }
    }
}

#[test]
fn sign_mode_pnl_is_invariant_to_price_scale() {
    let prices = gen_gbm(&gbm(4000, 8)).unwrap();
    let cfg = TrendConfig::default();
    let base = contract_pnl(&prices, &cfg).unwrap();
    for c in [0.01, 3.7, 1000.0] {
        let scaled = contract_pnl(&prices.scaled(c).unwrap(), &cfg).unwrap();
        for (x, y) in base.values().iter().zip(scaled.values()) {
            assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "c={c}: {x} vs {y}");
        }
    }
}

#[test]
fn warmup_periods_carry_no_pnl() {
    let prices = gen_gbm(&gbm(1000, 4)).unwrap();
    let cfg = TrendConfig { warmup_periods: 300, ..TrendConfig::default() };
    let pnl = contract_pnl(&prices, &cfg).unwrap();
    assert!(pnl.values()[..300].iter().all(|v| *v == 0.0));
    assert!(pnl.values()[300..].iter().any(|v| *v != 0.0));
}

#[test]
fn independent_streams_add_in_quadrature() {
    let cfg = TrendConfig::default();
    let n = 10;
    let streams: Vec<_> = (0..n).map(|i| contract_pnl(&gen_gbm(&gbm(20_000, 100 + i)).unwrap(), &cfg).unwrap()).collect();
    let live = |xs: &[f64]| sample_std(&xs[cfg.warmup_periods..]) * 252f64.sqrt();
    let mean_single = streams.iter().map(|s| live(s.values())).sum::<f64>() / n as f64;
    let agg = aggregate(&streams, false).unwrap();
    let ratio = live(agg.values()) / mean_single;
    assert!((ratio / (n as f64).sqrt() - 1.0).abs() < 0.10, "ratio {ratio}");
    let unit = aggregate(&streams, true).unwrap();
    assert!((sample_std(unit.values()) * 252f64.sqrt() - 1.0).abs() < 1e-12);
}

#[test]
fn trendy_markets_reward_trend_following() {
    let cfg = TrendConfig::default();
    let pnl = contract_pnl(&gen_trendy(&trendy(252 * 100, 77)).unwrap(), &cfg).unwrap();
    assert!(sharpe_annualized(&pnl).unwrap() > 0.0);
}
