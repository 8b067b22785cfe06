//! Black-Scholes pricer checked against quadrature and finite differences.

use trendskew::options_lab::{bs_delta, bs_price, OptionKind, OptionQuote};

fn phi(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Composite Simpson over `[lo, hi]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + h * i as f64);
    }
    acc * h / 3.0
}

/// Discounted expected payoff under the lognormal terminal law, integrated in
/// the standard-normal variable and split at the payoff kink.
fn quadrature_price(q: &OptionQuote) -> f64 {
    let sd = q.vol_implied_annual * q.tau_years.sqrt();
    let drift = (q.rate_annual - 0.5 * q.vol_implied_annual.powi(2)) * q.tau_years;
    let terminal = |z: f64| q.spot * (drift + sd * z).exp();
    let kink = ((q.strike / q.spot).ln() - drift) / sd;
    let df = (-q.rate_annual * q.tau_years).exp();
    let (lo, hi) = (-14.0, 14.0);
    let integral = match q.kind {
        OptionKind::Call if kink < hi => simpson(|z| (terminal(z) - q.strike) * phi(z), kink.max(lo), hi, 20_000),
        OptionKind::Put if kink > lo => simpson(|z| (q.strike - terminal(z)) * phi(z), lo, kink.min(hi), 20_000),
        _ => 0.0,
    };
    df * integral
}

fn grid() -> Vec<OptionQuote> {
    let mut out = Vec::new();
    for spot in [80.0, 95.0, 100.0, 105.0, 125.0] {
        for strike in [85.0, 100.0, 115.0, 70.0, 130.0] {
            for vol in [0.1, 0.35] {
                for tau in [1.0 / 12.0, 1.0] {
                    out.push(OptionQuote::new(spot, strike, vol, tau, 0.0, OptionKind::Call).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn atm_call_matches_quadrature() {
    let q = OptionQuote::new(100.0, 100.0, 0.2, 1.0, 0.0, OptionKind::Call).unwrap();
    assert!((bs_price(&q) - quadrature_price(&q)).abs() < 1e-6);
    // Closed form for the at-the-money, zero-rate case: S (2 N(sigma/2) - 1) ~ 7.9656
    assert!((bs_price(&q) - 7.965_567_455_405_804).abs() < 1e-9);
}

#[test]
fn grid_matches_quadrature_for_calls_and_puts() {
    let quotes = grid();
    assert_eq!(quotes.len(), 100);
    for q in quotes {
        for kind in [OptionKind::Call, OptionKind::Put] {
            let q = OptionQuote { kind, rate_annual: 0.01, ..q };
            let (bs, quad) = (bs_price(&q), quadrature_price(&q));
            assert!((bs - quad).abs() < 1e-6, "{q:?}: {bs} vs {quad}");
        }
    }
}

#[test]
fn delta_matches_central_differences() {
    for q in grid() {
        for kind in [OptionKind::Call, OptionKind::Put] {
            let q = OptionQuote { kind, ..q };
            let h = 1e-5 * q.spot;
            let fd = (bs_price(&q.with_spot(q.spot + h)) - bs_price(&q.with_spot(q.spot - h))) / (2.0 * h);
            assert!((fd - bs_delta(&q)).abs() < 1e-5, "{q:?}");
        }
    }
}

#[test]
fn price_bounds_and_monotonicity() {
    for q in grid() {
        for kind in [OptionKind::Call, OptionKind::Put] {
            let q = OptionQuote { kind, ..q };
            let p = bs_price(&q);
            assert!(p >= q.intrinsic() - 1e-12, "{q:?}");
            let more_vol = OptionQuote { vol_implied_annual: q.vol_implied_annual * 1.1, ..q };
            assert!(bs_price(&more_vol) >= p - 1e-12, "{q:?}");
            let longer = OptionQuote { tau_years: q.tau_years * 1.5, ..q };
            assert!(bs_price(&longer) >= p - 1e-12, "{q:?}");
        }
    }
}

#[test]
fn parity_across_grid() {
    for q in grid() {
        let q = OptionQuote { rate_annual: 0.03, ..q };
        let put = OptionQuote { kind: OptionKind::Put, ..q };
        let lhs = bs_price(&q) - bs_price(&put);
        let rhs = q.spot - q.strike * (-q.rate_annual * q.tau_years).exp();
        assert!((lhs - rhs).abs() < 1e-10, "{q:?}");
    }
}
