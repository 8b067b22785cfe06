use serde::{Deserialize, Serialize};

use super::StatsError;

/// Pooled fit of `SR = a - b * skew`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub a: f64,
    /// Negated OLS slope, so a positive `b` means more negative skew goes with higher Sharpe.
    pub b: f64,
    pub stderr_a: f64,
    pub stderr_b: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    pub n_points: usize,
}

impl RegressionFit {
    pub fn predict(&self, skew: f64) -> f64 {
        self.a - self.b * skew
    }
}

/// Unweighted OLS of Sharpe on skewness over `(skew, sharpe)` points.
///
/// Points are put in a canonical order first, so the result does not depend
/// on input order down to the last bit. Standard errors use the classical
/// homoskedastic formula with `n - 2` degrees of freedom; with two points the
/// fit is exact and both are reported as zero.
pub fn fit_sr_vs_skew(points: &[(f64, f64)]) -> Result<RegressionFit, StatsError> {
    let n = points.len();
    if n < 2 {
        return Err(StatsError::TooFewObservations { needed: 2, got: n });
    }
    if let Some(i) = points.iter().position(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(StatsError::NonFinite(i));
    }
    if points.iter().all(|(x, _)| *x == points[0].0) {
        return Err(StatsError::DegenerateRegressor);
    }
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));

    let nf = n as f64;
    let x_bar = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let y_bar = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in &pts {
        let (dx, dy) = (x - x_bar, y - y_bar);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let ssr: f64 = pts.iter().map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();

    let (stderr_a, stderr_b) = if n > 2 {
        let s2 = ssr / (nf - 2.0);
        ((s2 * (1.0 / nf + x_bar * x_bar / sxx)).sqrt(), (s2 / sxx).sqrt())
    } else {
        (0.0, 0.0)
    };
    let r_squared = if syy > 0.0 { (1.0 - ssr / syy).clamp(0.0, 1.0) } else { 1.0 };

    Ok(RegressionFit { a: intercept, b: -slope, stderr_a, stderr_b, r_squared, n_points: n })
}
