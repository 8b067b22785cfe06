use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use trendskew::market_data::{load_csv, write_csv, PriceSeries};
use trendskew::options_lab::sweep_maturities;
use trendskew::stats::{fit_sr_vs_skew, stats_of, RegressionFit, StrategyStats};
use trendskew::trend_engine::{aggregate, contract_pnl};
use trendskew::PnlSeries;

use crate::config::{ConfigFile, RegressRunConfig, ResolvedSource, Source, StrangleRunConfig, SynthRunConfig, TrendRunConfig};
use crate::{CliError, CommonArgs};

fn create(out_dir: &Path, name: &str) -> Result<BufWriter<File>, CliError> {
    std::fs::create_dir_all(out_dir)?;
    Ok(BufWriter::new(File::create(out_dir.join(name))?))
}

fn write_json<T: Serialize>(out_dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut w = create(out_dir, name)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(CliError::data)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn write_pnl(out_dir: &Path, name: &str, pnl: &PnlSeries) -> Result<(), CliError> {
    pnl.write_csv(create(out_dir, name)?).map_err(CliError::data)
}

fn format_months(tau_years: f64) -> String {
    let m = tau_years * 12.0;
    if (m - m.round()).abs() < 1e-9 {
        format!("{}", m.round())
    } else {
        format!("{m}")
    }
}

#[derive(Serialize)]
struct LabelledStats<'a> {
    label: &'a str,
    #[serde(flatten)]
    stats: &'a StrategyStats,
}

#[derive(Serialize)]
struct TrendReport<'a> {
    aggregate: &'a StrategyStats,
    contracts: Vec<LabelledStats<'a>>,
}

fn load_source(src: &ResolvedSource) -> Result<PriceSeries, CliError> {
    Ok(match src {
        ResolvedSource::Csv { label, path, periods_per_year } => {
            load_csv(path, *periods_per_year)?.with_contract_id(label.clone())
        }
        ResolvedSource::Synthetic { label, generator } => generator.generate()?.with_contract_id(label.clone()),
    })
}

/// Trend backtest: per-contract and aggregate P&L files, `stats.json`, Sharpe on stdout.
///
/// Warmup periods are dropped before anything is written or measured.
pub fn cmd_trend(args: &CommonArgs) -> Result<String, CliError> {
    let file = ConfigFile::load(&args.config)?;
    let mut cfg: TrendRunConfig = file.parse()?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(est) = args.skew_estimator {
        cfg.skew_estimator = est;
    }
    let sources = cfg.resolve_sources(&file)?;

    let mut live = Vec::with_capacity(sources.len());
    for src in &sources {
        let series = load_source(src)?;
        let pnl = contract_pnl(&series, &cfg.trend).map_err(|e| CliError::Data(format!("{}: {e}", src.label())))?;
        live.push((src.label().to_string(), pnl.skip(cfg.trend.warmup_periods)));
    }
    let pnls: Vec<PnlSeries> = live.iter().map(|(_, p)| p.clone()).collect();
    let agg = aggregate(&pnls, cfg.renormalize)?;

    let mut contract_stats = Vec::with_capacity(live.len());
    for (label, pnl) in &live {
        let s = stats_of(pnl, cfg.skew_estimator).map_err(|e| match CliError::from(e) {
            CliError::Numerical(m) => CliError::Numerical(format!("{label}: {m}")),
            other => other,
        })?;
        contract_stats.push(s);
    }
    let agg_stats = stats_of(&agg, cfg.skew_estimator)?;

    for (label, pnl) in &live {
        write_pnl(&args.out_dir, &format!("pnl_{label}.csv"), pnl)?;
    }
    write_pnl(&args.out_dir, "aggregate.csv", &agg)?;
    let report = TrendReport {
        aggregate: &agg_stats,
        contracts: live.iter().zip(&contract_stats).map(|((label, _), stats)| LabelledStats { label, stats }).collect(),
    };
    write_json(&args.out_dir, "stats.json", &report)?;

    let mut out = String::new();
    for ((label, _), s) in live.iter().zip(&contract_stats) {
        writeln!(out, "{label} sharpe {:.4}", s.sharpe_annual).unwrap();
    }
    writeln!(out, "aggregate sharpe {:.4}", agg_stats.sharpe_annual).unwrap();
    Ok(out)
}

#[derive(Serialize)]
struct SweepStats<'a> {
    label: &'a str,
    market: &'a str,
    tau_months: f64,
    #[serde(flatten)]
    stats: &'a StrategyStats,
}

/// Maturity x market sweep: `scatter.csv`, `stats.json`, and `fit.json` when a fit exists.
pub fn cmd_strangle(args: &CommonArgs) -> Result<String, CliError> {
    let file = ConfigFile::load(&args.config)?;
    let mut cfg: StrangleRunConfig = file.parse()?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(est) = args.skew_estimator {
        cfg.skew_estimator = est;
    }
    let (base, markets) = cfg.resolve(&file)?;
    let points = sweep_maturities(&base, &cfg.taus_years, &markets, cfg.n_paths, cfg.seed, cfg.skew_estimator)?;

    let mut w =
        csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(create(&args.out_dir, "scatter.csv")?);
    w.write_record(["label", "market", "tau_months", "skew", "sharpe"]).map_err(CliError::data)?;
    for p in &points {
        w.write_record([
            p.label.clone(),
            p.market.clone(),
            format_months(p.tau_years),
            p.stats.skew_low_moment.to_string(),
            p.stats.sharpe_annual.to_string(),
        ])
        .map_err(CliError::data)?;
    }
    w.flush()?;
    let rows: Vec<SweepStats> = points
        .iter()
        .map(|p| SweepStats { label: &p.label, market: &p.market, tau_months: p.tau_years * 12.0, stats: &p.stats })
        .collect();
    write_json(&args.out_dir, "stats.json", &rows)?;

    let mut out = String::new();
    for p in &points {
        writeln!(out, "{} sharpe {:.4} skew {:.4}", p.label, p.stats.sharpe_annual, p.stats.skew_low_moment).unwrap();
    }
    if points.len() < 2 {
        writeln!(out, "fit skipped: need at least 2 points").unwrap();
        return Ok(out);
    }
    let fit = fit_sr_vs_skew(&points.iter().map(|p| (p.stats.skew_low_moment, p.stats.sharpe_annual)).collect::<Vec<_>>())?;
    write_json(&args.out_dir, "fit.json", &fit)?;
    out.push_str(&fit_line(&fit));
    Ok(out)
}

fn fit_line(fit: &RegressionFit) -> String {
    format!(
        "a {:.6} (se {:.6}) b {:.6} (se {:.6}) r2 {:.4} n {}\n",
        fit.a, fit.stderr_a, fit.b, fit.stderr_b, fit.r_squared, fit.n_points
    )
}

/// Reads `skew` and `sharpe` columns (plus anything else, ignored) and writes `fit.json`.
pub fn cmd_regress(args: &CommonArgs) -> Result<String, CliError> {
    let file = ConfigFile::load(&args.config)?;
    let cfg: RegressRunConfig = file.parse()?;
    let input = file.resolve(&cfg.input);
    if !input.is_file() {
        return Err(file.error("input", 0, format!("input {} not found", input.display())));
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(&input).map_err(CliError::data)?;
    let headers = rdr.headers().map_err(CliError::data)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("{}: missing `{name}` column", input.display())))
    };
    let (skew_col, sharpe_col) = (column("skew")?, column("sharpe")?);
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(CliError::data)?;
        let field = |c: usize| -> Result<f64, CliError> {
            let raw = rec.get(c).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Data(format!("{} line {}: bad number `{raw}`", input.display(), i + 2)))
        };
        points.push((field(skew_col)?, field(sharpe_col)?));
    }
    if points.len() < 2 {
        return Err(file.error("input", 0, format!("{} has {} rows; the fit needs at least 2", input.display(), points.len())));
    }
    let fit = fit_sr_vs_skew(&points)?;
    write_json(&args.out_dir, "fit.json", &fit)?;
    Ok(fit_line(&fit))
}

/// Writes `prices_<label>.csv` for every series the generator block describes.
pub fn cmd_synth(args: &CommonArgs) -> Result<String, CliError> {
    let file = ConfigFile::load(&args.config)?;
    let mut cfg: SynthRunConfig = file.parse()?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if matches!(cfg.generator, Source::Csv(_)) {
        return Err(file.error("kind", 0, "generator must be of kind `gbm`, `jump` or `trendy`"));
    }
    let mut out = String::new();
    for src in cfg.generator.resolve(&file, 0, cfg.seed)? {
        let series = load_source(&src)?;
        let name = format!("prices_{}.csv", src.label());
        let mut w = create(&args.out_dir, &name)?;
        write_csv(&series, &mut w)?;
        w.flush()?;
        writeln!(out, "{}", args.out_dir.join(&name).display()).unwrap();
    }
    Ok(out)
}
