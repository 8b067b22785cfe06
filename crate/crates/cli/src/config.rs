//! JSON run configurations, one schema per subcommand, all at `schema_version: 1`.
//!
//! Relative paths inside a config resolve against the config file's directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use trendskew::market_data::{GbmParams, JumpParams, TrendyParams};
use trendskew::options_lab::{MarketModel, StrangleSpec};
use trendskew::rng::derive_seed;
use trendskew::stats::SkewEstimator;
use trendskew::trend_engine::TrendConfig;

use crate::error::{CliError, ConfigError};

pub const SCHEMA_VERSION: u32 = 1;

/// Raw config text plus its location, used to anchor errors to lines.
pub struct ConfigFile {
    path: PathBuf,
    raw: String,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let raw = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(ConfigError { file: path.display().to_string(), line: None, message: format!("cannot read: {e}") })
        })?;
        Ok(Self { path: path.to_path_buf(), raw })
    }

    pub fn from_text(path: impl Into<PathBuf>, raw: impl Into<String>) -> Self {
        Self { path: path.into(), raw: raw.into() }
    }

    pub fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        let version: serde_json::Value = serde_json::from_str(&self.raw).map_err(|e| self.serde_error(&e))?;
        match version.get("schema_version").and_then(serde_json::Value::as_u64) {
            Some(v) if v == u64::from(SCHEMA_VERSION) => {}
            Some(v) => {
                return Err(self.error("schema_version", 0, format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}")))
            }
            None => return Err(self.error("schema_version", 0, "missing integer `schema_version`")),
        }
        serde_json::from_str(&self.raw).map_err(|e| self.serde_error(&e))
    }

    fn serde_error(&self, e: &serde_json::Error) -> CliError {
        CliError::Config(ConfigError {
            file: self.path.display().to_string(),
            line: (e.line() > 0).then_some(e.line()),
            message: e.to_string(),
        })
    }

    /// Line (1-based) of the `nth` (0-based) occurrence of `"key"`.
    pub fn locate(&self, key: &str, nth: usize) -> Option<usize> {
        let needle = format!("\"{key}\"");
        let mut hits = self.raw.lines().enumerate().filter(|(_, l)| l.contains(&needle));
        hits.nth(nth).or_else(|| self.raw.lines().enumerate().find(|(_, l)| l.contains(&needle))).map(|(i, _)| i + 1)
    }

    pub fn error(&self, key: &str, nth: usize, message: impl Into<String>) -> CliError {
        CliError::Config(ConfigError {
            file: self.path.display().to_string(),
            line: self.locate(key, nth),
            message: message.into(),
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.path.parent().unwrap_or(Path::new(".")).join(p)
        }
    }
}

fn default_s0() -> f64 {
    100.0
}
fn default_ppy() -> u32 {
    252
}
fn default_count() -> usize {
    1
}
fn default_true() -> bool {
    true
}

/// A synthetic market block. Jump and trendy kinds read their extra fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub label: String,
    #[serde(default)]
    pub drift_annual: f64,
    pub vol_annual: f64,
    #[serde(default = "default_s0")]
    pub s0: f64,
    pub n_periods: usize,
    #[serde(default = "default_ppy")]
    pub periods_per_year: u32,
    /// Number of independent replicas, labelled `<label>_<i>` when above 1.
    #[serde(default = "default_count")]
    pub count: usize,
    pub jump_intensity_annual: Option<f64>,
    pub jump_mean_log: Option<f64>,
    pub jump_std_log: Option<f64>,
    pub drift_state_vol_annual: Option<f64>,
    pub drift_persistence_halflife_days: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvSource {
    pub label: Option<String>,
    pub path: PathBuf,
    pub periods_per_year: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Csv(CsvSource),
    Gbm(GeneratorSpec),
    Jump(GeneratorSpec),
    Trendy(GeneratorSpec),
}

/// A fully specified synthetic series.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Gbm(GbmParams),
    Jump(JumpParams),
    Trendy(TrendyParams),
}

impl Generator {
    pub fn generate(&self) -> Result<trendskew::PriceSeries, CliError> {
        Ok(match self {
            Self::Gbm(p) => trendskew::market_data::gen_gbm(p)?,
            Self::Jump(p) => trendskew::market_data::gen_jump_diffusion(p)?,
            Self::Trendy(p) => trendskew::market_data::gen_trendy(p)?,
        })
    }
}

/// A price series to load or generate, with its final label.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolvedSource {
    Csv { label: String, path: PathBuf, periods_per_year: Option<u32> },
    Synthetic { label: String, generator: Generator },
}

impl ResolvedSource {
    pub fn label(&self) -> &str {
        match self {
            Self::Csv { label, .. } | Self::Synthetic { label, .. } => label,
        }
    }
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl Source {
    fn kind(&self) -> &'static str {
        match self {
            Self::Csv(_) => "csv",
            Self::Gbm(_) => "gbm",
            Self::Jump(_) => "jump",
            Self::Trendy(_) => "trendy",
        }
    }

    /// Expands replicas and derives each series' seed from `(seed, label)`.
    pub fn resolve(&self, cfg: &ConfigFile, nth: usize, seed: u64) -> Result<Vec<ResolvedSource>, CliError> {
        let g = match self {
            Self::Csv(c) => {
                let path = cfg.resolve(&c.path);
                if !path.is_file() {
                    return Err(cfg.error("path", nth, format!("price file {} not found", path.display())));
                }
                let label = match &c.label {
                    Some(l) => l.clone(),
                    None => path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                };
                return Ok(vec![ResolvedSource::Csv { label, path, periods_per_year: c.periods_per_year }]);
            }
            Self::Gbm(g) | Self::Jump(g) | Self::Trendy(g) => g,
        };
        if g.count == 0 {
            return Err(cfg.error("count", 0, format!("source `{}`: count must be >= 1", g.label)));
        }
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| cfg.error("label", nth, format!("{} source `{}` needs `{key}`", self.kind(), g.label)))
        };
        let mut out = Vec::with_capacity(g.count);
        for i in 0..g.count {
            let label = if g.count == 1 { g.label.clone() } else { format!("{}_{}", g.label, i + 1) };
            let base = GbmParams {
                drift_annual: g.drift_annual,
                vol_annual: g.vol_annual,
                s0: g.s0,
                n_periods: g.n_periods,
                periods_per_year: g.periods_per_year,
                seed: derive_seed(seed, &label),
            };
            let generator = match self {
                Self::Gbm(_) => Generator::Gbm(base),
                Self::Jump(_) => Generator::Jump(JumpParams {
                    base,
                    jump_intensity_annual: need(g.jump_intensity_annual, "jump_intensity_annual")?,
                    jump_mean_log: need(g.jump_mean_log, "jump_mean_log")?,
                    jump_std_log: need(g.jump_std_log, "jump_std_log")?,
                }),
                Self::Trendy(_) => Generator::Trendy(TrendyParams {
                    base,
                    drift_state_vol_annual: need(g.drift_state_vol_annual, "drift_state_vol_annual")?,
                    drift_persistence_halflife_days: need(g.drift_persistence_halflife_days, "drift_persistence_halflife_days")?,
                }),
                Self::Csv(_) => unreachable!(),
            };
            let check = match &generator {
                Generator::Gbm(p) => p.validate(),
                Generator::Jump(p) => p.validate(),
                Generator::Trendy(p) => p.validate(),
            };
            check.map_err(|e| cfg.error("label", nth, format!("source `{}`: {e}", g.label)))?;
            out.push(ResolvedSource::Synthetic { label, generator });
        }
        Ok(out)
    }
}

fn check_labels<'a>(cfg: &ConfigFile, key: &str, labels: impl Iterator<Item = &'a str>) -> Result<(), CliError> {
    let mut seen = BTreeSet::new();
    for (i, l) in labels.enumerate() {
        if !valid_label(l) {
            return Err(cfg.error(key, i, format!("label `{l}` may only use letters, digits, `_`, `-`, `.`")));
        }
        if !seen.insert(l.to_string()) {
            return Err(cfg.error(key, i, format!("duplicate label `{l}`")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrendRunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub trend: TrendConfig,
    #[serde(default = "default_true")]
    pub renormalize: bool,
    #[serde(default)]
    pub skew_estimator: SkewEstimator,
    pub sources: Vec<Source>,
}

impl TrendRunConfig {
    pub fn resolve_sources(&self, cfg: &ConfigFile) -> Result<Vec<ResolvedSource>, CliError> {
        if self.sources.is_empty() {
            return Err(cfg.error("sources", 0, "at least one price source is required"));
        }
        self.trend.validate().map_err(|e| cfg.error("trend", 0, e.to_string()))?;
        let mut out = Vec::new();
        for (i, s) in self.sources.iter().enumerate() {
            out.extend(s.resolve(cfg, i, self.seed)?);
        }
        check_labels(cfg, "label", out.iter().map(ResolvedSource::label))?;
        Ok(out)
    }
}

fn default_strikes() -> usize {
    7
}
fn default_width() -> f64 {
    2.0
}
fn default_hedge() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrangleBlock {
    #[serde(default = "default_strikes")]
    pub n_strikes: usize,
    #[serde(default = "default_width")]
    pub strike_width_sigmas: f64,
    #[serde(default = "default_hedge")]
    pub hedge_every_periods: usize,
    pub vol_premium: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrangleRunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub skew_estimator: SkewEstimator,
    pub strangle: StrangleBlock,
    pub taus_years: Vec<f64>,
    pub markets: Vec<Source>,
    pub n_paths: usize,
}

impl StrangleRunConfig {
    /// Validates the whole sweep and returns the base spec plus labelled markets.
    pub fn resolve(&self, cfg: &ConfigFile) -> Result<(StrangleSpec, Vec<(String, MarketModel)>), CliError> {
        if self.taus_years.is_empty() {
            return Err(cfg.error("taus_years", 0, "at least one maturity is required"));
        }
        if self.markets.is_empty() {
            return Err(cfg.error("markets", 0, "at least one market is required"));
        }
        if self.n_paths == 0 {
            return Err(cfg.error("n_paths", 0, "n_paths must be >= 1"));
        }
        for tau in &self.taus_years {
            if !(tau.is_finite() && *tau >= 1.0 / 12.0 - 1e-9 && *tau <= 1.0 + 1e-9) {
                return Err(cfg.error(
                    "taus_years",
                    0,
                    format!("maturity {tau} years is outside [1/12, 1] (effective maturities run from 1 to 12 months)"),
                ));
            }
        }
        let mut markets = Vec::new();
        for (i, m) in self.markets.iter().enumerate() {
            if matches!(m, Source::Csv(_) | Source::Trendy(_)) {
                return Err(cfg.error("kind", i, "markets must be of kind `gbm` or `jump`"));
            }
            for r in m.resolve(cfg, i, self.seed)? {
                let ResolvedSource::Synthetic { label, generator } = r else { unreachable!() };
                let model = match generator {
                    Generator::Gbm(p) => MarketModel::Gbm(p),
                    Generator::Jump(p) => MarketModel::JumpDiffusion(p),
                    Generator::Trendy(_) => unreachable!(),
                };
                markets.push((label, model));
            }
        }
        check_labels(cfg, "label", markets.iter().map(|(l, _)| l.as_str()))?;
        let base = StrangleSpec {
            tau_years: self.taus_years[0],
            n_strikes: self.strangle.n_strikes,
            strike_width_sigmas: self.strangle.strike_width_sigmas,
            hedge_every_periods: self.strangle.hedge_every_periods,
            vol_premium: self.strangle.vol_premium,
            market: markets[0].1.clone(),
        };
        for (label, market) in &markets {
            for tau in &self.taus_years {
                let spec = StrangleSpec { tau_years: *tau, market: market.clone(), ..base.clone() };
                spec.validate().map_err(|e| cfg.error("strangle", 0, format!("market `{label}`, tau {tau}: {e}")))?;
                if market.base().n_periods < 2 {
                    return Err(cfg.error("n_periods", 0, format!("market `{label}` needs n_periods >= 2")));
                }
            }
        }
        Ok((base, markets))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegressRunConfig {
    pub schema_version: u32,
    pub input: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthRunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    pub generator: Source,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> ConfigFile {
        ConfigFile::from_text("cfg.json", text)
    }

    #[test]
    fn schema_version_is_required() {
        let err = file("{\n  \"seed\": 1\n}").parse::<SynthRunConfig>().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = file("{\n  \"schema_version\": 2\n}").parse::<SynthRunConfig>().unwrap_err();
        assert!(err.to_string().contains("cfg.json:2:"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let err = file("{\n \"schema_version\": 1,\n \"input\": \n}").parse::<RegressRunConfig>().unwrap_err();
        assert!(err.to_string().contains("cfg.json:4:"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = "{\"schema_version\": 1, \"input\": \"a.csv\", \"extra\": 3}";
        assert!(file(text).parse::<RegressRunConfig>().is_err());
    }

    #[test]
    fn replicas_get_distinct_labels_and_seeds() {
        let text = r#"{"schema_version": 1, "seed": 5,
            "generator": {"kind": "trendy", "label": "c", "vol_annual": 0.1, "n_periods": 10, "count": 3,
                          "drift_state_vol_annual": 0.1, "drift_persistence_halflife_days": 100}}"#;
        let f = file(text);
        let cfg: SynthRunConfig = f.parse().unwrap();
        let srcs = cfg.generator.resolve(&f, 0, cfg.seed).unwrap();
        let labels: Vec<&str> = srcs.iter().map(ResolvedSource::label).collect();
        assert_eq!(labels, ["c_1", "c_2", "c_3"]);
        let seeds: BTreeSet<u64> = srcs
            .iter()
            .map(|s| match s {
                ResolvedSource::Synthetic { generator: Generator::Trendy(p), .. } => p.base.seed,
                _ => panic!(),
            })
            .collect();
        assert_eq!(seeds.len(), 3);
    }

    #[test]
    fn jump_blocks_need_jump_fields() {
        let text = "{\"schema_version\": 1,\n\"generator\": {\"kind\": \"jump\", \"label\": \"j\", \"vol_annual\": 0.1, \"n_periods\": 10}}";
        let f = file(text);
        let cfg: SynthRunConfig = f.parse().unwrap();
        let err = cfg.generator.resolve(&f, 0, 0).unwrap_err();
        assert!(err.to_string().contains("jump_intensity_annual"), "{err}");
        assert!(err.to_string().contains("cfg.json:2:"), "{err}");
    }

    #[test]
    fn long_maturity_is_rejected_with_its_line() {
        let text = r#"{
  "schema_version": 1,
  "strangle": {"vol_premium": 0.1},
  "taus_years": [0.5, 2.0],
  "markets": [{"kind": "gbm", "label": "m", "vol_annual": 0.2, "n_periods": 50}],
  "n_paths": 1
}"#;
        let f = file(text);
        let cfg: StrangleRunConfig = f.parse().unwrap();
        let err = cfg.resolve(&f).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("cfg.json:4:") && msg.contains("[1/12, 1]"), "{msg}");
    }

    #[test]
    fn bad_and_duplicate_labels() {
        let text = r#"{"schema_version": 1, "sources": [
            {"kind": "gbm", "label": "x", "vol_annual": 0.2, "n_periods": 50},
            {"kind": "gbm", "label": "x", "vol_annual": 0.2, "n_periods": 50}]}"#;
        let f = file(text);
        let cfg: TrendRunConfig = f.parse().unwrap();
        assert!(cfg.resolve_sources(&f).unwrap_err().to_string().contains("duplicate"));
        let text = r#"{"schema_version": 1, "sources": [{"kind": "gbm", "label": "a/b", "vol_annual": 0.2, "n_periods": 50}]}"#;
        let f = file(text);
        let cfg: TrendRunConfig = f.parse().unwrap();
        assert!(cfg.resolve_sources(&f).is_err());
    }
}
