//! Pipeline configuration: defaults, TOML loading, validation and digest.

use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tabfeat_core::backtest::{make_cv_schemes, CvScheme, DEFAULT_SCHEDULE};
use tabfeat_core::dataset::DEFAULT_QUANTILES;
use tabfeat_core::sentiment::{SentimentWindows, DEFAULT_CATEGORY_COUNT};
use tabfeat_core::series::DEFAULT_WINDOWS;
use tabfeat_core::signature::DEFAULT_DEPTH;

use crate::error::{validation, PipelineError, Result};

fn ymd(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).expect("valid date")
}

/// Every knob that can change a pipeline output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// First calendar day of generated or accepted data.
    pub start: NaiveDate,
    /// Last calendar day.
    pub end: NaiveDate,
    pub windows: Vec<usize>,
    pub depth: usize,
    pub ma_lags: [usize; 2],
    pub categories: usize,
    pub category_start: NaiveDate,
    pub category_end: NaiveDate,
    /// Rows of (train start, train end, validation start, validation end,
    /// test start, test end).
    pub cv_schemes: Vec<[NaiveDate; 6]>,
    pub quantiles: usize,
    pub ridge_lambda: f64,
    pub seed: u64,
    pub synth: SynthConfig,
}

/// Parameters of the synthetic data generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub assets: usize,
    /// Daily log drift.
    pub drift: f64,
    /// Daily log volatility.
    pub volatility: f64,
    /// Mean news events per asset per trading day.
    pub events_per_day: f64,
    pub event_categories: usize,
    pub financial_columns: usize,
    /// Probability that a financial cell is missing.
    pub missing_rate: f64,
    /// Probability that an asset is left out of the universe in a week.
    pub universe_dropout: f64,
    /// Weight of the planted financial signal in the target, in [0, 1].
    pub signal_strength: f64,
    /// Forward-return horizon of the target in trading days.
    pub horizon: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            assets: 100,
            drift: 0.0002,
            volatility: 0.02,
            events_per_day: 0.2,
            event_categories: 250,
            financial_columns: 204,
            missing_rate: 0.02,
            universe_dropout: 0.03,
            signal_strength: 0.0,
            horizon: 20,
        }
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            start: ymd(2001, 11, 1),
            end: ymd(2021, 12, 31),
            windows: DEFAULT_WINDOWS.to_vec(),
            depth: DEFAULT_DEPTH,
            ma_lags: [5, 21],
            categories: DEFAULT_CATEGORY_COUNT,
            category_start: ymd(2003, 1, 31),
            category_end: ymd(2015, 12, 25),
            cv_schemes: DEFAULT_SCHEDULE.to_vec(),
            quantiles: DEFAULT_QUANTILES,
            ridge_lambda: 1.0,
            seed: 0,
            synth: SynthConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        toml::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.start >= self.end {
            return Err(validation("config: start must precede end"));
        }
        if self.windows.is_empty() || self.windows.iter().any(|w| *w < 2) {
            return Err(validation("config: windows must be non-empty and each at least 2"));
        }
        if self.windows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(validation("config: windows must be strictly ascending"));
        }
        if self.depth == 0 {
            return Err(validation("config: depth must be at least 1"));
        }
        if self.ma_lags.iter().any(|l| *l < 2) {
            return Err(validation("config: moving-average lags must be at least 2"));
        }
        if self.category_start > self.category_end {
            return Err(validation("config: category selection window is empty"));
        }
        if self.quantiles < 2 {
            return Err(validation("config: quantiles must be at least 2"));
        }
        if !(self.ridge_lambda > 0.0) || !self.ridge_lambda.is_finite() {
            return Err(validation("config: ridge_lambda must be positive"));
        }
        let s = &self.synth;
        if !(0.0..=1.0).contains(&s.signal_strength) {
            return Err(validation("config: synth.signal_strength must lie in [0, 1]"));
        }
        if s.assets < 2 || s.horizon == 0 || !(s.volatility > 0.0) || s.events_per_day < 0.0 {
            return Err(validation("config: synth needs >= 2 assets, horizon >= 1, volatility > 0, events_per_day >= 0"));
        }
        if !(0.0..1.0).contains(&s.missing_rate) || !(0.0..1.0).contains(&s.universe_dropout) {
            return Err(validation("config: synth rates must lie in [0, 1)"));
        }
        make_cv_schemes(&self.cv_schemes)?;
        Ok(())
    }

    pub fn schemes(&self) -> Result<Vec<CvScheme>> {
        Ok(make_cv_schemes(&self.cv_schemes)?)
    }

    pub fn sentiment_windows(&self) -> SentimentWindows {
        SentimentWindows { overall: self.windows.clone(), category: *self.windows.last().expect("validated") }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}
