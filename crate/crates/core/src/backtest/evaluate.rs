//! Weekly scoring of predictions against targets.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;

use super::cv::{CvScheme, Period};
use super::metrics::{spearman_corr, strategy_report, CorrSeries, StrategyReport};
use crate::dataset::TargetTable;
use crate::error::{invalid, Error, Result};

/// Model scores keyed by week and asset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictionTable {
    weeks: BTreeMap<NaiveDate, BTreeMap<String, f64>>,
}

impl PredictionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, week: NaiveDate, asset: &str, score: f64) -> Result<()> {
        if !score.is_finite() {
            return Err(invalid(alloc::format!("non-finite score for {asset} on {week}")));
        }
        if self.weeks.entry(week).or_default().insert(String::from(asset), score).is_some() {
            return Err(invalid(alloc::format!("duplicate score for {asset} on {week}")));
        }
        Ok(())
    }

    pub fn get(&self, week: NaiveDate, asset: &str) -> Option<f64> {
        self.weeks.get(&week)?.get(asset).copied()
    }

    pub fn len(&self) -> usize {
        self.weeks.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (NaiveDate, &str, f64)> {
        self.weeks.iter().flat_map(|(w, m)| m.iter().map(move |(a, v)| (*w, a.as_str(), *v)))
    }
}

/// Outcome of [`evaluate_predictions`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: StrategyReport,
    pub series: CorrSeries,
    /// Weeks with fewer than two assets carrying both a score and a target.
    pub skipped_weeks: usize,
    /// Weeks where one side was constant (scored as 0).
    pub degenerate_weeks: usize,
}

/// Per-week Spearman correlation over the weeks of `predictions` that fall
/// in `period` of `scheme`, summarised as a [`StrategyReport`].
pub fn evaluate_predictions(
    predictions: &PredictionTable,
    targets: &TargetTable,
    scheme: &CvScheme,
    period: Period,
) -> Result<Evaluation> {
    if !matches!(period, Period::Validation | Period::Test) {
        return Err(Error::Config(alloc::format!("cannot evaluate on {period:?} weeks")));
    }
    let (mut weeks, mut corrs) = (Vec::new(), Vec::new());
    let (mut skipped, mut degenerate) = (0, 0);
    let (mut p, mut t) = (Vec::new(), Vec::new());
    for (week, scores) in predictions.weeks.iter().filter(|(w, _)| scheme.period_of(**w) == period) {
        p.clear();
        t.clear();
        if let Some(truth) = targets.week(*week) {
            for (asset, score) in scores {
                if let Some(y) = truth.get(asset) {
                    p.push(*score);
                    t.push(*y);
                }
            }
        }
        if p.len() < 2 {
            skipped += 1;
            continue;
        }
        let s = spearman_corr(&p, &t)?;
        degenerate += usize::from(s.degenerate);
        weeks.push(*week);
        corrs.push(s.corr);
    }
    if corrs.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let report = strategy_report(&corrs)?;
    Ok(Evaluation { report, series: CorrSeries::new(weeks, corrs)?, skipped_weeks: skipped, degenerate_weeks: degenerate })
}
