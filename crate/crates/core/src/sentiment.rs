//! News sentiment aggregation: event filtering, daily averages, overall
//! moving averages and per-category long-horizon averages.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::error::{invalid, Result};
use crate::features::{column_name, Family, FeatureRow};
use crate::series::TradingCalendar;

/// Default number of categories carried as features.
pub const DEFAULT_CATEGORY_COUNT: usize = 200;

/// A pre-scored news item about one asset.
#[derive(Debug, Clone, PartialEq)]
pub struct NewsEvent {
    pub date: NaiveDate,
    pub asset: String,
    /// 0..=100.
    pub relevance: u8,
    pub similar_days: f64,
    /// In `[-1, 1]`.
    pub sentiment: f64,
    pub category: String,
}

impl NewsEvent {
    pub fn validate(&self) -> Result<()> {
        if self.relevance > 100 {
            return Err(invalid(alloc::format!("relevance {} outside 0..=100", self.relevance)));
        }
        if !(self.similar_days >= 0.0) || !self.similar_days.is_finite() {
            return Err(invalid(alloc::format!("similar days {} must be finite and >= 0", self.similar_days)));
        }
        if !(-1.0..=1.0).contains(&self.sentiment) {
            return Err(invalid(alloc::format!("sentiment {} outside [-1, 1]", self.sentiment)));
        }
        Ok(())
    }

    /// Fully relevant and not a near-repeat of recent news.
    pub fn passes_filter(&self) -> bool {
        self.relevance == 100 && self.similar_days > 1.0
    }
}

/// Events passing [`NewsEvent::passes_filter`], in input order.
pub fn filter_events(events: &[NewsEvent]) -> Vec<NewsEvent> {
    events.iter().filter(|e| e.passes_filter()).cloned().collect()
}

/// Trading-day index an event counts towards: its own date, or the next
/// trading day when it falls on a non-trading day. Events before the first
/// or after the last trading day map to `None`.
pub fn event_day(calendar: &TradingCalendar, date: NaiveDate) -> Option<usize> {
    let days = calendar.days();
    if days.first().is_none_or(|d| date < *d) {
        return None;
    }
    let i = days.partition_point(|d| *d < date);
    (i < days.len()).then_some(i)
}

/// Mean sentiment per trading day; `None` on days without events.
pub fn daily_average_sentiment(events: &[NewsEvent], calendar: &TradingCalendar) -> Vec<Option<f64>> {
    let mut sums = vec![(0.0, 0usize); calendar.len()];
    for e in events {
        if let Some(i) = event_day(calendar, e.date) {
            sums[i].0 += e.sentiment;
            sums[i].1 += 1;
        }
    }
    sums.into_iter().map(|(s, n)| (n > 0).then(|| s / n as f64)).collect()
}

/// Outcome of [`select_top_categories`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySelection {
    pub categories: Vec<String>,
    /// Fewer distinct categories than requested were seen.
    pub short: bool,
}

/// The `n` most frequent categories among events dated in `[start, end]`,
/// ties broken by name.
pub fn select_top_categories(
    events: &[NewsEvent],
    start: NaiveDate,
    end: NaiveDate,
    n: usize,
) -> Result<CategorySelection> {
    if start > end {
        return Err(invalid("category selection window is empty"));
    }
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for e in events.iter().filter(|e| e.date >= start && e.date <= end) {
        *counts.entry(e.category.as_str()).or_default() += 1;
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let short = ranked.len() < n;
    ranked.truncate(n);
    Ok(CategorySelection { categories: ranked.into_iter().map(|(c, _)| String::from(c)).collect(), short })
}

/// Horizons of the sentiment family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentimentWindows {
    /// Moving averages of the overall daily series (the raw daily value is
    /// always included as window 1).
    pub overall: Vec<usize>,
    pub category: usize,
}

impl Default for SentimentWindows {
    fn default() -> Self {
        Self { overall: vec![21, 63, 252], category: 252 }
    }
}

impl SentimentWindows {
    /// Trading days of history needed for a row.
    pub fn history(&self) -> usize {
        self.overall.iter().copied().chain([self.category, 1]).max().unwrap_or(1)
    }
}

pub fn sentiment_feature_names(windows: &SentimentWindows, n_categories: usize) -> Vec<String> {
    let mut names: Vec<String> = core::iter::once(1)
        .chain(windows.overall.iter().copied())
        .map(|w| column_name(Family::Sentiment, "overall", w))
        .collect();
    names.extend(
        (0..n_categories)
            .map(|c| column_name(Family::Sentiment, &alloc::format!("cat_{c:03}"), windows.category)),
    );
    names
}

/// Daily sentiment of one asset aligned to a calendar.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentSeries {
    overall: Vec<Option<f64>>,
    /// Per trading day, `(category index, mean sentiment)` for categories
    /// with events that day, in index order.
    by_day: Vec<Vec<(usize, f64)>>,
    n_categories: usize,
}

impl SentimentSeries {
    /// `events` are the filtered events of a single asset.
    pub fn new(events: &[NewsEvent], calendar: &TradingCalendar, categories: &[String]) -> Self {
        let index: BTreeMap<&str, usize> =
            categories.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let mut acc: Vec<BTreeMap<usize, (f64, usize)>> = vec![BTreeMap::new(); calendar.len()];
        for e in events {
            if let (Some(day), Some(&cat)) = (event_day(calendar, e.date), index.get(e.category.as_str())) {
                let slot = acc[day].entry(cat).or_insert((0.0, 0));
                slot.0 += e.sentiment;
                slot.1 += 1;
            }
        }
        let by_day = acc
            .into_iter()
            .map(|m| m.into_iter().map(|(c, (s, n))| (c, s / n as f64)).collect())
            .collect();
        Self { overall: daily_average_sentiment(events, calendar), by_day, n_categories: categories.len() }
    }

    pub fn len(&self) -> usize {
        self.overall.len()
    }

    pub fn is_empty(&self) -> bool {
        self.overall.is_empty()
    }

    pub fn overall(&self) -> &[Option<f64>] {
        &self.overall
    }

    /// Zero-filled daily series of one category.
    pub fn category_daily(&self, category: usize) -> Vec<f64> {
        self.by_day
            .iter()
            .map(|d| d.iter().find(|(c, _)| *c == category).map_or(0.0, |(_, v)| *v))
            .collect()
    }

    /// Mean of the days with events among the trailing `w` days ending at `t`.
    fn overall_ma(&self, t: usize, w: usize) -> Option<f64> {
        let (mut s, mut n) = (0.0, 0usize);
        for v in self.overall[t + 1 - w..=t].iter().flatten() {
            s += v;
            n += 1;
        }
        (n > 0).then(|| s / n as f64)
    }

    /// Features as of trading day `t`; `None` with less than
    /// `windows.history()` days of history.
    pub fn feature_row(&self, t: usize, windows: &SentimentWindows) -> Option<FeatureRow> {
        if t >= self.len() || t + 1 < windows.history() {
            return None;
        }
        let mut values = Vec::with_capacity(1 + windows.overall.len() + self.n_categories);
        values.push(self.overall[t]);
        values.extend(windows.overall.iter().map(|w| self.overall_ma(t, *w)));
        let w = windows.category;
        let mut sums = vec![0.0; self.n_categories];
        for day in &self.by_day[t + 1 - w..=t] {
            for (c, v) in day {
                sums[*c] += v;
            }
        }
        values.extend(sums.into_iter().map(|s| Some(s / w as f64)));
        Some(FeatureRow { values })
    }
}

/// Sentiment features of one asset as of `as_of`, which must be a trading
/// day. `events` are the asset's filtered events.
pub fn sentiment_feature_row(
    events: &[NewsEvent],
    calendar: &TradingCalendar,
    as_of: NaiveDate,
    categories: &[String],
    windows: &SentimentWindows,
) -> Option<FeatureRow> {
    let t = calendar.index_of(as_of)?;
    SentimentSeries::new(events, calendar, categories).feature_row(t, windows)
}
