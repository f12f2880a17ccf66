//! Synthetic market data with a tunable planted signal.
//!
//! Prices follow a geometric random walk on a weekday calendar. Targets are
//! cross-sectional ranks (scaled to `[0, 1]`) of
//! `s * z(fin_000) + (1 - s) * z(forward log return)`, where `fin_000` is the
//! latest month-end value strictly before the week and `s` is the signal
//! strength. Every random stream is derived from the seed and a stream id,
//! so output does not depend on thread scheduling.

use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::{Datelike, NaiveDate, Weekday};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Poisson, StandardNormal, Zipf};
use rayon::prelude::*;
use tabfeat_core::dataset::{MonthlyTable, TargetTable};
use tabfeat_core::ranks::average_ranks;
use tabfeat_core::sentiment::NewsEvent;
use tabfeat_core::series::{OhlcBar, TradingCalendar};

use crate::config::PipelineConfig;
use crate::error::{validation, Result};
use crate::io::{PriceData, Universe};

const PRICES: u64 = 1;
const EVENTS: u64 = 2;
const FINANCIALS: u64 = 3;
const UNIVERSE: u64 = 4;

fn rng(seed: u64, kind: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((kind << 40) | index);
    r
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let s = 10f64.powi(decimals);
    (v * s).round() / s
}

pub fn asset_id(i: usize) -> String {
    format!("A{i:04}")
}

pub fn category_name(i: usize) -> String {
    format!("topic_{i:03}")
}

pub fn financial_column(i: usize) -> String {
    format!("fin_{i:03}")
}

/// Weekdays in `[start, end]` except 1 January, 4 July and 25 December.
pub fn weekday_calendar(start: NaiveDate, end: NaiveDate) -> TradingCalendar {
    let days = start
        .iter_days()
        .take_while(|d| *d <= end)
        .filter(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun))
        .filter(|d| !matches!((d.month(), d.day()), (1, 1) | (7, 4) | (12, 25)))
        .collect();
    TradingCalendar::from_unsorted(days)
}

/// Last calendar day of each month ending in `[start, end]`.
pub fn month_ends(start: NaiveDate, end: NaiveDate) -> Vec<NaiveDate> {
    start
        .iter_days()
        .take_while(|d| *d <= end)
        .filter(|d| d.succ_opt().is_none_or(|n| n.month() != d.month()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub prices: PriceData,
    pub events: Vec<NewsEvent>,
    pub financial_columns: Vec<String>,
    /// `(month_end, asset, values)`, month-major.
    pub financials: Vec<(NaiveDate, String, Vec<Option<f64>>)>,
    pub universe: Universe,
    pub targets: TargetTable,
}

fn price_bars(config: &PipelineConfig, calendar: &TradingCalendar, asset: usize) -> Vec<OhlcBar> {
    let s = &config.synth;
    let mut r = rng(config.seed, PRICES, asset as u64);
    let mut close: f64 = round_to(20.0 * (0.5 * r.sample::<f64, _>(StandardNormal)).exp(), 4).max(0.01);
    calendar
        .days()
        .iter()
        .map(|&date| {
            let z: [f64; 4] = std::array::from_fn(|_| r.sample(StandardNormal));
            let open = close * (0.25 * s.volatility * z[0]).exp();
            let next = close * (s.drift + s.volatility * z[1]).exp();
            let high = open.max(next) * (0.5 * s.volatility * z[2].abs()).exp();
            let low = open.min(next) * (-0.5 * s.volatility * z[3].abs()).exp();
            let bar = OhlcBar {
                date,
                open: round_to(open, 4).max(1e-4),
                high: round_to(high, 4).max(1e-4),
                low: round_to(low, 4).max(1e-4),
                close: round_to(next, 4).max(1e-4),
            };
            close = bar.close;
            bar
        })
        .collect()
}

fn asset_events(config: &PipelineConfig, calendar: &TradingCalendar, asset: usize) -> Result<Vec<NewsEvent>> {
    let s = &config.synth;
    if s.events_per_day <= 0.0 || s.event_categories == 0 {
        return Ok(Vec::new());
    }
    let mut r = rng(config.seed, EVENTS, asset as u64);
    let count = Poisson::new(s.events_per_day).map_err(|e| validation(format!("synth events: {e}")))?;
    let topic = Zipf::new(s.event_categories as f64, 1.0).map_err(|e| validation(format!("synth events: {e}")))?;
    let mut out = Vec::new();
    for &date in calendar.days() {
        let n = r.sample(count) as usize;
        for _ in 0..n {
            let relevance = if r.random::<f64>() < 0.75 { 100 } else { r.random_range(10..100) };
            out.push(NewsEvent {
                date,
                asset: asset_id(asset),
                relevance,
                similar_days: round_to(r.random_range(0.0..30.0), 2),
                sentiment: round_to(r.random_range(-1.0..=1.0), 4),
                category: category_name(r.sample(topic) as usize - 1),
            });
        }
    }
    Ok(out)
}

fn asset_financials(config: &PipelineConfig, months: &[NaiveDate], asset: usize) -> Vec<Vec<Option<f64>>> {
    let s = &config.synth;
    let mut r = rng(config.seed, FINANCIALS, asset as u64);
    let mut state: Vec<f64> = (0..s.financial_columns).map(|_| r.sample(StandardNormal)).collect();
    months
        .iter()
        .map(|_| {
            state
                .iter_mut()
                .enumerate()
                .map(|(c, x)| {
                    *x = 0.9 * *x + 0.4359 * r.sample::<f64, _>(StandardNormal);
                    let missing = r.random::<f64>() < s.missing_rate;
                    (c == 0 || !missing).then(|| round_to(*x, 6))
                })
                .collect()
        })
        .collect()
}

fn zscores(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    x.iter().map(|v| if sd > 0.0 { (v - mean) / sd } else { 0.0 }).collect()
}

pub fn generate(config: &PipelineConfig) -> Result<SynthData> {
    config.validate()?;
    let s = &config.synth;
    let calendar = weekday_calendar(config.start, config.end);
    if calendar.len() <= s.horizon {
        return Err(validation("synth: calendar is shorter than the target horizon"));
    }
    let months = month_ends(config.start, config.end);
    let assets: Vec<usize> = (0..s.assets).collect();

    let bars: Vec<Vec<OhlcBar>> = assets.par_iter().map(|&a| price_bars(config, &calendar, a)).collect();
    let mut events: Vec<NewsEvent> = assets
        .par_iter()
        .map(|&a| asset_events(config, &calendar, a))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    events.sort_by(|a, b| (a.date, &a.asset).cmp(&(b.date, &b.asset)));
    let fin: Vec<Vec<Vec<Option<f64>>>> =
        assets.par_iter().map(|&a| asset_financials(config, &months, a)).collect();

    let financial_columns: Vec<String> = (0..s.financial_columns).map(financial_column).collect();
    let mut monthly = MonthlyTable::new(financial_columns.iter().cloned().collect::<Arc<[String]>>());
    let mut financials = Vec::with_capacity(months.len() * s.assets);
    for (m, &month_end) in months.iter().enumerate() {
        for &a in &assets {
            monthly.insert(&asset_id(a), month_end, fin[a][m].clone())?;
            financials.push((month_end, asset_id(a), fin[a][m].clone()));
        }
    }

    let mut universe: Universe = BTreeMap::new();
    let mut ur = rng(config.seed, UNIVERSE, 0);
    for week in calendar.anchors() {
        let members: Vec<String> =
            assets.iter().filter(|_| ur.random::<f64>() >= s.universe_dropout).map(|&a| asset_id(a)).collect();
        universe.insert(week, members);
    }

    let mut targets = TargetTable::new();
    for &t in calendar.anchor_indices() {
        if t + s.horizon >= calendar.len() {
            continue;
        }
        let week = calendar.days()[t];
        let mut ids = Vec::new();
        let (mut fwd, mut sig) = (Vec::new(), Vec::new());
        for &a in &assets {
            let id = asset_id(a);
            let latest = monthly.latest_before(&id, week).and_then(|(_, v)| v.first().copied().flatten());
            let signal = match (s.signal_strength > 0.0, latest) {
                (true, Some(v)) => v,
                (true, None) => continue,
                (false, _) => 0.0,
            };
            fwd.push((bars[a][t + s.horizon].close / bars[a][t].close).ln());
            sig.push(signal);
            ids.push(id);
        }
        if ids.len() < 2 {
            continue;
        }
        let (zf, zs) = (zscores(&fwd), zscores(&sig));
        let score: Vec<f64> =
            zf.iter().zip(&zs).map(|(f, g)| s.signal_strength * g + (1.0 - s.signal_strength) * f).collect();
        let n = score.len() as f64;
        for (id, rank) in ids.iter().zip(average_ranks(&score)) {
            targets.insert(week, id, (rank - 1.0) / (n - 1.0))?;
        }
    }

    let prices = assets.iter().map(|&a| asset_id(a)).zip(bars).collect();
    Ok(SynthData { prices, events, financial_columns, financials, universe, targets })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> PipelineConfig {
        let mut c = PipelineConfig {
            start: NaiveDate::from_ymd_opt(2010, 1, 1).unwrap(),
            end: NaiveDate::from_ymd_opt(2010, 6, 30).unwrap(),
            ..Default::default()
        };
        c.synth.assets = 5;
        c.synth.financial_columns = 3;
        c
    }

    #[test]
    fn calendar_skips_weekends_and_holidays() {
        let cal = weekday_calendar(NaiveDate::from_ymd_opt(2010, 12, 24).unwrap(), NaiveDate::from_ymd_opt(2011, 1, 4).unwrap());
        let days: Vec<String> = cal.days().iter().map(|d| d.to_string()).collect();
        assert_eq!(days, ["2010-12-24", "2010-12-27", "2010-12-28", "2010-12-29", "2010-12-30", "2010-12-31", "2011-01-03", "2011-01-04"]);
        let ends = month_ends(NaiveDate::from_ymd_opt(2012, 1, 15).unwrap(), NaiveDate::from_ymd_opt(2012, 3, 31).unwrap());
        assert_eq!(ends.iter().map(|d| d.to_string()).collect::<Vec<_>>(), ["2012-01-31", "2012-02-29", "2012-03-31"]);
    }

    #[test]
    fn generation_is_seeded() {
        let c = small();
        let a = generate(&c).unwrap();
        assert_eq!(a, generate(&c).unwrap());
        let other = generate(&PipelineConfig { seed: 1, ..c }).unwrap();
        assert_ne!(a.prices, other.prices);
        for bars in a.prices.values() {
            assert!(bars.iter().all(|b| b.validate().is_ok()));
        }
        assert!(a.targets.iter().all(|(_, _, v)| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn full_signal_targets_follow_first_financial() {
        let mut c = small();
        c.synth.signal_strength = 1.0;
        let d = generate(&c).unwrap();
        let week = d.targets.weeks().last().unwrap();
        let row = d.targets.week(week).unwrap();
        let mut monthly = MonthlyTable::new(d.financial_columns.iter().cloned().collect::<Arc<[String]>>());
        for (m, a, v) in &d.financials {
            monthly.insert(a, *m, v.clone()).unwrap();
        }
        let mut pairs: Vec<(f64, f64)> =
            row.iter().map(|(a, t)| (monthly.latest_before(a, week).unwrap().1[0].unwrap(), *t)).collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        assert!(pairs.windows(2).all(|w| w[0].1 < w[1].1));
    }
}
