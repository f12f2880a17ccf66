//! In-memory pipeline stages. Each stage is a pure function of its inputs
//! and the configuration; the CLI wraps them with file I/O.

use std::collections::BTreeMap;
use std::sync::Arc;

use chrono::NaiveDate;
use rayon::prelude::*;
use tabfeat_core::backtest::{
    evaluate_predictions, fit_ridge, CvScheme, Evaluation, Period, PredictionTable, RidgeModel,
};
use tabfeat_core::catch22::{catch22_feature_names, catch22_feature_row};
use tabfeat_core::dataset::{
    assemble_week, rank_quantize, resample_financials, DatasetWeek, FeatureTable, MonthlyTable, TargetTable,
};
use tabfeat_core::features::{column_name, Family};
use tabfeat_core::moments::{moment_feature_names, moment_feature_row};
use tabfeat_core::sentiment::{
    filter_events, select_top_categories, sentiment_feature_names, CategorySelection, NewsEvent, SentimentSeries,
};
use tabfeat_core::series::{average_price, build_price_path, OhlcBar, TradingCalendar};
use tabfeat_core::signature::{signature_feature_names, signature_feature_row, LyndonBasis};

use crate::config::PipelineConfig;
use crate::error::{validation, Result};
use crate::io::{PriceData, Universe};
use crate::table::WideTable;

/// Weeks processed together when assembling or normalising, bounding the
/// transient memory of the parallel stages.
const WEEK_CHUNK: usize = 32;

/// Union of all assets' trading days.
pub fn global_calendar(prices: &PriceData) -> TradingCalendar {
    TradingCalendar::from_unsorted(prices.values().flat_map(|b| b.iter().map(|x| x.date)).collect())
}

/// Week anchors within the configured date range.
pub fn feature_weeks(calendar: &TradingCalendar, config: &PipelineConfig) -> Vec<NaiveDate> {
    calendar.anchors().filter(|d| *d >= config.start && *d <= config.end).collect()
}

pub fn feature_names(family: Family, config: &PipelineConfig, n_categories: usize) -> Result<Vec<String>> {
    Ok(match family {
        Family::Stats => moment_feature_names(&config.windows),
        Family::Catch22 => catch22_feature_names(&config.windows),
        Family::Signature => signature_feature_names(&LyndonBasis::new(3, config.depth), &config.windows),
        Family::Sentiment => sentiment_feature_names(&config.sentiment_windows(), n_categories),
        Family::Financials => return Err(validation("financials are read from the monthly file, not computed")),
    })
}

/// Rows of one price-derived family with the number of `(asset, week)`
/// pairs skipped for short history.
pub struct FamilyFeatures {
    pub table: WideTable,
    pub skipped: usize,
}

enum PriceInput {
    Prices(Vec<f64>),
    LogPrices(Vec<f64>),
    Path(Vec<f64>, LyndonBasis),
}

fn asset_rows(
    family: Family,
    asset: &str,
    bars: &[OhlcBar],
    weeks: &[NaiveDate],
    config: &PipelineConfig,
) -> Result<(Vec<(NaiveDate, Vec<Option<f64>>)>, usize)> {
    let windows = &config.windows;
    let longest = *windows.last().expect("validated");
    let input = match family {
        Family::Stats => PriceInput::Prices(bars.iter().map(average_price).collect::<std::result::Result<_, _>>()?),
        Family::Catch22 => PriceInput::LogPrices(
            bars.iter().map(|b| average_price(b).map(f64::ln)).collect::<std::result::Result<_, _>>()?,
        ),
        Family::Signature => {
            let lag = config.ma_lags[0].max(config.ma_lags[1]);
            if bars.len() < lag {
                return Ok((Vec::new(), weeks.len()));
            }
            let path = build_price_path(asset, bars, config.ma_lags)?;
            let mut flat = Vec::with_capacity(path.len() * 3);
            for t in 0..path.len() {
                flat.extend((0..3).map(|c| path.get(t, c).unwrap_or(f64::NAN)));
            }
            PriceInput::Path(flat, LyndonBasis::new(3, config.depth))
        }
        _ => unreachable!("price families only"),
    };
    let (mut rows, mut skipped) = (Vec::new(), 0);
    for &week in weeks {
        let Ok(i) = bars.binary_search_by_key(&week, |b| b.date) else {
            skipped += 1;
            continue;
        };
        let row = match &input {
            PriceInput::Prices(p) => moment_feature_row(&p[..=i], windows),
            PriceInput::LogPrices(p) => catch22_feature_row(&p[..=i], windows),
            PriceInput::Path(flat, basis) => {
                if i + 1 < longest {
                    None
                } else {
                    let span = &flat[(i + 1 - longest) * 3..(i + 1) * 3];
                    if span.iter().any(|v| v.is_nan()) {
                        None
                    } else {
                        signature_feature_row(span, basis, windows)
                    }
                }
            }
        };
        match row {
            Some(r) => rows.push((week, r.values)),
            None => skipped += 1,
        }
    }
    Ok((rows, skipped))
}

/// Stats, catch22 or signature features for every asset at every week
/// anchor with enough history. Rows are ordered by asset, then week.
pub fn price_features(family: Family, prices: &PriceData, config: &PipelineConfig) -> Result<FamilyFeatures> {
    if !matches!(family, Family::Stats | Family::Catch22 | Family::Signature) {
        return Err(validation(format!("{family} is not a price-derived family")));
    }
    let weeks = feature_weeks(&global_calendar(prices), config);
    let columns: Arc<[String]> = feature_names(family, config, 0)?.into();
    let per_asset: Vec<_> = prices
        .par_iter()
        .map(|(asset, bars)| asset_rows(family, asset, bars, &weeks, config))
        .collect::<Result<_>>()?;
    let mut table = WideTable::new(columns);
    let mut skipped = 0;
    for ((asset, _), (rows, s)) in prices.iter().zip(per_asset) {
        skipped += s;
        for (week, values) in rows {
            table.push(week, asset, values);
        }
    }
    Ok(FamilyFeatures { table, skipped })
}

/// Top categories among filtered events in the configured window.
pub fn select_categories(events: &[NewsEvent], config: &PipelineConfig) -> Result<CategorySelection> {
    Ok(select_top_categories(&filter_events(events), config.category_start, config.category_end, config.categories)?)
}

/// Sentiment features on the price calendar for every priced asset.
pub fn sentiment_features(
    prices: &PriceData,
    events: &[NewsEvent],
    categories: &[String],
    config: &PipelineConfig,
) -> Result<FamilyFeatures> {
    let calendar = global_calendar(prices);
    let windows = config.sentiment_windows();
    let weeks: Vec<usize> = feature_weeks(&calendar, config)
        .into_iter()
        .map(|d| calendar.index_of(d).expect("anchor is a trading day"))
        .collect();
    let mut by_asset: BTreeMap<&str, Vec<NewsEvent>> = prices.keys().map(|a| (a.as_str(), Vec::new())).collect();
    for e in filter_events(events) {
        if let Some(v) = by_asset.get_mut(e.asset.as_str()) {
            v.push(e);
        }
    }
    let columns: Arc<[String]> = sentiment_feature_names(&windows, categories.len()).into();
    let per_asset: Vec<Vec<(usize, Vec<Option<f64>>)>> = by_asset
        .par_iter()
        .map(|(_, ev)| {
            let series = SentimentSeries::new(ev, &calendar, categories);
            weeks.iter().filter_map(|&t| series.feature_row(t, &windows).map(|r| (t, r.values))).collect()
        })
        .collect();
    let mut table = WideTable::new(columns);
    let mut skipped = 0;
    for ((asset, _), rows) in by_asset.iter().zip(per_asset) {
        skipped += weeks.len() - rows.len();
        for (t, values) in rows {
            table.push(calendar.days()[t], asset, values);
        }
    }
    Ok(FamilyFeatures { table, skipped })
}

/// Joined feature rows over the universe, with per-family drop counts.
pub struct Assembled {
    pub table: WideTable,
    pub drops: BTreeMap<String, usize>,
}

fn financials_week(monthly: &MonthlyTable, columns: &Arc<[String]>, week: NaiveDate) -> Result<FeatureTable> {
    let t = resample_financials(monthly, &[week])?.pop().expect("one week requested");
    let rows = (0..t.n_rows()).map(|i| (t.assets()[i].clone(), t.row(i).to_vec())).collect();
    Ok(FeatureTable::new(week, columns.clone(), rows)?)
}

/// Inner join of the universe with every family for each universe week.
/// Families are joined in the order given, financials last.
pub fn assemble_dataset(
    families: &[(Family, &WideTable)],
    financials: Option<&MonthlyTable>,
    universe: &Universe,
) -> Result<Assembled> {
    let indexes: Vec<BTreeMap<NaiveDate, Vec<usize>>> = families.iter().map(|(_, t)| t.week_index()).collect();
    let fin_columns: Option<Arc<[String]>> = financials
        .map(|m| m.columns().iter().map(|c| column_name(Family::Financials, c, 1)).collect());
    let mut names: Vec<String> = families.iter().map(|(f, _)| f.to_string()).collect();
    if financials.is_some() {
        names.push(Family::Financials.to_string());
    }
    let weeks: Vec<(&NaiveDate, &Vec<String>)> = universe.iter().collect();
    let mut table: Option<WideTable> = None;
    let mut drops: BTreeMap<String, usize> = names.iter().map(|n| (n.clone(), 0)).collect();
    for chunk in weeks.chunks(WEEK_CHUNK) {
        let joined: Vec<_> = chunk
            .par_iter()
            .map(|(week, members)| {
                let week = **week;
                let mut parts = Vec::with_capacity(names.len());
                for ((_, t), idx) in families.iter().zip(&indexes) {
                    parts.push(t.feature_table(week, idx.get(&week).map_or(&[][..], Vec::as_slice))?);
                }
                if let (Some(m), Some(cols)) = (financials, &fin_columns) {
                    parts.push(financials_week(m, cols, week)?);
                }
                let refs: Vec<(&str, &FeatureTable)> = names.iter().map(String::as_str).zip(&parts).collect();
                Ok(assemble_week(week, &refs, members)?)
            })
            .collect::<Result<_>>()?;
        for w in joined {
            for (name, n) in &w.drops {
                *drops.get_mut(name).expect("known family") += n;
            }
            table.get_or_insert_with(|| WideTable::new(w.features.columns().clone())).push_feature_table(&w.features);
        }
    }
    let table = match table {
        Some(t) => t,
        None => {
            let mut cols: Vec<String> = families.iter().flat_map(|(_, t)| t.columns.iter().cloned()).collect();
            cols.extend(fin_columns.iter().flat_map(|c| c.iter().cloned()));
            WideTable::new(cols.into())
        }
    };
    Ok(Assembled { table, drops })
}

/// Quantised dataset and the number of (week, column) pairs left unranked
/// for having too few values.
pub struct Normalized {
    pub table: WideTable,
    pub sparse: usize,
}

/// Per-week rank quantisation of every column.
pub fn normalize_dataset(dataset: &WideTable, quantiles: usize) -> Result<Normalized> {
    let groups: Vec<(NaiveDate, Vec<usize>)> = dataset.week_index().into_iter().collect();
    let mut table = WideTable::new(dataset.columns.clone());
    let mut sparse = 0;
    for chunk in groups.chunks(WEEK_CHUNK) {
        let done: Vec<_> = chunk
            .par_iter()
            .map(|(week, rows)| Ok(rank_quantize(&dataset.feature_table(*week, rows)?, quantiles)?))
            .collect::<Result<_>>()?;
        for q in done {
            sparse += q.sparse_columns.len();
            table.push_quantized_table(&q);
        }
    }
    Ok(Normalized { table, sparse })
}

/// Quantised weeks falling in `period` of `scheme`, joined with targets.
pub fn dataset_weeks(
    quantized: &WideTable,
    targets: &TargetTable,
    scheme: &CvScheme,
    period: Period,
) -> Result<Vec<DatasetWeek>> {
    quantized
        .week_index()
        .into_iter()
        .filter(|(w, _)| scheme.period_of(*w) == period)
        .map(|(week, rows)| {
            let features = quantized.quantized_table(week, &rows)?;
            let targets =
                features.assets().iter().filter_map(|a| targets.get(week, a).map(|t| (a.clone(), t))).collect();
            Ok(DatasetWeek { features, targets, drops: Vec::new() })
        })
        .collect()
}

/// Ridge baseline fitted on the training weeks of `scheme`.
pub fn train_baseline(
    quantized: &WideTable,
    targets: &TargetTable,
    scheme: &CvScheme,
    lambda: f64,
) -> Result<RidgeModel> {
    let weeks = dataset_weeks(quantized, targets, scheme, Period::Train)?;
    if weeks.iter().all(|w| w.targets.is_empty()) {
        return Err(validation(format!("scheme {} has no training rows with targets", scheme.name)));
    }
    Ok(fit_ridge(&weeks, lambda)?)
}

/// Scores for every row of the quantised dataset.
pub fn predict(model: &RidgeModel, quantized: &WideTable) -> Result<PredictionTable> {
    let mut out = PredictionTable::new();
    for (week, rows) in quantized.week_index() {
        for (asset, score) in model.predict(&quantized.quantized_table(week, &rows)?)? {
            out.insert(week, &asset, score)?;
        }
    }
    Ok(out)
}

pub fn evaluate(
    predictions: &PredictionTable,
    targets: &TargetTable,
    scheme: &CvScheme,
    period: Period,
) -> Result<Evaluation> {
    Ok(evaluate_predictions(predictions, targets, scheme, period)?)
}
