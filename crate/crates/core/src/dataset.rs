//! Weekly cross-sectional tables: financial resampling, joins across feature
//! families, rank-quantile normalisation and targets.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use chrono::NaiveDate;

use crate::error::{invalid, Error, Result};
use crate::ranks::tie_groups;

/// Default number of quantile bins.
pub const DEFAULT_QUANTILES: usize = 5;

/// Fewest non-missing values a column needs in a week to be ranked.
pub const MIN_RANKED: usize = 5;

/// One week's cross-section: one row per asset, shared named columns and
/// per-cell missingness.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    week: NaiveDate,
    columns: Arc<[String]>,
    assets: Vec<String>,
    values: Vec<Option<f64>>,
}

impl FeatureTable {
    /// Rows are kept in the given order; asset ids must be unique.
    pub fn new(week: NaiveDate, columns: Arc<[String]>, rows: Vec<(String, Vec<Option<f64>>)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut assets = Vec::with_capacity(rows.len());
        let mut values = Vec::with_capacity(rows.len() * columns.len());
        for (asset, row) in rows {
            if row.len() != columns.len() {
                return Err(Error::ShapeMismatch {
                    expected: alloc::format!("{} columns", columns.len()),
                    got: alloc::format!("{} for asset {asset}", row.len()),
                });
            }
            if !seen.insert(asset.clone()) {
                return Err(invalid(alloc::format!("duplicate asset {asset} in week {week}")));
            }
            assets.push(asset);
            values.extend(row);
        }
        Ok(Self { week, columns, assets, values })
    }

    pub fn week(&self) -> NaiveDate {
        self.week
    }

    pub fn columns(&self) -> &Arc<[String]> {
        &self.columns
    }

    pub fn assets(&self) -> &[String] {
        &self.assets
    }

    pub fn n_rows(&self) -> usize {
        self.assets.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[Option<f64>] {
        &self.values[i * self.n_cols()..(i + 1) * self.n_cols()]
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.values[row * self.n_cols() + col]
    }

    pub fn position(&self, asset: &str) -> Option<usize> {
        self.assets.iter().position(|a| a == asset)
    }
}

/// Quantised counterpart of a [`FeatureTable`]; cells are centred bin
/// indices, `-2..=2` for five bins.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedTable {
    week: NaiveDate,
    columns: Arc<[String]>,
    assets: Vec<String>,
    values: Vec<Option<i8>>,
    /// Columns with fewer than [`MIN_RANKED`] values, emitted as all zero.
    pub sparse_columns: Vec<usize>,
}

impl QuantizedTable {
    pub fn new(week: NaiveDate, columns: Arc<[String]>, rows: Vec<(String, Vec<Option<i8>>)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut assets = Vec::with_capacity(rows.len());
        let mut values = Vec::with_capacity(rows.len() * columns.len());
        for (asset, row) in rows {
            if row.len() != columns.len() {
                return Err(Error::ShapeMismatch {
                    expected: alloc::format!("{} columns", columns.len()),
                    got: alloc::format!("{} for asset {asset}", row.len()),
                });
            }
            if !seen.insert(asset.clone()) {
                return Err(invalid(alloc::format!("duplicate asset {asset} in week {week}")));
            }
            assets.push(asset);
            values.extend(row);
        }
        Ok(Self { week, columns, assets, values, sparse_columns: Vec::new() })
    }

    pub fn week(&self) -> NaiveDate {
        self.week
    }

    pub fn columns(&self) -> &Arc<[String]> {
        &self.columns
    }

    pub fn assets(&self) -> &[String] {
        &self.assets
    }

    pub fn n_rows(&self) -> usize {
        self.assets.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> &[Option<i8>] {
        &self.values[i * self.n_cols()..(i + 1) * self.n_cols()]
    }

    pub fn get(&self, row: usize, col: usize) -> Option<i8> {
        self.values[row * self.n_cols() + col]
    }
}

/// Bin (`0..q`) of each value by rank. Bin edges sit at ranks `j * n / q`;
/// a tie group takes the bin of its lowest position, so a group straddling
/// an edge lands wholly in the lower bin. A single tie group covering every
/// value goes to the middle bin.
pub fn quantile_bins(x: &[f64], q: usize) -> Vec<usize> {
    let n = x.len();
    let groups = tie_groups(x);
    if n > 0 && groups[0].first == 1 && groups[0].last == n {
        return vec![q / 2; n];
    }
    groups
        .iter()
        .map(|g| (1..q).filter(|j| g.first * q > j * n).count())
        .collect()
}

/// Cross-sectional rank quantisation of every column, independently.
///
/// Missing cells stay missing and are excluded from ranking. A column with
/// fewer than [`MIN_RANKED`] values is emitted as zeros and listed in
/// [`QuantizedTable::sparse_columns`].
pub fn rank_quantize(table: &FeatureTable, q: usize) -> Result<QuantizedTable> {
    if q < 2 {
        return Err(Error::Config(alloc::format!("need at least 2 quantiles, got {q}")));
    }
    let centre = (q / 2) as i64;
    let (rows, cols) = (table.n_rows(), table.n_cols());
    let mut values = vec![None; rows * cols];
    let mut sparse_columns = Vec::new();
    let mut present = Vec::with_capacity(rows);
    let mut x = Vec::with_capacity(rows);
    for c in 0..cols {
        present.clear();
        x.clear();
        for r in 0..rows {
            if let Some(v) = table.get(r, c) {
                if v.is_nan() {
                    return Err(invalid(alloc::format!("NaN in column {}", table.columns[c])));
                }
                present.push(r);
                x.push(v);
            }
        }
        if x.len() < MIN_RANKED {
            if !x.is_empty() {
                sparse_columns.push(c);
            }
            for &r in &present {
                values[r * cols + c] = Some(0);
            }
            continue;
        }
        for (&r, b) in present.iter().zip(quantile_bins(&x, q)) {
            values[r * cols + c] = Some((b as i64 - centre) as i8);
        }
    }
    Ok(QuantizedTable {
        week: table.week,
        columns: table.columns.clone(),
        assets: table.assets.clone(),
        values,
        sparse_columns,
    })
}

/// Monthly observations keyed by asset and month-end.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonthlyTable {
    columns: Arc<[String]>,
    rows: BTreeMap<String, BTreeMap<NaiveDate, Vec<Option<f64>>>>,
}

impl MonthlyTable {
    pub fn new(columns: Arc<[String]>) -> Self {
        Self { columns, rows: BTreeMap::new() }
    }

    pub fn columns(&self) -> &Arc<[String]> {
        &self.columns
    }

    pub fn insert(&mut self, asset: &str, month_end: NaiveDate, values: Vec<Option<f64>>) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(Error::ShapeMismatch {
                expected: alloc::format!("{} columns", self.columns.len()),
                got: alloc::format!("{}", values.len()),
            });
        }
        let per_asset = self.rows.entry(String::from(asset)).or_default();
        if per_asset.insert(month_end, values).is_some() {
            return Err(invalid(alloc::format!("duplicate month-end {month_end} for asset {asset}")));
        }
        Ok(())
    }

    /// Latest observation dated strictly before `week`.
    pub fn latest_before(&self, asset: &str, week: NaiveDate) -> Option<(NaiveDate, &[Option<f64>])> {
        self.rows.get(asset)?.range(..week).next_back().map(|(d, v)| (*d, v.as_slice()))
    }

    pub fn assets(&self) -> impl Iterator<Item = &str> {
        self.rows.keys().map(String::as_str)
    }
}

/// Forward-fills monthly data to each week: every asset carries its latest
/// month-end strictly before the week. Assets without one are absent.
pub fn resample_financials(monthly: &MonthlyTable, weeks: &[NaiveDate]) -> Result<Vec<FeatureTable>> {
    weeks
        .iter()
        .map(|&week| {
            let rows = monthly
                .assets()
                .filter_map(|a| monthly.latest_before(a, week).map(|(_, v)| (String::from(a), v.to_vec())))
                .collect();
            FeatureTable::new(week, monthly.columns.clone(), rows)
        })
        .collect()
}

/// Values in `[0, 1]` keyed by week and asset.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TargetTable {
    weeks: BTreeMap<NaiveDate, BTreeMap<String, f64>>,
}

impl TargetTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, week: NaiveDate, asset: &str, value: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&value) {
            return Err(invalid(alloc::format!("target {value} for {asset} on {week} outside [0, 1]")));
        }
        if self.weeks.entry(week).or_default().insert(String::from(asset), value).is_some() {
            return Err(invalid(alloc::format!("duplicate target for {asset} on {week}")));
        }
        Ok(())
    }

    pub fn get(&self, week: NaiveDate, asset: &str) -> Option<f64> {
        self.weeks.get(&week)?.get(asset).copied()
    }

    pub fn week(&self, week: NaiveDate) -> Option<&BTreeMap<String, f64>> {
        self.weeks.get(&week)
    }

    pub fn weeks(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.weeks.keys().copied()
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

/// A feature table joined across families for one week.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledWeek {
    pub features: FeatureTable,
    /// Universe members dropped because the named family had no row.
    pub drops: Vec<(String, usize)>,
}

/// Inner join of the week's universe with every family. Rows follow the
/// universe order; columns are the families' columns in the order given.
pub fn assemble_week(
    week: NaiveDate,
    families: &[(&str, &FeatureTable)],
    universe: &[String],
) -> Result<AssembledWeek> {
    for (name, t) in families {
        if t.week != week {
            return Err(invalid(alloc::format!("family {name} is for week {}, expected {week}", t.week)));
        }
    }
    let columns: Arc<[String]> = families.iter().flat_map(|(_, t)| t.columns.iter().cloned()).collect();
    let index: Vec<BTreeMap<&str, usize>> = families
        .iter()
        .map(|(_, t)| t.assets.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect())
        .collect();
    let mut drops = vec![0usize; families.len()];
    let mut rows = Vec::new();
    for asset in universe {
        let found: Vec<Option<usize>> = index.iter().map(|m| m.get(asset.as_str()).copied()).collect();
        let mut complete = true;
        for (k, f) in found.iter().enumerate() {
            if f.is_none() {
                drops[k] += 1;
                complete = false;
            }
        }
        if complete {
            let mut row = Vec::with_capacity(columns.len());
            for ((_, t), f) in families.iter().zip(&found) {
                row.extend_from_slice(t.row(f.expect("checked above")));
            }
            rows.push((asset.clone(), row));
        }
    }
    Ok(AssembledWeek {
        features: FeatureTable::new(week, columns, rows)?,
        drops: families.iter().map(|(n, _)| String::from(*n)).zip(drops).collect(),
    })
}

/// Joined, quantised features with the matching targets for one week.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetWeek {
    pub features: QuantizedTable,
    /// `(asset, target)` for rows that have a target; others are
    /// prediction-only.
    pub targets: Vec<(String, f64)>,
    pub drops: Vec<(String, usize)>,
}

pub fn assemble(
    week: NaiveDate,
    families: &[(&str, &FeatureTable)],
    universe: &[String],
    targets: &TargetTable,
    quantiles: usize,
) -> Result<DatasetWeek> {
    let joined = assemble_week(week, families, universe)?;
    let features = rank_quantize(&joined.features, quantiles)?;
    let targets = features
        .assets()
        .iter()
        .filter_map(|a| targets.get(week, a).map(|t| (a.clone(), t)))
        .collect();
    Ok(DatasetWeek { features, targets, drops: joined.drops })
}
